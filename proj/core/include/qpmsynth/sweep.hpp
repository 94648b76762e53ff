#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qpmsynth/dispersion.hpp"
#include "qpmsynth/grid.hpp"
#include "qpmsynth/pmf.hpp"
#include "qpmsynth/poling.hpp"
#include "qpmsynth/schmidt.hpp"
#include "qpmsynth/spectra.hpp"

namespace qpmsynth {

enum class CurveSource { theoretical_cpktp, theoretical_ppktp, measured_cpktp, other };

const char* to_string(CurveSource s) noexcept;

struct SweepCurve {
  std::vector<double> bandwidths_nm;  ///< ascending
  std::vector<double> purities;
  CurveSource source = CurveSource::other;
};

struct BandwidthRange {
  double lo_nm = 0.8;
  double hi_nm = 4.6;
};

/// Purity for n evenly spaced pump bandwidths across the range (inclusive).
/// A single point requires lo == hi.
SweepCurve purity_vs_bandwidth(const PmfGrid& pmf, double pump_center_nm,
                               BandwidthRange range, std::size_t n_points,
                               CurveSource source = CurveSource::other);

struct Optimum {
  double bandwidth_nm = 0.0;
  double purity = 0.0;
  bool at_boundary = false;  ///< discrete maximum sits on the sweep edge
};

/// Argmax refined by the parabola through the three samples bracketing the
/// discrete maximum; ties go to the smaller bandwidth. A maximum on the
/// range boundary is returned unrefined with at_boundary set.
Optimum optimal_bandwidth(const SweepCurve& curve);

struct DesignCase {
  std::string name;
  CrystalDesign design;
};

struct CompareOptions {
  double pump_center_nm = 775.0;
  BandwidthRange range{};
  std::size_t n_points = 39;
  double filter_width_nm = 13.0;  ///< flat tops centered on the marginal peaks
};

struct ComparisonRow {
  std::string name;
  Optimum optimum;
  std::optional<double> sidelobe_db;
  double filtered_purity = 0.0;
  HeraldingEfficiency heralding;
  double filter_signal_center_nm = 0.0;
  double filter_idler_center_nm = 0.0;
};

/// Per design: PMF on `grid`, purity sweep and refined optimum, sidelobe
/// suppression along the pump anti-diagonal, and purity / heralding after
/// flat-top filtering at the optimal bandwidth.
std::vector<ComparisonRow> compare_designs(std::span<const DesignCase> designs,
                                           const DispersionModel& model,
                                           const SpectralGrid& grid,
                                           const CompareOptions& options = {});

/// The same evaluation for a single precomputed PMF grid.
ComparisonRow evaluate_pmf(const std::string& name, const PmfGrid& pmf,
                           const CompareOptions& options = {});

}  // namespace qpmsynth
