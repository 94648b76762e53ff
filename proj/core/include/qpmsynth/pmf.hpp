#pragma once

#include <complex>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "qpmsynth/dispersion.hpp"
#include "qpmsynth/grid.hpp"
#include "qpmsynth/poling.hpp"

namespace qpmsynth {

enum class Provenance { computed, measured_reconstructed };

const char* to_string(Provenance p) noexcept;

/// Phase-matching amplitude over a spectral grid; rows index signal
/// wavelengths, columns idler wavelengths.
struct PmfGrid {
  SpectralGrid grid;
  Eigen::MatrixXcd amplitude;
  Provenance provenance = Provenance::computed;
};

/// Fourier transform of the +/-1 profile at one phase mismatch, in um,
///   phi(dk) = sum_j s_j (exp(i dk z_{j+1}) - exp(i dk z_j)) / (i dk),
/// evaluated in closed form. dk -> 0 reduces to sum_j s_j (z_{j+1} - z_j).
std::complex<double> phi_of_dk(const DomainPattern& pattern, double dk_rad_per_um);

PmfGrid phi_grid(const DomainPattern& pattern, const DispersionModel& model,
                 const SpectralGrid& grid);

/// Intensity |phi|^2 sampled along the energy-conservation line of a pump,
/// 1/ls = 1/lp - 1/li.
struct AntiDiagonalCut {
  std::vector<double> idler_nm;
  std::vector<double> signal_nm;
  std::vector<double> intensity;
};

/// Cut through a grid, bilinearly interpolating |phi|^2. The idler range is
/// restricted so both wavelengths stay on the grid; `samples` = 0 uses the
/// idler axis count.
AntiDiagonalCut anti_diagonal_cut(const PmfGrid& grid, double pump_nm,
                                  std::size_t samples = 0);

/// Exact cut evaluated directly from the domain pattern.
AntiDiagonalCut anti_diagonal_cut(const DomainPattern& pattern, const DispersionModel& model,
                                  double pump_nm, double idler_lo_nm, double idler_hi_nm,
                                  std::size_t samples);

struct SidelobeResult {
  /// 10 log10(peak / largest side lobe); empty when no secondary maximum
  /// exists outside the main lobe.
  std::optional<double> suppression_db;
  std::size_t peak_index = 0;
  std::size_t main_lobe_begin = 0;  ///< first sample of the main lobe
  std::size_t main_lobe_end = 0;    ///< last sample of the main lobe
  std::optional<std::size_t> sidelobe_index;
};

/// Main lobe = global peak plus the samples down to the first local minima on
/// each flank. Intensities are smoothed with a 3-sample moving average before
/// extrema are located and the ratio is formed from the smoothed values.
SidelobeResult sidelobe_suppression(std::span<const double> intensity);

/// Sidelobe suppression along the anti-diagonal cut of a PMF grid.
SidelobeResult sidelobe_suppression(const PmfGrid& grid, double pump_nm = 775.0);

struct MeasuredImportOptions {
  double noise_floor = 0.0;
  /// Entries below -negative_tolerance * max|I| (after floor subtraction)
  /// are rejected; anything between that and zero clamps to zero.
  double negative_tolerance = 1e-9;
};

/// Real amplitude sqrt(I) from a measured |phi|^2 grid.
PmfGrid pmf_from_measured(const SpectralGrid& grid, const Eigen::MatrixXd& intensity,
                          const MeasuredImportOptions& options = {});

}  // namespace qpmsynth
