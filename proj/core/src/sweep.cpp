#include "qpmsynth/sweep.hpp"

#include <algorithm>
#include <cmath>

#include "qpmsynth/error.hpp"

namespace qpmsynth {

const char* to_string(CurveSource s) noexcept {
  switch (s) {
    case CurveSource::theoretical_cpktp:
      return "theoretical-cpktp";
    case CurveSource::theoretical_ppktp:
      return "theoretical-ppktp";
    case CurveSource::measured_cpktp:
      return "measured-cpktp";
    case CurveSource::other:
      return "other";
  }
  return "other";
}

SweepCurve purity_vs_bandwidth(const PmfGrid& pmf, double pump_center_nm,
                               BandwidthRange range, std::size_t n_points,
                               CurveSource source) {
  if (!(range.lo_nm > 0.0) || range.hi_nm < range.lo_nm) {
    throw Error(ErrorCode::domain, "bandwidth range must be positive and ordered");
  }
  if (n_points == 0 || (n_points == 1 && range.hi_nm != range.lo_nm) ||
      (n_points > 1 && range.hi_nm == range.lo_nm)) {
    throw Error(ErrorCode::domain, "sweep needs >= 2 points over a non-empty range, or one point");
  }

  SweepCurve curve;
  curve.source = source;
  curve.bandwidths_nm.reserve(n_points);
  curve.purities.reserve(n_points);
  for (std::size_t k = 0; k < n_points; ++k) {
    const double bw = n_points == 1
                          ? range.lo_nm
                          : range.lo_nm + (range.hi_nm - range.lo_nm) * static_cast<double>(k) /
                                              static_cast<double>(n_points - 1);
    const PumpSpec pump{pump_center_nm, bw};
    const auto jsa = build_jsa(pump_envelope(pump, pmf.grid), pmf);
    curve.bandwidths_nm.push_back(bw);
    curve.purities.push_back(schmidt_decompose(jsa).purity);
  }
  return curve;
}

Optimum optimal_bandwidth(const SweepCurve& curve) {
  const auto& x = curve.bandwidths_nm;
  const auto& y = curve.purities;
  if (x.empty() || x.size() != y.size()) {
    throw Error(ErrorCode::domain, "sweep curve is empty or inconsistent");
  }
  // max_element returns the first maximum, i.e. the smallest bandwidth.
  const auto k = static_cast<std::size_t>(std::distance(y.begin(), std::max_element(y.begin(), y.end())));
  if (k == 0 || k + 1 == x.size()) return {x[k], y[k], true};

  const double x0 = x[k - 1], x1 = x[k], x2 = x[k + 1];
  const double y0 = y[k - 1], y1 = y[k], y2 = y[k + 1];
  // Vertex of the interpolating parabola (Newton divided differences).
  const double d01 = (y1 - y0) / (x1 - x0);
  const double d12 = (y2 - y1) / (x2 - x1);
  const double a = (d12 - d01) / (x2 - x0);
  if (!(a < 0.0)) return {x1, y1, false};
  const double b = d01 - a * (x0 + x1);
  const double xv = -b / (2.0 * a);
  const double yv = y0 + (xv - x0) * (d01 + a * (xv - x1));
  return {xv, yv, false};
}

ComparisonRow evaluate_pmf(const std::string& name, const PmfGrid& pmf,
                           const CompareOptions& options) {
  ComparisonRow row;
  row.name = name;
  const auto curve =
      purity_vs_bandwidth(pmf, options.pump_center_nm, options.range, options.n_points);
  row.optimum = optimal_bandwidth(curve);
  row.sidelobe_db = sidelobe_suppression(pmf, options.pump_center_nm).suppression_db;

  const PumpSpec pump{options.pump_center_nm, row.optimum.bandwidth_nm};
  const auto jsa = build_jsa(pump_envelope(pump, pmf.grid), pmf);
  const auto [cs, ci] = marginal_peaks(jsa);
  row.filter_signal_center_nm = cs;
  row.filter_idler_center_nm = ci;
  const auto fs = FilterSpec::flat_top(cs, options.filter_width_nm);
  const auto fi = FilterSpec::flat_top(ci, options.filter_width_nm);
  row.filtered_purity = schmidt_decompose(apply_filters(jsa, fs, fi).jsa).purity;
  row.heralding = spectral_heralding_efficiency(jsa, fs, fi);
  return row;
}

std::vector<ComparisonRow> compare_designs(std::span<const DesignCase> designs,
                                           const DispersionModel& model,
                                           const SpectralGrid& grid,
                                           const CompareOptions& options) {
  if (designs.empty()) throw Error(ErrorCode::domain, "compare needs at least one design");
  std::vector<ComparisonRow> rows;
  rows.reserve(designs.size());
  for (const auto& d : designs) {
    rows.push_back(evaluate_pmf(d.name, phi_grid(domains(d.design), model, grid), options));
  }
  return rows;
}

}  // namespace qpmsynth
