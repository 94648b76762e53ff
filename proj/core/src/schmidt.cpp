#include "qpmsynth/schmidt.hpp"

#include <Eigen/SVD>

#include "qpmsynth/error.hpp"

namespace qpmsynth {

SchmidtResult schmidt_decompose(const Eigen::MatrixXcd& amplitude) {
  if (amplitude.size() == 0 || !amplitude.allFinite()) {
    throw Error(ErrorCode::degenerate, "JSA must be non-empty with finite entries");
  }
  const double scale = amplitude.cwiseAbs().maxCoeff();
  if (!(scale > 0.0)) throw Error(ErrorCode::degenerate, "JSA is identically zero");

  // Pre-scaling keeps the decomposition independent of the amplitude units.
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(amplitude / scale);
  const Eigen::VectorXd& s = svd.singularValues();

  SchmidtResult r;
  const double total = s.squaredNorm();
  r.coefficients.resize(static_cast<std::size_t>(s.size()));
  double purity = 0.0;
  for (Eigen::Index k = 0; k < s.size(); ++k) {
    const double lambda = s(k) * s(k) / total;
    r.coefficients[static_cast<std::size_t>(k)] = lambda;
    purity += lambda * lambda;
  }
  r.purity = purity;
  r.schmidt_number = 1.0 / purity;
  r.heralded_g2 = 1.0 + purity;
  return r;
}

SchmidtResult schmidt_decompose(const JsaMatrix& jsa) { return schmidt_decompose(jsa.amplitude); }

SchmidtResult purity_from_measured(const SpectralGrid& grid, const Eigen::MatrixXd& intensity,
                                   const PumpSpec& pump, const MeasuredImportOptions& options) {
  const PmfGrid pmf = pmf_from_measured(grid, intensity, options);
  return schmidt_decompose(build_jsa(pump_envelope(pump, grid), pmf));
}

HeraldingEfficiency spectral_heralding_efficiency(const JsaMatrix& jsa,
                                                  const FilterSpec& signal_filter,
                                                  const FilterSpec& idler_filter) {
  const double total = total_power(jsa);
  if (!(total > 0.0)) throw Error(ErrorCode::degenerate, "JSA carries no power");

  const auto both = apply_filters(jsa, signal_filter, idler_filter);
  const auto idler_only = apply_filters(jsa, FilterSpec::none(), idler_filter);
  const auto signal_only = apply_filters(jsa, signal_filter, FilterSpec::none());

  const double idler_pass = idler_only.passed_fraction;
  const double signal_pass = signal_only.passed_fraction;
  if (!(idler_pass > 0.0) || !(signal_pass > 0.0)) {
    throw Error(ErrorCode::degenerate, "conditioning arm passes no power");
  }

  HeraldingEfficiency h;
  h.joint_pass = both.passed_fraction;
  h.signal = h.joint_pass / idler_pass;
  h.idler = h.joint_pass / signal_pass;
  return h;
}

}  // namespace qpmsynth
