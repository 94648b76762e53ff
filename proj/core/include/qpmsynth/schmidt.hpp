#pragma once

#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "qpmsynth/grid.hpp"
#include "qpmsynth/pmf.hpp"
#include "qpmsynth/spectra.hpp"

namespace qpmsynth {

struct SchmidtResult {
  std::vector<double> coefficients;  ///< descending, sums to 1
  double purity = 0.0;               ///< sum of squared coefficients
  double schmidt_number = 0.0;       ///< 1 / purity
  double heralded_g2 = 0.0;          ///< 1 + purity
};

/// Schmidt decomposition of a JSA by singular values of its amplitude
/// matrix; lambda_k = s_k^2 / sum_j s_j^2. The result is independent of the
/// matrix scale. Throws ErrorCode::degenerate for an all-zero matrix.
SchmidtResult schmidt_decompose(const Eigen::MatrixXcd& amplitude);
SchmidtResult schmidt_decompose(const JsaMatrix& jsa);

/// Measured |phi|^2 -> real PMF -> JSA with a Gaussian pump -> decomposition.
SchmidtResult purity_from_measured(const SpectralGrid& grid, const Eigen::MatrixXd& intensity,
                                   const PumpSpec& pump,
                                   const MeasuredImportOptions& options = {});

struct HeraldingEfficiency {
  double signal = 0.0;      ///< P(signal passes | idler passed)
  double idler = 0.0;       ///< P(idler passes | signal passed)
  double joint_pass = 0.0;  ///< fraction of pairs with both photons passed
  std::string_view definition = "conditional";
};

/// Spectral heralding efficiencies of a normalized JSA under filters:
/// joint = |T_s T_i f|^2, signal = joint / |T_i f|^2, idler = joint / |T_s f|^2.
HeraldingEfficiency spectral_heralding_efficiency(const JsaMatrix& jsa,
                                                  const FilterSpec& signal_filter,
                                                  const FilterSpec& idler_filter);

}  // namespace qpmsynth
