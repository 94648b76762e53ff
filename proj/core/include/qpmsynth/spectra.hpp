#pragma once

#include <utility>

#include <Eigen/Core>

#include "qpmsynth/grid.hpp"
#include "qpmsynth/pmf.hpp"

namespace qpmsynth {

/// Gaussian pump with an intensity FWHM given in wavelength.
struct PumpSpec {
  double center_nm = 775.0;
  double fwhm_nm = 1.0;

  /// Intensity FWHM in angular frequency, 2 pi c dlambda / lambda^2 (rad/fs).
  double fwhm_angular() const;
  /// Amplitude width sigma_p = FWHM / sqrt(2 ln 2) (rad/fs).
  double sigma_angular() const;
};

enum class FilterShape { none, flat_top };

/// Ideal band-pass filter. `width_nm` is the full width of the flat top.
struct FilterSpec {
  FilterShape shape = FilterShape::none;
  double center_nm = 0.0;
  double width_nm = 0.0;

  static FilterSpec none() { return {}; }
  static FilterSpec flat_top(double center_nm, double width_nm);

  double transmission(double wavelength_nm) const noexcept;
};

struct JsaMatrix {
  SpectralGrid grid;
  Eigen::MatrixXcd amplitude;
  bool normalized = false;
};

/// alpha = exp(-(Omega_s + Omega_i)^2 / sigma_p^2), detunings measured
/// against the pump center.
Eigen::MatrixXd pump_envelope(const PumpSpec& pump, const SpectralGrid& grid);

/// Sum |f|^2 * cell area.
double total_power(const JsaMatrix& jsa);

/// Rescales to unit total power. A JSA already at unit power (to rounding)
/// is returned unchanged.
JsaMatrix normalize(JsaMatrix jsa);

/// Elementwise pump * pmf, normalized.
JsaMatrix build_jsa(const Eigen::MatrixXd& pump, const PmfGrid& pmf);

struct FilteredJsa {
  JsaMatrix jsa;                ///< not renormalized
  double passed_fraction = 0.0; ///< filtered power / input power
};

FilteredJsa apply_filters(const JsaMatrix& jsa, const FilterSpec& signal_filter,
                          const FilterSpec& idler_filter);

Eigen::MatrixXd jsi(const JsaMatrix& jsa);

/// Wavelengths at the maxima of the signal and idler marginals of |f|^2.
std::pair<double, double> marginal_peaks(const JsaMatrix& jsa);

}  // namespace qpmsynth
