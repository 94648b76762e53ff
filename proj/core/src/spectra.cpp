#include "qpmsynth/spectra.hpp"

#include <cmath>
#include <sstream>

#include "qpmsynth/error.hpp"
#include "qpmsynth/units.hpp"

namespace qpmsynth {

double PumpSpec::fwhm_angular() const {
  if (!(fwhm_nm > 0.0) || !(center_nm > 0.0)) {
    throw Error(ErrorCode::domain, "pump center and FWHM must be positive");
  }
  return units::bandwidth_to_angular(fwhm_nm, center_nm);
}

double PumpSpec::sigma_angular() const {
  return fwhm_angular() / std::sqrt(2.0 * std::log(2.0));
}

FilterSpec FilterSpec::flat_top(double center_nm, double width_nm) {
  if (!(width_nm > 0.0) || !(center_nm > 0.0)) {
    throw Error(ErrorCode::domain, "flat-top filter needs a positive center and width");
  }
  return {FilterShape::flat_top, center_nm, width_nm};
}

double FilterSpec::transmission(double wavelength_nm) const noexcept {
  if (shape == FilterShape::none) return 1.0;
  return std::abs(wavelength_nm - center_nm) <= 0.5 * width_nm ? 1.0 : 0.0;
}

Eigen::MatrixXd pump_envelope(const PumpSpec& pump, const SpectralGrid& grid) {
  const double sigma = pump.sigma_angular();
  const double omega_p0 = units::angular_frequency(pump.center_nm);
  const auto ns = static_cast<Eigen::Index>(grid.signal.count);
  const auto ni = static_cast<Eigen::Index>(grid.idler.count);

  Eigen::VectorXd ws(ns), wi(ni);
  for (Eigen::Index i = 0; i < ns; ++i) ws(i) = units::angular_frequency(grid.signal[static_cast<std::size_t>(i)]);
  for (Eigen::Index j = 0; j < ni; ++j) wi(j) = units::angular_frequency(grid.idler[static_cast<std::size_t>(j)]);

  Eigen::MatrixXd alpha(ns, ni);
  for (Eigen::Index j = 0; j < ni; ++j) {
    for (Eigen::Index i = 0; i < ns; ++i) {
      const double x = (ws(i) + wi(j) - omega_p0) / sigma;
      alpha(i, j) = std::exp(-x * x);
    }
  }
  return alpha;
}

double total_power(const JsaMatrix& jsa) {
  return jsa.amplitude.squaredNorm() * jsa.grid.cell_area();
}

JsaMatrix normalize(JsaMatrix jsa) {
  const double power = total_power(jsa);
  if (!(power > 0.0) || !std::isfinite(power)) {
    throw Error(ErrorCode::degenerate, "cannot normalize a JSA with zero or non-finite power");
  }
  if (std::abs(power - 1.0) > 1e-12) jsa.amplitude /= std::sqrt(power);
  jsa.normalized = true;
  return jsa;
}

JsaMatrix build_jsa(const Eigen::MatrixXd& pump, const PmfGrid& pmf) {
  if (pump.rows() != pmf.amplitude.rows() || pump.cols() != pmf.amplitude.cols()) {
    std::ostringstream os;
    os << "pump envelope " << pump.rows() << "x" << pump.cols() << " does not match PMF grid "
       << pmf.amplitude.rows() << "x" << pmf.amplitude.cols();
    throw Error(ErrorCode::shape, os.str());
  }
  JsaMatrix jsa;
  jsa.grid = pmf.grid;
  jsa.amplitude = pmf.amplitude.cwiseProduct(pump.cast<std::complex<double>>());
  return normalize(std::move(jsa));
}

namespace {

Eigen::VectorXd transmissions(const FilterSpec& f, const UniformAxis& axis, const char* arm) {
  Eigen::VectorXd t(static_cast<Eigen::Index>(axis.count));
  for (std::size_t k = 0; k < axis.count; ++k) t(static_cast<Eigen::Index>(k)) = f.transmission(axis[k]);
  if (t.sum() == 0.0) {
    throw Error(ErrorCode::degenerate, std::string(arm) + " filter does not overlap the grid");
  }
  return t;
}

}  // namespace

FilteredJsa apply_filters(const JsaMatrix& jsa, const FilterSpec& signal_filter,
                          const FilterSpec& idler_filter) {
  const Eigen::VectorXd ts = transmissions(signal_filter, jsa.grid.signal, "signal");
  const Eigen::VectorXd ti = transmissions(idler_filter, jsa.grid.idler, "idler");

  FilteredJsa out;
  out.jsa.grid = jsa.grid;
  out.jsa.amplitude = ts.asDiagonal() * jsa.amplitude * ti.asDiagonal();

  const double before = total_power(jsa);
  if (!(before > 0.0)) throw Error(ErrorCode::degenerate, "JSA carries no power");
  const double after = total_power(out.jsa);
  if (!(after > 0.0)) throw Error(ErrorCode::degenerate, "filters block all JSA power");
  out.passed_fraction = after / before;
  out.jsa.normalized = jsa.normalized && after == before;
  return out;
}

Eigen::MatrixXd jsi(const JsaMatrix& jsa) { return jsa.amplitude.cwiseAbs2(); }

std::pair<double, double> marginal_peaks(const JsaMatrix& jsa) {
  const Eigen::MatrixXd intensity = jsi(jsa);
  Eigen::Index is = 0, ii = 0;
  intensity.rowwise().sum().maxCoeff(&is);
  intensity.colwise().sum().maxCoeff(&ii);
  return {jsa.grid.signal[static_cast<std::size_t>(is)], jsa.grid.idler[static_cast<std::size_t>(ii)]};
}

}  // namespace qpmsynth
