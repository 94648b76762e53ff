#include "qpmsynth/dispersion.hpp"

#include <cmath>
#include <sstream>

#include "qpmsynth/error.hpp"
#include "qpmsynth/units.hpp"

namespace qpmsynth {

const char* to_string(Wave wave) noexcept {
  switch (wave) {
    case Wave::pump:
      return "pump";
    case Wave::signal:
      return "signal";
    case Wave::idler:
      return "idler";
  }
  return "unknown";
}

// ---------------------------------------------------------------------------
// SellmeierAxis

double SellmeierAxis::index_squared(double l) const {
  const double l2 = l * l;
  double n2 = constant;
  for (const auto& r : resonances) n2 += r.strength * l2 / (l2 - r.wavelength_sq_um2);
  for (const auto& p : poles) n2 += p.strength / (l2 - p.wavelength_sq_um2);
  for (const auto& p : powers) n2 += p.coefficient * std::pow(l, p.exponent);
  return n2;
}

double SellmeierAxis::index_squared_derivative(double l) const {
  const double l2 = l * l;
  double d = 0.0;
  for (const auto& r : resonances) {
    const double den = l2 - r.wavelength_sq_um2;
    d += -2.0 * r.strength * r.wavelength_sq_um2 * l / (den * den);
  }
  for (const auto& p : poles) {
    const double den = l2 - p.wavelength_sq_um2;
    d += -2.0 * p.strength * l / (den * den);
  }
  for (const auto& p : powers) {
    if (p.exponent != 0) d += p.exponent * p.coefficient * std::pow(l, p.exponent - 1);
  }
  return d;
}

double SellmeierAxis::index(double l) const { return std::sqrt(index_squared(l)); }

double SellmeierAxis::group_index(double l) const {
  const double n = index(l);
  const double dn_dl = index_squared_derivative(l) / (2.0 * n);
  return n - l * dn_dl;
}

double CentralWavelengths::operator[](Wave w) const {
  switch (w) {
    case Wave::pump:
      return pump_nm;
    case Wave::signal:
      return signal_nm;
    case Wave::idler:
      return idler_nm;
  }
  return 0.0;
}

// ---------------------------------------------------------------------------
// DispersionModel

namespace {

void check_centers(const CentralWavelengths& c) {
  if (!(c.pump_nm > 0.0 && c.signal_nm > 0.0 && c.idler_nm > 0.0)) {
    throw Error(ErrorCode::parse, "central wavelengths must be positive");
  }
  const double mismatch = std::abs(1.0 / c.pump_nm - (1.0 / c.signal_nm + 1.0 / c.idler_nm));
  if (mismatch > 1e-9) {
    std::ostringstream os;
    os << "central wavelengths violate energy conservation: |1/lp - 1/ls - 1/li| = "
       << mismatch << " 1/nm";
    throw Error(ErrorCode::parse, os.str());
  }
}

}  // namespace

DispersionModel::DispersionModel(std::variant<SellmeierModel, LinearizedModel> v)
    : model_(std::move(v)) {}

DispersionModel DispersionModel::sellmeier(SellmeierModel m) {
  if (!(m.valid_min_um > 0.0 && m.valid_max_um > m.valid_min_um)) {
    throw Error(ErrorCode::parse, "sellmeier validity range must be non-empty and positive");
  }
  for (int w = 0; w < 3; ++w) {
    if (!m.axes.contains(m.assignment[w])) {
      throw Error(ErrorCode::parse, std::string("axis assignment for ") +
                                        to_string(static_cast<Wave>(w)) +
                                        " names unknown axis '" + m.assignment[w] + "'");
    }
  }
  check_centers(m.centers);
  return DispersionModel(std::move(m));
}

DispersionModel DispersionModel::linearized(LinearizedModel m) {
  if (!(m.valid_min_nm > 0.0 && m.valid_max_nm > m.valid_min_nm)) {
    throw Error(ErrorCode::parse, "linearized validity range must be non-empty and positive");
  }
  check_centers(m.centers);
  return DispersionModel(std::move(m));
}

bool DispersionModel::is_sellmeier() const noexcept {
  return std::holds_alternative<SellmeierModel>(model_);
}

const SellmeierModel& DispersionModel::as_sellmeier() const {
  return std::get<SellmeierModel>(model_);
}

const LinearizedModel& DispersionModel::as_linearized() const {
  return std::get<LinearizedModel>(model_);
}

const CentralWavelengths& DispersionModel::centers() const noexcept {
  return std::visit([](const auto& m) -> const CentralWavelengths& { return m.centers; },
                    model_);
}

double DispersionModel::valid_min_nm() const noexcept {
  if (const auto* s = std::get_if<SellmeierModel>(&model_)) {
    return units::um_to_nm(s->valid_min_um);
  }
  return std::get<LinearizedModel>(model_).valid_min_nm;
}

double DispersionModel::valid_max_nm() const noexcept {
  if (const auto* s = std::get_if<SellmeierModel>(&model_)) {
    return units::um_to_nm(s->valid_max_um);
  }
  return std::get<LinearizedModel>(model_).valid_max_nm;
}

// ---------------------------------------------------------------------------
// Evaluation

namespace {

enum class RangeMode { closed, open };

void check_range(const DispersionModel& model, double wavelength_nm, Wave wave,
                 RangeMode mode) {
  const double lo = model.valid_min_nm();
  const double hi = model.valid_max_nm();
  const bool inside = mode == RangeMode::closed
                          ? (wavelength_nm >= lo && wavelength_nm <= hi)
                          : (wavelength_nm > lo && wavelength_nm < hi);
  if (!std::isfinite(wavelength_nm) || !inside) {
    std::ostringstream os;
    os << to_string(wave);
    if (model.is_sellmeier()) {
      os << " (axis " << model.as_sellmeier().assignment[static_cast<int>(wave)] << ")";
    }
    os << " wavelength " << wavelength_nm << " nm outside "
       << (mode == RangeMode::closed ? "[" : "(") << lo << ", " << hi
       << (mode == RangeMode::closed ? "]" : ")") << " nm";
    throw Error(ErrorCode::range, os.str());
  }
}

const SellmeierAxis& axis_for(const SellmeierModel& m, Wave wave) {
  return m.axes.at(m.assignment[static_cast<int>(wave)]);
}

}  // namespace

double wavenumber(const DispersionModel& model, double wavelength_nm, Wave wave) {
  check_range(model, wavelength_nm, wave, RangeMode::closed);
  if (model.is_sellmeier()) {
    const double l_um = units::nm_to_um(wavelength_nm);
    return units::kTwoPi * axis_for(model.as_sellmeier(), wave).index(l_um) / l_um;
  }
  const auto& lin = model.as_linearized();
  const auto& t = lin.waves[static_cast<int>(wave)];
  const double detuning = units::angular_frequency(wavelength_nm) -
                          units::angular_frequency(lin.centers[wave]);
  return t.wavenumber_rad_per_um + t.group_slowness_fs_per_um * detuning;
}

double group_slowness(const DispersionModel& model, double wavelength_nm, Wave wave) {
  check_range(model, wavelength_nm, wave, RangeMode::open);
  if (model.is_sellmeier()) {
    const double l_um = units::nm_to_um(wavelength_nm);
    return axis_for(model.as_sellmeier(), wave).group_index(l_um) /
           units::kSpeedOfLightUmPerFs;
  }
  return model.as_linearized().waves[static_cast<int>(wave)].group_slowness_fs_per_um;
}

PhaseMismatch delta_k(const DispersionModel& model, double signal_nm, double idler_nm) {
  if (!(signal_nm > 0.0) || !(idler_nm > 0.0)) {
    throw Error(ErrorCode::domain, "signal and idler wavelengths must be positive");
  }
  PhaseMismatch dk;
  dk.k_pump = wavenumber(model, units::pump_wavelength(signal_nm, idler_nm), Wave::pump);
  dk.k_signal = wavenumber(model, signal_nm, Wave::signal);
  dk.k_idler = wavenumber(model, idler_nm, Wave::idler);
  dk.value = dk.k_pump - dk.k_signal - dk.k_idler;
  return dk;
}

double gvm_ridge_slope(const DispersionModel& model) {
  const auto& c = model.centers();
  const double kp = group_slowness(model, c.pump_nm, Wave::pump);
  const double ks = group_slowness(model, c.signal_nm, Wave::signal);
  const double ki = group_slowness(model, c.idler_nm, Wave::idler);
  const double den = kp - ki;
  if (std::abs(den) <= 1e-12 * std::abs(kp)) {
    throw Error(ErrorCode::domain,
                "k'_p equals k'_i: ridge orientation is degenerate (slope undefined)");
  }
  return -(kp - ks) / den;
}

DispersionModel linearize(const DispersionModel& model) {
  if (!model.is_sellmeier()) return model;
  LinearizedModel lin;
  lin.centers = model.centers();
  lin.valid_min_nm = model.valid_min_nm();
  lin.valid_max_nm = model.valid_max_nm();
  for (Wave w : {Wave::pump, Wave::signal, Wave::idler}) {
    auto& t = lin.waves[static_cast<int>(w)];
    t.wavenumber_rad_per_um = wavenumber(model, lin.centers[w], w);
    t.group_slowness_fs_per_um = group_slowness(model, lin.centers[w], w);
  }
  return DispersionModel::linearized(std::move(lin));
}

DispersionModel swap_signal_idler(const DispersionModel& model) {
  auto swap_centers = [](CentralWavelengths c) {
    std::swap(c.signal_nm, c.idler_nm);
    return c;
  };
  if (model.is_sellmeier()) {
    SellmeierModel s = model.as_sellmeier();
    std::swap(s.assignment[1], s.assignment[2]);
    s.centers = swap_centers(s.centers);
    return DispersionModel::sellmeier(std::move(s));
  }
  LinearizedModel l = model.as_linearized();
  std::swap(l.waves[1], l.waves[2]);
  l.centers = swap_centers(l.centers);
  return DispersionModel::linearized(std::move(l));
}

}  // namespace qpmsynth
