#pragma once

#include <array>
#include <map>
#include <string>
#include <variant>
#include <vector>

namespace qpmsynth {

/// The three interacting fields of a downconversion process.
enum class Wave { pump = 0, signal = 1, idler = 2 };

const char* to_string(Wave wave) noexcept;

/// One refractive-index axis, n^2(lambda) with lambda in um:
///
///   n^2 = constant
///       + sum_k B_k lambda^2 / (lambda^2 - C_k)      (resonances)
///       + sum_k B_k / (lambda^2 - C_k)                (poles)
///       + sum_k a_k lambda^p_k                        (powers)
///
/// C_k are in um^2. This covers the common single- and double-pole
/// Sellmeier forms as well as the Kato-style B/(lambda^2 - C) variant.
struct SellmeierAxis {
  struct Resonance {
    double strength = 0.0;
    double wavelength_sq_um2 = 0.0;
  };
  struct Pole {
    double strength = 0.0;
    double wavelength_sq_um2 = 0.0;
  };
  struct Power {
    double coefficient = 0.0;
    int exponent = 0;
  };

  double constant = 1.0;
  std::vector<Resonance> resonances;
  std::vector<Pole> poles;
  std::vector<Power> powers;

  double index_squared(double wavelength_um) const;
  /// d(n^2)/d(lambda) in 1/um.
  double index_squared_derivative(double wavelength_um) const;
  double index(double wavelength_um) const;
  /// n_g = n - lambda dn/dlambda.
  double group_index(double wavelength_um) const;
};

/// Central wavelengths of pump, signal and idler (nm).
struct CentralWavelengths {
  double pump_nm = 0.0;
  double signal_nm = 0.0;
  double idler_nm = 0.0;

  double operator[](Wave w) const;
};

struct SellmeierModel {
  std::map<std::string, SellmeierAxis> axes;
  /// Polarization axis label carried by pump, signal, idler (in that order).
  std::array<std::string, 3> assignment;
  double valid_min_um = 0.0;
  double valid_max_um = 0.0;
  CentralWavelengths centers;
};

/// First-order expansion about the central frequencies:
/// k_x(omega) = k_x0 + k'_x (omega - omega_x0).
struct LinearizedModel {
  struct Terms {
    double wavenumber_rad_per_um = 0.0;
    double group_slowness_fs_per_um = 0.0;
  };
  std::array<Terms, 3> waves;  ///< indexed by Wave
  double valid_min_nm = 0.0;
  double valid_max_nm = 0.0;
  CentralWavelengths centers;
};

/// Pluggable dispersion description. Construct through the factories,
/// which enforce the model invariants; instances are immutable.
class DispersionModel {
 public:
  static DispersionModel sellmeier(SellmeierModel model);
  static DispersionModel linearized(LinearizedModel model);

  bool is_sellmeier() const noexcept;
  const SellmeierModel& as_sellmeier() const;
  const LinearizedModel& as_linearized() const;

  const CentralWavelengths& centers() const noexcept;
  double valid_min_nm() const noexcept;
  double valid_max_nm() const noexcept;

 private:
  explicit DispersionModel(std::variant<SellmeierModel, LinearizedModel> v);
  std::variant<SellmeierModel, LinearizedModel> model_;
};

struct PhaseMismatch {
  double value = 0.0;  ///< k_p - k_s - k_i, rad/um
  double k_pump = 0.0;
  double k_signal = 0.0;
  double k_idler = 0.0;
};

/// Wavenumber of `wave` at `wavelength_nm`, rad/um.
double wavenumber(const DispersionModel& model, double wavelength_nm, Wave wave);

/// dk/domega of `wave` at `wavelength_nm`, fs/um. The query must lie strictly
/// inside the validity range.
double group_slowness(const DispersionModel& model, double wavelength_nm, Wave wave);

/// Phase mismatch for a signal/idler pair; the pump wavelength follows from
/// energy conservation.
PhaseMismatch delta_k(const DispersionModel& model, double signal_nm, double idler_nm);

/// Orientation of the Delta k = const ridge, Omega_i / Omega_s
/// = -(k'_p - k'_s) / (k'_p - k'_i) at the central wavelengths.
double gvm_ridge_slope(const DispersionModel& model);

/// Expands `model` to first order about its central wavelengths.
DispersionModel linearize(const DispersionModel& model);

/// Same physics with the signal and idler roles exchanged.
DispersionModel swap_signal_idler(const DispersionModel& model);

}  // namespace qpmsynth
