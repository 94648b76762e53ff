#pragma once

// Shared fixtures and independent oracles for the unit tests.

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "qpmsynth/dispersion.hpp"
#include "qpmsynth/io.hpp"
#include "qpmsynth/poling.hpp"

namespace qpmsynth::test {

inline std::string data_path(const std::string& name) {
  return std::string(QPMSYNTH_TEST_DATA_DIR) + "/" + name;
}

inline const DispersionModel& ktp() {
  static const DispersionModel model = io::load_dispersion(data_path("ktp_type2_775nm.json"));
  return model;
}

/// Sellmeier model with n = const on every axis.
inline DispersionModel constant_index_model(double n, double lo_um = 0.4, double hi_um = 3.0) {
  SellmeierModel m;
  SellmeierAxis a;
  a.constant = n * n;
  m.axes["x"] = a;
  m.assignment = {"x", "x", "x"};
  m.valid_min_um = lo_um;
  m.valid_max_um = hi_um;
  m.centers = {775.0, 1550.0, 1550.0};
  return DispersionModel::sellmeier(std::move(m));
}

/// Linearized model around 775 -> 1550 + 1550 with the given slownesses.
inline DispersionModel linear_model(double kp1, double ks1, double ki1, double kp0 = 12.0,
                                    double ks0 = 5.9, double ki0 = 6.0) {
  LinearizedModel m;
  m.waves[0] = {kp0, kp1};
  m.waves[1] = {ks0, ks1};
  m.waves[2] = {ki0, ki1};
  m.valid_min_nm = 400.0;
  m.valid_max_nm = 3000.0;
  m.centers = {775.0, 1550.0, 1550.0};
  return DispersionModel::linearized(std::move(m));
}

/// Gauss-Legendre nodes/weights on [-1, 1], 8 points.
inline const std::array<std::pair<long double, long double>, 8>& gauss_legendre8() {
  static const std::array<std::pair<long double, long double>, 8> gl{{
      {-0.9602898564975362316835609L, 0.1012285362903762591525314L},
      {-0.7966664774136267395915539L, 0.2223810344533744705443560L},
      {-0.5255324099163289858177390L, 0.3137066458778872873379622L},
      {-0.1834346424956498049394761L, 0.3626837833783619829651504L},
      {0.1834346424956498049394761L, 0.3626837833783619829651504L},
      {0.5255324099163289858177390L, 0.3137066458778872873379622L},
      {0.7966664774136267395915539L, 0.2223810344533744705443560L},
      {0.9602898564975362316835609L, 0.1012285362903762591525314L},
  }};
  return gl;
}

/// Dense quadrature of integral s(z) exp(i dk z) dz over the pattern: each
/// domain is split into panels of at most `panel_um` and integrated with
/// 8-point Gauss-Legendre in long double.
inline std::complex<long double> quadrature_phi(const DomainPattern& p, long double dk,
                                                long double panel_um) {
  const auto& b = p.boundaries();
  std::complex<long double> total{0.0L, 0.0L};
  for (std::size_t j = 0; j + 1 < b.size(); ++j) {
    const long double z0 = b[j], z1 = b[j + 1];
    const auto panels = static_cast<std::int64_t>(std::ceil((z1 - z0) / panel_um));
    const long double h = (z1 - z0) / static_cast<long double>(panels);
    std::complex<long double> acc{0.0L, 0.0L};
    for (std::int64_t k = 0; k < panels; ++k) {
      const long double a = z0 + h * static_cast<long double>(k);
      for (const auto& [x, w] : gauss_legendre8()) {
        const long double z = a + 0.5L * h * (x + 1.0L);
        acc += w * 0.5L * h * std::complex<long double>(std::cos(dk * z), std::sin(dk * z));
      }
    }
    total += static_cast<long double>(p.sign(j)) * acc;
  }
  return total;
}

/// Random alternating-sign pattern with `domains` widths drawn from [lo, hi].
inline DomainPattern random_pattern(std::mt19937_64& rng, std::size_t domains, double lo,
                                    double hi) {
  std::uniform_real_distribution<double> width(lo, hi);
  std::vector<double> b{0.0};
  for (std::size_t k = 0; k < domains; ++k) b.push_back(b.back() + width(rng));
  return DomainPattern(std::move(b), std::bernoulli_distribution(0.5)(rng) ? 1 : -1);
}

}  // namespace qpmsynth::test
