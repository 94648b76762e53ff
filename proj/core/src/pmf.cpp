#include "qpmsynth/pmf.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "qpmsynth/error.hpp"
#include "qpmsynth/units.hpp"

namespace qpmsynth {

const char* to_string(Provenance p) noexcept {
  return p == Provenance::computed ? "computed" : "measured-reconstructed";
}

std::complex<double> phi_of_dk(const DomainPattern& pattern, double dk) {
  const auto& z = pattern.boundaries();
  const std::size_t n = pattern.domain_count();
  if (n == 0) return {};

  // Small total phase: the telescoped form below cancels catastrophically,
  // so integrate each domain as w * sinc(dk w / 2) * exp(i dk z_mid).
  if (std::abs(dk) * z.back() < 1.0) {
    std::complex<double> sum{};
    for (std::size_t j = 0; j < n; ++j) {
      const double w = z[j + 1] - z[j];
      const double x = 0.5 * dk * w;
      const double sinc = x == 0.0 ? 1.0 : std::sin(x) / x;
      const double mid = 0.5 * (z[j + 1] + z[j]);
      sum += static_cast<double>(pattern.sign(j)) * w * sinc *
             std::complex<double>(std::cos(dk * mid), std::sin(dk * mid));
    }
    return sum;
  }

  // sum_j s_j (E_{j+1} - E_j) with alternating signs telescopes to
  //   s_{n-1} E_n - s_0 E_0 + sum_{j=1}^{n-1} 2 s_{j-1} E_j.
  auto phase = [dk](double zz) { return std::complex<double>(std::cos(dk * zz), std::sin(dk * zz)); };
  std::complex<double> acc = static_cast<double>(pattern.sign(n - 1)) * phase(z[n]) -
                             static_cast<double>(pattern.sign(0)) * phase(z[0]);
  double s = static_cast<double>(pattern.sign(0));
  for (std::size_t j = 1; j < n; ++j) {
    acc += 2.0 * s * phase(z[j]);
    s = -s;
  }
  return acc * std::complex<double>(0.0, -1.0 / dk);
}

PmfGrid phi_grid(const DomainPattern& pattern, const DispersionModel& model,
                 const SpectralGrid& grid) {
  PmfGrid out;
  out.grid = grid;
  out.provenance = Provenance::computed;
  const auto ns = static_cast<Eigen::Index>(grid.signal.count);
  const auto ni = static_cast<Eigen::Index>(grid.idler.count);
  out.amplitude.resize(ns, ni);
  for (Eigen::Index i = 0; i < ns; ++i) {
    const double ls = grid.signal[static_cast<std::size_t>(i)];
    for (Eigen::Index j = 0; j < ni; ++j) {
      const double li = grid.idler[static_cast<std::size_t>(j)];
      out.amplitude(i, j) = phi_of_dk(pattern, delta_k(model, ls, li).value);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Anti-diagonal cuts

namespace {

double bilinear(const Eigen::MatrixXd& v, double fi, double fj) {
  const auto rows = v.rows();
  const auto cols = v.cols();
  fi = std::clamp(fi, 0.0, static_cast<double>(rows - 1));
  fj = std::clamp(fj, 0.0, static_cast<double>(cols - 1));
  const auto i0 = std::min(static_cast<Eigen::Index>(fi), rows - 2);
  const auto j0 = std::min(static_cast<Eigen::Index>(fj), cols - 2);
  const double ti = fi - static_cast<double>(i0);
  const double tj = fj - static_cast<double>(j0);
  return (1 - ti) * (1 - tj) * v(i0, j0) + (1 - ti) * tj * v(i0, j0 + 1) +
         ti * (1 - tj) * v(i0 + 1, j0) + ti * tj * v(i0 + 1, j0 + 1);
}

}  // namespace

AntiDiagonalCut anti_diagonal_cut(const PmfGrid& grid, double pump_nm, std::size_t samples) {
  const auto& s = grid.grid.signal;
  const auto& id = grid.grid.idler;
  if (s.count < 2 || id.count < 2) {
    throw Error(ErrorCode::shape, "anti-diagonal cut needs at least 2x2 grid points");
  }
  const double lo = std::max(id.start_nm, units::conjugate_wavelength(pump_nm, s.stop_nm));
  const double hi = std::min(id.stop_nm, units::conjugate_wavelength(pump_nm, s.start_nm));
  if (!(hi > lo)) {
    std::ostringstream os;
    os << "cut at pump " << pump_nm << " nm does not cross the grid";
    throw Error(ErrorCode::degenerate, os.str());
  }
  if (samples == 0) samples = id.count;
  if (samples < 2) throw Error(ErrorCode::domain, "cut needs at least 2 samples");

  const Eigen::MatrixXd intensity = grid.amplitude.cwiseAbs2();
  AntiDiagonalCut cut;
  cut.idler_nm.resize(samples);
  cut.signal_nm.resize(samples);
  cut.intensity.resize(samples);
  for (std::size_t k = 0; k < samples; ++k) {
    const double li = lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(samples - 1);
    const double ls = units::conjugate_wavelength(pump_nm, li);
    cut.idler_nm[k] = li;
    cut.signal_nm[k] = ls;
    cut.intensity[k] = bilinear(intensity, (ls - s.start_nm) / s.step(), (li - id.start_nm) / id.step());
  }
  return cut;
}

AntiDiagonalCut anti_diagonal_cut(const DomainPattern& pattern, const DispersionModel& model,
                                  double pump_nm, double idler_lo_nm, double idler_hi_nm,
                                  std::size_t samples) {
  if (samples < 2 || !(idler_hi_nm > idler_lo_nm)) {
    throw Error(ErrorCode::domain, "cut needs an increasing idler range and >= 2 samples");
  }
  AntiDiagonalCut cut;
  cut.idler_nm.resize(samples);
  cut.signal_nm.resize(samples);
  cut.intensity.resize(samples);
  for (std::size_t k = 0; k < samples; ++k) {
    const double li = idler_lo_nm + (idler_hi_nm - idler_lo_nm) * static_cast<double>(k) /
                                        static_cast<double>(samples - 1);
    const double ls = units::conjugate_wavelength(pump_nm, li);
    cut.idler_nm[k] = li;
    cut.signal_nm[k] = ls;
    cut.intensity[k] = std::norm(phi_of_dk(pattern, delta_k(model, ls, li).value));
  }
  return cut;
}

SidelobeResult sidelobe_suppression(std::span<const double> intensity) {
  const std::size_t n = intensity.size();
  if (n == 0) throw Error(ErrorCode::degenerate, "empty intensity cut");

  std::vector<double> sm(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t a = i == 0 ? 0 : i - 1;
    const std::size_t b = std::min(i + 1, n - 1);
    double acc = 0.0;
    for (std::size_t k = a; k <= b; ++k) acc += intensity[k];
    sm[i] = acc / static_cast<double>(b - a + 1);
  }

  SidelobeResult r;
  r.peak_index = static_cast<std::size_t>(std::distance(sm.begin(), std::max_element(sm.begin(), sm.end())));
  if (!(sm[r.peak_index] > 0.0)) throw Error(ErrorCode::degenerate, "cut carries no intensity");

  std::size_t l = r.peak_index;
  while (l > 0 && sm[l - 1] < sm[l]) --l;
  std::size_t h = r.peak_index;
  while (h + 1 < n && sm[h + 1] < sm[h]) ++h;
  r.main_lobe_begin = l;
  r.main_lobe_end = h;

  double side = 0.0;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    if (i >= l && i <= h) continue;
    if (sm[i] > sm[i - 1] && sm[i] >= sm[i + 1] && sm[i] > side) {
      side = sm[i];
      r.sidelobe_index = i;
    }
  }
  if (r.sidelobe_index) r.suppression_db = 10.0 * std::log10(sm[r.peak_index] / side);
  return r;
}

SidelobeResult sidelobe_suppression(const PmfGrid& grid, double pump_nm) {
  const auto cut = anti_diagonal_cut(grid, pump_nm);
  return sidelobe_suppression(cut.intensity);
}

PmfGrid pmf_from_measured(const SpectralGrid& grid, const Eigen::MatrixXd& intensity,
                          const MeasuredImportOptions& options) {
  if (intensity.rows() != static_cast<Eigen::Index>(grid.signal.count) ||
      intensity.cols() != static_cast<Eigen::Index>(grid.idler.count)) {
    throw Error(ErrorCode::shape, "intensity matrix does not match its axes");
  }
  if (!intensity.allFinite()) throw Error(ErrorCode::data, "intensity grid has non-finite entries");

  if (!(options.noise_floor >= 0.0)) throw Error(ErrorCode::domain, "noise floor must be >= 0");
  // Negativity is judged on the raw data; entries below the floor clamp to 0.
  const double tol = options.negative_tolerance * intensity.cwiseAbs().maxCoeff();
  PmfGrid out;
  out.grid = grid;
  out.provenance = Provenance::measured_reconstructed;
  out.amplitude.resize(intensity.rows(), intensity.cols());
  for (Eigen::Index i = 0; i < intensity.rows(); ++i) {
    for (Eigen::Index j = 0; j < intensity.cols(); ++j) {
      const double v = intensity(i, j);
      if (v < -tol) {
        std::ostringstream os;
        os << "negative intensity " << v << " at (" << i << ", " << j << ") exceeds tolerance";
        throw Error(ErrorCode::data, os.str());
      }
      out.amplitude(i, j) = std::sqrt(std::max(v - options.noise_floor, 0.0));
    }
  }
  return out;
}

}  // namespace qpmsynth
