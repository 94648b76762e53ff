#include "qpmsynth/poling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <sstream>

#include "qpmsynth/error.hpp"
#include "qpmsynth/units.hpp"

namespace qpmsynth {

double effective_order_amplitude(int order, double duty) {
  if (order < 1) {
    throw Error(ErrorCode::domain,
                "QPM order must be >= 1 (the m = 0 component is the DC term 2D - 1)");
  }
  if (!(duty > 0.0 && duty < 1.0)) {
    throw Error(ErrorCode::domain, "duty cycle must lie in (0, 1)");
  }
  const double s = std::sin(units::kPi * order * duty);
  return 2.0 / (order * units::kPi) * s * s;
}

double optimal_duty(int order) {
  if (order < 1) throw Error(ErrorCode::domain, "QPM order must be >= 1");
  if (order % 2 == 1) return 0.5;
  return static_cast<double>(order - 1) / static_cast<double>(order + 1);
}

// ---------------------------------------------------------------------------
// CrystalDesign

CrystalDesign::CrystalDesign(double base_period_um, std::vector<PolingSegment> segments)
    : base_period_um_(base_period_um), segments_(std::move(segments)) {
  if (!(base_period_um_ > 0.0) || !std::isfinite(base_period_um_)) {
    throw Error(ErrorCode::domain, "base period must be positive");
  }
  for (std::size_t i = 0; i < segments_.size(); ++i) {
    const auto& s = segments_[i];
    std::ostringstream where;
    where << "segment " << i << ": ";
    if (s.order < 1) throw Error(ErrorCode::domain, where.str() + "order must be >= 1");
    if (!(s.duty > 0.0 && s.duty < 1.0)) {
      throw Error(ErrorCode::domain, where.str() + "duty must lie in (0, 1)");
    }
    if (std::abs(s.period_um - s.order * base_period_um_) > 1e-9) {
      throw Error(ErrorCode::domain, where.str() + "period must equal order * base period");
    }
    if (s.periods < 1) {
      throw Error(ErrorCode::domain, where.str() + "needs at least one whole period");
    }
    if (!(s.phase_offset >= 0.0 && s.phase_offset < 1.0)) {
      throw Error(ErrorCode::domain, where.str() + "phase offset must lie in [0, 1)");
    }
  }
}

double CrystalDesign::total_length_um() const noexcept {
  double total = 0.0;
  for (const auto& s : segments_) total += s.length_um();
  return total;
}

bool CrystalDesign::is_mirror_symmetric() const noexcept {
  const std::size_t n = segments_.size();
  for (std::size_t i = 0; i < n / 2; ++i) {
    const auto& a = segments_[i];
    const auto& b = segments_[n - 1 - i];
    if (a.order != b.order || a.duty != b.duty || a.periods != b.periods) return false;
  }
  return true;
}

std::size_t CrystalDesign::distinct_orders() const {
  std::set<int> orders;
  for (const auto& s : segments_) orders.insert(s.order);
  return orders.size();
}

namespace {

PolingSegment make_segment(int order, double base_period_um, std::int64_t periods) {
  PolingSegment s;
  s.order = order;
  s.duty = optimal_duty(order);
  s.period_um = order * base_period_um;
  s.periods = periods;
  return s;
}

struct Run {
  int order;
  std::int64_t count;  // slots before rounding, periods after
};

void append_run(std::vector<Run>& runs, int order, std::int64_t count) {
  if (count <= 0) return;
  if (!runs.empty() && runs.back().order == order) {
    runs.back().count += count;
  } else {
    runs.push_back({order, count});
  }
}

void validate(const GaussianDesignParams& p) {
  if (!(p.total_length_um > 0.0) || !(p.target_fwhm_um > 0.0) || !(p.base_period_um > 0.0)) {
    throw Error(ErrorCode::domain, "length, FWHM and base period must be positive");
  }
  if (p.max_order < 1) throw Error(ErrorCode::domain, "max order must be >= 1");
  if (p.parity == OrderParity::odd_only && p.max_order % 2 == 0) {
    throw Error(ErrorCode::domain, "max order must be odd for odd-only designs");
  }
  if (p.target_fwhm_um < 2.0 * p.base_period_um || p.total_length_um < 2.0 * p.base_period_um) {
    throw Error(ErrorCode::infeasible,
                "target FWHM is too small for the base-period granularity");
  }
}

std::int64_t half_slots(const GaussianDesignParams& p) {
  return static_cast<std::int64_t>(std::floor(p.total_length_um / 2.0 / p.base_period_um + 1e-9));
}

/// Amplitude of each allowed order at its duty.
std::vector<double> ladder(const std::vector<int>& orders) {
  std::vector<double> a;
  a.reserve(orders.size());
  for (int m : orders) a.push_back(effective_order_amplitude(m, optimal_duty(m)));
  return a;
}

/// Distance from the center, in um, mapped onto the target Gaussian.
double gaussian_at_offset(double fwhm_um, double offset_um) {
  return std::exp(-4.0 * std::log(2.0) * offset_um * offset_um / (fwhm_um * fwhm_um));
}

/// Offset from the center at which the target amplitude falls to `a`.
double offset_at_amplitude(const GaussianDesignParams& p, double a) {
  const double peak = effective_order_amplitude(1, 0.5);
  if (a >= peak) return 0.0;
  return p.target_fwhm_um * std::sqrt(std::log(peak / a) / (4.0 * std::log(2.0)));
}

std::vector<Run> midpoint_half(const GaussianDesignParams& p) {
  const auto slots = midpoint_slot_orders(p);
  std::vector<Run> runs;
  for (int m : slots) append_run(runs, m, 1);

  // Offset interval over which each order is the nearest to the target,
  // walking the ladder from the largest amplitude down.
  const auto orders = allowed_orders(p.max_order, p.parity);
  const auto amp = ladder(orders);
  std::vector<std::size_t> rank(orders.size());
  for (std::size_t k = 0; k < rank.size(); ++k) rank[k] = k;
  std::stable_sort(rank.begin(), rank.end(), [&](auto a, auto b) { return amp[a] > amp[b]; });
  std::map<int, std::pair<double, double>> band;
  for (std::size_t r = 0; r < rank.size(); ++r) {
    const double a = amp[rank[r]];
    const double lo = r == 0 ? 0.0 : offset_at_amplitude(p, 0.5 * (amp[rank[r - 1]] + a));
    const double hi = r + 1 == rank.size() ? std::numeric_limits<double>::infinity()
                                           : offset_at_amplitude(p, 0.5 * (a + amp[rank[r + 1]]));
    band[orders[rank[r]]] = {lo, hi};
  }

  // Round each run down to whole periods of its own order, so the remainder
  // goes to the next run outward. The count is then clamped so the segment
  // midpoint stays inside the order's band; a run that cannot satisfy this
  // disappears into its neighbours. The final remainder is dropped.
  const double half_length = static_cast<double>(half_slots(p)) * p.base_period_um;
  std::vector<Run> half;
  double z = 0.0;
  double nominal_end = 0.0;
  for (std::size_t k = 0; k < runs.size(); ++k) {
    const int m = runs[k].order;
    const double period = m * p.base_period_um;
    nominal_end += static_cast<double>(runs[k].count) * p.base_period_um;
    auto n = static_cast<std::int64_t>(std::floor((nominal_end - z) / period + 1e-9));
    const auto room = static_cast<std::int64_t>(std::floor((half_length - z) / period + 1e-9));
    if (k > 0) {
      // the center run is mirrored, so its midpoint is the crystal center
      const auto [lo, hi] = band.at(m);
      const auto n_min = std::max<std::int64_t>(
          1, static_cast<std::int64_t>(std::ceil(2.0 * (lo - z) / period - 1e-9)));
      const auto n_max = static_cast<std::int64_t>(
          std::min(std::floor(2.0 * (hi - z) / period + 1e-9), static_cast<double>(room)));
      n = n_min <= n_max ? std::clamp(n, n_min, n_max) : 0;
    }
    n = std::min(n, room);
    if (n <= 0) continue;
    append_run(half, m, n);
    z += static_cast<double>(n) * period;
  }
  return half;
}

std::vector<Run> area_matching_half(const GaussianDesignParams& p) {
  const auto orders = allowed_orders(p.max_order, p.parity);
  const auto amp = ladder(orders);
  const double peak = effective_order_amplitude(1, 0.5);
  const double half_length = p.total_length_um / 2.0;
  const double sigma = p.target_fwhm_um / std::sqrt(8.0 * std::log(2.0));
  const double scale = peak * sigma * std::sqrt(units::kPi / 2.0);
  auto target_area = [&](double offset_um) {
    return scale * std::erf(offset_um / (sigma * std::sqrt(2.0)));
  };

  std::vector<Run> half;
  double z = 0.0;
  double realized = 0.0;
  for (;;) {
    int best = -1;
    double best_err = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < orders.size(); ++k) {
      const double step = orders[k] * p.base_period_um;
      if (z + step > half_length + 1e-9) continue;
      const double err = std::abs(realized + amp[k] * step - target_area(z + step));
      if (err < best_err) {
        best_err = err;
        best = static_cast<int>(k);
      }
    }
    if (best < 0) break;
    const double step = orders[best] * p.base_period_um;
    realized += amp[best] * step;
    z += step;
    append_run(half, orders[best], 1);
  }
  return half;
}

}  // namespace

CrystalDesign uniform_design(double total_length_um, double base_period_um, int order) {
  if (!(total_length_um > 0.0) || !(base_period_um > 0.0) || order < 1) {
    throw Error(ErrorCode::domain, "uniform design needs positive length, period and order");
  }
  const double period = order * base_period_um;
  const auto periods = static_cast<std::int64_t>(std::floor(total_length_um / period + 1e-9));
  if (periods < 1) {
    throw Error(ErrorCode::infeasible, "crystal is shorter than one poling period");
  }
  return CrystalDesign(base_period_um, {make_segment(order, base_period_um, periods)});
}

std::vector<int> allowed_orders(int max_order, OrderParity parity) {
  std::vector<int> orders;
  for (int m = 1; m <= max_order; ++m) {
    if (parity == OrderParity::all || m % 2 == 1) orders.push_back(m);
  }
  return orders;
}

double target_gaussian(const GaussianDesignParams& params, double z_um) {
  return gaussian_at_offset(params.target_fwhm_um, z_um - params.total_length_um / 2.0);
}

std::vector<int> midpoint_slot_orders(const GaussianDesignParams& p) {
  validate(p);
  const auto orders = allowed_orders(p.max_order, p.parity);
  const auto amp = ladder(orders);
  const double peak = effective_order_amplitude(1, 0.5);
  const std::int64_t n = half_slots(p);

  std::vector<int> chosen;
  chosen.reserve(static_cast<std::size_t>(n));
  for (std::int64_t j = 0; j < n; ++j) {
    const double offset = (static_cast<double>(j) + 0.5) * p.base_period_um;
    const double target = peak * gaussian_at_offset(p.target_fwhm_um, offset);
    std::size_t best = 0;
    for (std::size_t k = 1; k < orders.size(); ++k) {
      if (std::abs(amp[k] - target) < std::abs(amp[best] - target)) best = k;
    }
    chosen.push_back(orders[best]);
  }
  return chosen;
}

CrystalDesign gaussian_apodized_design(const GaussianDesignParams& p) {
  validate(p);
  const auto half =
      p.quantizer == Quantizer::midpoint ? midpoint_half(p) : area_matching_half(p);
  if (half.empty() || half.front().order != 1) {
    throw Error(ErrorCode::infeasible, "design has no first-order center segment");
  }

  std::vector<PolingSegment> segments;
  segments.reserve(2 * half.size() - 1);
  for (auto it = half.rbegin(); it != half.rend() - 1; ++it) {
    segments.push_back(make_segment(it->order, p.base_period_um, it->count));
  }
  segments.push_back(make_segment(1, p.base_period_um, 2 * half.front().count));
  for (auto it = half.begin() + 1; it != half.end(); ++it) {
    segments.push_back(make_segment(it->order, p.base_period_um, it->count));
  }
  return CrystalDesign(p.base_period_um, std::move(segments));
}

// ---------------------------------------------------------------------------
// DomainPattern

DomainPattern::DomainPattern(std::vector<double> boundaries_um, int initial_sign)
    : boundaries_(std::move(boundaries_um)), initial_sign_(initial_sign) {
  if (initial_sign_ != 1 && initial_sign_ != -1) {
    throw Error(ErrorCode::domain, "initial sign must be +1 or -1");
  }
  if (boundaries_.empty() || boundaries_.front() != 0.0) {
    throw Error(ErrorCode::domain, "domain boundaries must start at z = 0");
  }
  for (std::size_t i = 1; i < boundaries_.size(); ++i) {
    if (!(boundaries_[i] > boundaries_[i - 1]) || !std::isfinite(boundaries_[i])) {
      throw Error(ErrorCode::domain, "domain boundaries must be strictly increasing");
    }
  }
}

DomainPattern DomainPattern::uniform(double length_um) {
  if (length_um == 0.0) return DomainPattern({0.0}, 1);
  return DomainPattern({0.0, length_um}, 1);
}

DomainPattern domains(const CrystalDesign& design) {
  std::vector<double> boundaries{0.0};
  int first_sign = 0;
  int current = 0;
  double z0 = 0.0;

  for (const auto& seg : design.segments()) {
    const double period = seg.period_um;
    const double span = seg.length_um();
    const double eps = 1e-12 * period;

    // +1 occupies [(k + phi) L, (k + phi + D) L) of the shifted square wave.
    const double start_phase = 1.0 - seg.phase_offset;  // frac(-phi), phi > 0
    const int seg_sign =
        (seg.phase_offset == 0.0 || start_phase < seg.duty) ? 1 : -1;

    if (first_sign == 0) {
      first_sign = seg_sign;
    } else if (seg_sign != current) {
      boundaries.push_back(z0);
    }
    current = seg_sign;

    for (std::int64_t k = -1; k <= seg.periods; ++k) {
      const double kd = static_cast<double>(k);
      for (const double u : {(kd + seg.phase_offset) * period,
                             (kd + seg.phase_offset + seg.duty) * period}) {
        if (u > eps && u < span - eps) {
          boundaries.push_back(z0 + u);
          current = -current;
        }
      }
    }
    z0 += span;
  }
  if (design.segments().empty()) return DomainPattern({0.0}, 1);
  boundaries.push_back(z0);
  return DomainPattern(std::move(boundaries), first_sign);
}

std::vector<double> effective_profile(const CrystalDesign& design,
                                      std::span<const double> z_um) {
  const auto& segs = design.segments();
  std::vector<double> starts;
  starts.reserve(segs.size());
  double z0 = 0.0;
  for (const auto& s : segs) {
    starts.push_back(z0);
    z0 += s.length_um();
  }
  const double total = z0;

  std::vector<double> out;
  out.reserve(z_um.size());
  for (double z : z_um) {
    if (!(z >= 0.0 && z <= total) || segs.empty()) {
      std::ostringstream os;
      os << "position " << z << " um outside the crystal [0, " << total << "]";
      throw Error(ErrorCode::range, os.str());
    }
    auto it = std::upper_bound(starts.begin(), starts.end(), z);
    const auto idx = static_cast<std::size_t>(std::distance(starts.begin(), it)) - 1;
    const auto& s = segs[idx];
    out.push_back(effective_order_amplitude(s.order, s.duty));
  }
  return out;
}

}  // namespace qpmsynth
