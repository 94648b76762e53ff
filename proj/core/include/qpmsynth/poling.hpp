#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace qpmsynth {

/// Amplitude of the m-th Fourier component of a poled grating with duty
/// cycle D, (2 / (m pi)) sin^2(pi m D). This is the design-target scale used
/// by the generator. For odd m at D = 0.5 it coincides with the true harmonic
/// magnitude (2 / (m pi)) |sin(pi m D)|; for other duties the two differ.
/// Throws ErrorCode::domain for m < 1 or D outside (0, 1).
double effective_order_amplitude(int order, double duty);

/// Duty cycle used for an order: 0.5 for odd m, (m - 1) / (m + 1) for even m.
double optimal_duty(int order);

/// A run of identical poling periods.
struct PolingSegment {
  int order = 1;
  double duty = 0.5;
  double period_um = 0.0;     ///< order * base period
  std::int64_t periods = 0;   ///< whole periods only
  double phase_offset = 0.0;  ///< fraction of a period, [0, 1)

  double length_um() const { return static_cast<double>(periods) * period_um; }
  bool operator==(const PolingSegment&) const = default;
};

/// An ordered list of poling segments. The constructor enforces the
/// per-segment invariants (period = order * base period, whole periods,
/// 0 < D < 1, phase offset in [0, 1)).
class CrystalDesign {
 public:
  CrystalDesign(double base_period_um, std::vector<PolingSegment> segments);

  double base_period_um() const noexcept { return base_period_um_; }
  const std::vector<PolingSegment>& segments() const noexcept { return segments_; }
  double total_length_um() const noexcept;

  /// Reversing the segment list reproduces it in (order, duty, periods).
  bool is_mirror_symmetric() const noexcept;

  /// Number of distinct poling periods used.
  std::size_t distinct_orders() const;

  bool operator==(const CrystalDesign&) const = default;

 private:
  double base_period_um_;
  std::vector<PolingSegment> segments_;
};

/// A single periodically poled crystal: floor(length / period) periods of
/// order `order` at the optimal duty.
CrystalDesign uniform_design(double total_length_um, double base_period_um, int order = 1);

enum class OrderParity { odd_only, all };

enum class Quantizer {
  /// Each one-period slot takes the order whose amplitude is nearest the
  /// target Gaussian at the slot midpoint; equal runs are merged and rounded
  /// down to whole periods with the residual carried outward.
  midpoint,
  /// Walks outward from the center one period at a time and picks the order
  /// that keeps the accumulated effective nonlinearity closest to the
  /// integral of the target Gaussian (first-order error diffusion).
  area_matching,
};

struct GaussianDesignParams {
  double total_length_um = 10000.0;
  double target_fwhm_um = 8000.0;
  double base_period_um = 46.1;
  int max_order = 31;
  OrderParity parity = OrderParity::odd_only;
  Quantizer quantizer = Quantizer::area_matching;
};

/// Orders the generator may use, ascending.
std::vector<int> allowed_orders(int max_order, OrderParity parity);

/// Unit-peak target Gaussian at position z (um from the crystal entrance).
double target_gaussian(const GaussianDesignParams& params, double z_um);

/// Per-slot order choice of the midpoint quantizer for one half of the
/// crystal, starting at the center and moving outward in steps of one base
/// period, before merging and rounding.
std::vector<int> midpoint_slot_orders(const GaussianDesignParams& params);

/// Mirror-symmetric multi-order design approximating a Gaussian effective
/// nonlinearity. The center segment is first order.
CrystalDesign gaussian_apodized_design(const GaussianDesignParams& params);

/// Explicit +/-1 nonlinearity profile: strictly increasing domain boundaries
/// from 0 to the total length; signs alternate starting at `initial_sign`.
class DomainPattern {
 public:
  DomainPattern() = default;
  DomainPattern(std::vector<double> boundaries_um, int initial_sign);

  /// One +1 domain of the given length (a zero length gives an empty pattern).
  static DomainPattern uniform(double length_um);

  const std::vector<double>& boundaries() const noexcept { return boundaries_; }
  int initial_sign() const noexcept { return initial_sign_; }
  std::size_t domain_count() const noexcept {
    return boundaries_.empty() ? 0 : boundaries_.size() - 1;
  }
  double total_length_um() const noexcept {
    return boundaries_.empty() ? 0.0 : boundaries_.back();
  }
  int sign(std::size_t domain) const noexcept {
    return (domain % 2 == 0) ? initial_sign_ : -initial_sign_;
  }

 private:
  std::vector<double> boundaries_{0.0};
  int initial_sign_ = 1;
};

DomainPattern domains(const CrystalDesign& design);

/// Piecewise-constant effective nonlinearity, effective_order_amplitude of the
/// segment containing each z. Throws ErrorCode::range outside [0, L].
std::vector<double> effective_profile(const CrystalDesign& design,
                                      std::span<const double> z_um);

}  // namespace qpmsynth
