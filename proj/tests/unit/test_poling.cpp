#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "qpmsynth/error.hpp"
#include "qpmsynth/pmf.hpp"
#include "qpmsynth/poling.hpp"
#include "test_support.hpp"

using namespace qpmsynth;

namespace {

constexpr double kPi = std::numbers::pi;

GaussianDesignParams reference_params(Quantizer q = Quantizer::area_matching) {
  GaussianDesignParams p;
  p.total_length_um = 10000.0;
  p.target_fwhm_um = 8000.0;
  p.base_period_um = 46.1;
  p.max_order = 31;
  p.quantizer = q;
  return p;
}

ErrorCode code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an Error");
  return ErrorCode::usage;
}

std::vector<double> segment_starts(const CrystalDesign& d) {
  std::vector<double> s;
  double z = 0.0;
  for (const auto& seg : d.segments()) {
    s.push_back(z);
    z += seg.length_um();
  }
  return s;
}

}  // namespace

TEST_CASE("order amplitudes and duties") {
  CHECK(effective_order_amplitude(1, 0.5) == doctest::Approx(0.63662).epsilon(1e-5));
  CHECK(effective_order_amplitude(1, 0.5) == doctest::Approx(2.0 / kPi).epsilon(1e-15));
  CHECK(std::abs(effective_order_amplitude(2, 0.5)) < 1e-15);
  CHECK(effective_order_amplitude(2, 1.0 / 3.0) == doctest::Approx(0.75 / kPi).epsilon(1e-14));
  CHECK(effective_order_amplitude(2, 1.0 / 3.0) == doctest::Approx(0.23873).epsilon(1e-4));
  CHECK(optimal_duty(1) == 0.5);
  CHECK(optimal_duty(3) == 0.5);
  CHECK(optimal_duty(2) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(optimal_duty(5) == 0.5);
  CHECK(optimal_duty(4) == doctest::Approx(0.6).epsilon(1e-15));
  CHECK(code_of([] { (void)effective_order_amplitude(0, 0.5); }) == ErrorCode::domain);
  CHECK(code_of([] { (void)effective_order_amplitude(1, 1.0); }) == ErrorCode::domain);
  CHECK(code_of([] { (void)optimal_duty(0); }) == ErrorCode::domain);
}

TEST_CASE("single-order square wave: numerical harmonic vs the designer's amplitude") {
  const double base = 46.1;
  for (int m : {1, 3, 5, 7}) {
    const auto d = uniform_design(20 * m * base, base, m);
    const auto pat = domains(d);
    const long double dk = 2.0L * 3.14159265358979323846264L / base;  // m-th harmonic of m*base
    const auto phi = test::quadrature_phi(pat, dk, m * base / 1250.0);
    const double amp = static_cast<double>(std::abs(phi)) / d.total_length_um();
    CHECK(amp == doctest::Approx(effective_order_amplitude(m, 0.5)).epsilon(0.02));
    CHECK(amp == doctest::Approx(effective_order_amplitude(m, 0.5)).epsilon(1e-9));
  }
  SUBCASE("even order at (m-1)/(m+1) follows |sin|, not sin^2") {
    const double D = optimal_duty(2);
    PolingSegment s{2, D, 2 * base, 20, 0.0};
    const CrystalDesign d(base, {s});
    const auto phi = test::quadrature_phi(domains(d), 2.0L * 3.14159265358979323846264L / base,
                                          2 * base / 1250.0);
    const double amp = static_cast<double>(std::abs(phi)) / d.total_length_um();
    const double standard = 2.0 / (2 * kPi) * std::abs(std::sin(2 * kPi * D));
    CHECK(amp == doctest::Approx(standard).epsilon(1e-9));
    CHECK(amp / effective_order_amplitude(2, D) == doctest::Approx(2.0 / std::sqrt(3.0)).epsilon(1e-9));
  }
}

TEST_CASE("domains of simple designs") {
  const double L1 = 46.1;
  SUBCASE("one first-order period") {
    const CrystalDesign d(L1, {PolingSegment{1, 0.5, L1, 1, 0.0}});
    const auto p = domains(d);
    REQUIRE(p.boundaries().size() == 3);
    CHECK(p.boundaries()[0] == 0.0);
    CHECK(p.boundaries()[1] == doctest::Approx(L1 / 2).epsilon(1e-15));
    CHECK(p.boundaries()[2] == doctest::Approx(L1).epsilon(1e-15));
    CHECK(p.sign(0) == 1);
    CHECK(p.sign(1) == -1);
  }
  SUBCASE("one second-order period at D = 1/3") {
    const CrystalDesign d(L1, {PolingSegment{2, 1.0 / 3.0, 2 * L1, 1, 0.0}});
    const auto p = domains(d);
    REQUIRE(p.boundaries().size() == 3);
    CHECK(p.boundaries()[1] == doctest::Approx(2 * L1 / 3).epsilon(1e-14));
    CHECK(p.boundaries()[2] - p.boundaries()[1] == doctest::Approx(4 * L1 / 3).epsilon(1e-14));
    CHECK(p.initial_sign() == 1);
  }
  SUBCASE("phase offset shifts the square wave") {
    const CrystalDesign d(L1, {PolingSegment{1, 0.5, L1, 2, 0.25}});
    const auto p = domains(d);
    // +1 on [0.25, 0.75) L1 and [1.25, 1.75) L1
    REQUIRE(p.boundaries().size() == 6);
    CHECK(p.initial_sign() == -1);
    CHECK(p.boundaries()[1] == doctest::Approx(0.25 * L1));
    CHECK(p.boundaries()[2] == doctest::Approx(0.75 * L1));
    CHECK(p.boundaries()[5] == doctest::Approx(2 * L1));
  }
  SUBCASE("empty and zero-length patterns") {
    CHECK(DomainPattern::uniform(0.0).domain_count() == 0);
    CHECK(DomainPattern::uniform(5.0).domain_count() == 1);
    CHECK(code_of([] { (void)DomainPattern({0.0, 2.0, 1.0}, 1); }) == ErrorCode::domain);
    CHECK(code_of([] { (void)DomainPattern({1.0, 2.0}, 1); }) == ErrorCode::domain);
    CHECK(code_of([] { (void)DomainPattern({0.0, 2.0}, 0); }) == ErrorCode::domain);
  }
}

TEST_CASE("design validation") {
  const double L1 = 46.1;
  CHECK(code_of([&] { (void)CrystalDesign(L1, {PolingSegment{3, 0.5, 2 * L1, 1, 0.0}}); }) ==
        ErrorCode::domain);
  CHECK(code_of([&] { (void)CrystalDesign(L1, {PolingSegment{1, 0.5, L1, 0, 0.0}}); }) ==
        ErrorCode::domain);
  CHECK(code_of([&] { (void)CrystalDesign(L1, {PolingSegment{1, 0.0, L1, 1, 0.0}}); }) ==
        ErrorCode::domain);
  CHECK(code_of([&] { (void)CrystalDesign(L1, {PolingSegment{1, 0.5, L1, 1, 1.0}}); }) ==
        ErrorCode::domain);
  CHECK_NOTHROW((void)CrystalDesign(L1, {PolingSegment{3, 0.5, 3 * L1 + 5e-10, 1, 0.0}}));

  auto p = reference_params();
  p.target_fwhm_um = 50.0;
  CHECK(code_of([&] { (void)gaussian_apodized_design(p); }) == ErrorCode::infeasible);
  p = reference_params();
  p.total_length_um = 60.0;
  CHECK(code_of([&] { (void)gaussian_apodized_design(p); }) == ErrorCode::infeasible);
  // a crystal much shorter than the target width is simply unapodized
  p = reference_params();
  p.total_length_um = 3000.0;
  CHECK(gaussian_apodized_design(p).segments().size() == 1);
  p = reference_params();
  p.max_order = 30;
  CHECK(code_of([&] { (void)gaussian_apodized_design(p); }) == ErrorCode::domain);
}

TEST_CASE("uniform design") {
  const auto d = uniform_design(10000.0, 46.1);
  REQUIRE(d.segments().size() == 1);
  CHECK(d.segments()[0].periods == 216);
  CHECK(d.total_length_um() == doctest::Approx(216 * 46.1));
  const std::vector<double> z{0.0, 1234.5, d.total_length_um()};
  for (double a : effective_profile(d, z)) CHECK(a == doctest::Approx(2.0 / kPi).epsilon(1e-15));
}

TEST_CASE("generated designs share the structural invariants") {
  for (Quantizer q : {Quantizer::area_matching, Quantizer::midpoint}) {
    for (double L : {4000.0, 10000.0, 20000.0}) {
      auto p = reference_params(q);
      p.total_length_um = L;
      const auto d = gaussian_apodized_design(p);
      CAPTURE(L);
      CAPTURE(static_cast<int>(q));

      // mirror symmetry: reversing the segment list reproduces it
      auto reversed = d.segments();
      std::reverse(reversed.begin(), reversed.end());
      CHECK(reversed == d.segments());
      CHECK(d.is_mirror_symmetric());

      // center segment is first order
      const auto& center = d.segments()[d.segments().size() / 2];
      CHECK(center.order == 1);
      CHECK(effective_profile(d, std::vector<double>{d.total_length_um() / 2})[0] ==
            doctest::Approx(2.0 / kPi).epsilon(1e-15));

      // adjacent equal-order segments are merged
      for (std::size_t i = 1; i < d.segments().size(); ++i) {
        CHECK(d.segments()[i].order != d.segments()[i - 1].order);
      }
      // length is the sum of whole periods, within the crystal
      double total = 0.0;
      for (const auto& s : d.segments()) {
        CHECK(s.period_um == doctest::Approx(s.order * p.base_period_um).epsilon(1e-15));
        CHECK(s.duty == 0.5);
        total += static_cast<double>(s.periods) * s.period_um;
      }
      CHECK(total == d.total_length_um());
      CHECK(d.total_length_um() <= L + 1e-9);

      // domain recount and whole-period intervals
      const auto pat = domains(d);
      std::int64_t expected = 0;
      for (const auto& s : d.segments()) expected += 2 * s.periods;
      CHECK(static_cast<std::int64_t>(pat.domain_count()) == expected);
      const auto starts = segment_starts(d);
      std::size_t j = 0;
      for (std::size_t si = 0; si < d.segments().size(); ++si) {
        const auto& s = d.segments()[si];
        for (std::int64_t k = 0; k < 2 * s.periods; ++k, ++j) {
          const double width = pat.boundaries()[j + 1] - pat.boundaries()[j];
          const double want = (k % 2 == 0 ? s.duty : 1.0 - s.duty) * s.period_um;
          CHECK(std::abs(width - want) < 1e-9);
        }
      }
    }
  }
}

TEST_CASE("midpoint quantizer matches an exhaustive per-slot search") {
  GaussianDesignParams p = reference_params(Quantizer::midpoint);
  p.total_length_um = 2000.0;
  p.target_fwhm_um = 1000.0;
  const auto slots = midpoint_slot_orders(p);
  const std::int64_t n = static_cast<std::int64_t>(std::floor(1000.0 / 46.1));
  REQUIRE(static_cast<std::int64_t>(slots.size()) == n);
  for (std::int64_t j = 0; j < n; ++j) {
    const double off = (j + 0.5) * 46.1;
    const double target = 2.0 / kPi * std::exp(-4.0 * std::log(2.0) * off * off / 1e6);
    int best = 1;
    double best_err = 1e300;
    for (int m = 1; m <= 31; m += 2) {
      const double a = 2.0 / (m * kPi) * std::pow(std::sin(kPi * m * 0.5), 2);
      const double err = std::abs(a - target);
      if (err < best_err) {
        best_err = err;
        best = m;
      }
    }
    CHECK(slots[static_cast<std::size_t>(j)] == best);
  }
}

TEST_CASE("midpoint-quantized segments are optimal at their midpoints") {
  for (auto [L, parity] : {std::pair{2000.0, OrderParity::odd_only}, {10000.0, OrderParity::odd_only},
                           {20000.0, OrderParity::odd_only}, {30000.0, OrderParity::odd_only},
                           {20000.0, OrderParity::all}}) {
    auto p = reference_params(Quantizer::midpoint);
    p.parity = parity;
    if (parity == OrderParity::all) p.max_order = 12;
    p.total_length_um = L;
    if (L == 2000.0) p.target_fwhm_um = 1000.0;
    const auto d = gaussian_apodized_design(p);
    const auto starts = segment_starts(d);
    const double offset = (L - d.total_length_um()) / 2.0;  // the design is centered on L/2
    for (std::size_t i = 0; i < d.segments().size(); ++i) {
      const auto& s = d.segments()[i];
      const double mid = starts[i] + s.length_um() / 2.0 + offset;
      const double target = effective_order_amplitude(1, 0.5) * target_gaussian(p, mid);
      const double mine = std::abs(effective_order_amplitude(s.order, s.duty) - target);
      for (int m : allowed_orders(p.max_order, p.parity)) {
        CAPTURE(L);
        CAPTURE(i);
        CHECK(std::abs(effective_order_amplitude(m, optimal_duty(m)) - target) >= mine);
      }
    }
  }
}

TEST_CASE("quasi-flat target gives a plain periodically poled crystal") {
  for (Quantizer q : {Quantizer::area_matching, Quantizer::midpoint}) {
    auto p = reference_params(q);
    p.target_fwhm_um = 10.0 * p.total_length_um;
    const auto d = gaussian_apodized_design(p);
    REQUIRE(d.segments().size() == 1);
    CHECK(d.segments()[0].order == 1);
    CHECK(d.segments()[0].duty == 0.5);
  }
}

TEST_CASE("long crystals reach high orders at the edges") {
  // An 8 mm Gaussian only falls to the 31st-order amplitude about 8.9 mm from
  // the center, so the full ladder needs a crystal of roughly 22 mm or more.
  auto p = reference_params(Quantizer::midpoint);
  p.total_length_um = 24000.0;
  const auto d = gaussian_apodized_design(p);
  CHECK(d.distinct_orders() == 8);
  REQUIRE(d.segments().front().order == 31);
  CHECK(d.segments().back().order == 31);
  const auto& edge = d.segments().front();
  const double z = edge.length_um() / 2.0;
  CHECK(effective_profile(d, std::vector<double>{z})[0] == doctest::Approx(0.02054).epsilon(1e-3));

  // at 10 mm the edge target is still close to the third-order amplitude
  const auto short_design = gaussian_apodized_design(reference_params(Quantizer::midpoint));
  CHECK(short_design.segments().front().order <= 5);
}

TEST_CASE("all-orders parity uses (m-1)/(m+1) duties for even orders") {
  auto p = reference_params(Quantizer::midpoint);
  p.parity = OrderParity::all;
  p.max_order = 8;
  p.total_length_um = 20000.0;
  const auto d = gaussian_apodized_design(p);
  bool saw_even = false;
  for (const auto& s : d.segments()) {
    CHECK(s.duty == optimal_duty(s.order));
    saw_even = saw_even || s.order % 2 == 0;
  }
  CHECK(saw_even);
  CHECK(d.is_mirror_symmetric());
}

TEST_CASE("effective profile rejects points outside the crystal") {
  const auto d = uniform_design(1000.0, 46.1);
  CHECK(code_of([&] { (void)effective_profile(d, std::vector<double>{-1.0}); }) == ErrorCode::range);
  CHECK(code_of([&] { (void)effective_profile(d, std::vector<double>{d.total_length_um() + 1.0}); }) ==
        ErrorCode::range);
}
