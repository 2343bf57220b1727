#include <cmath>

#include "catch_amalgamated.hpp"
#include "classcover/build.hpp"
#include "classcover/perm_spectrum.hpp"
#include "support.hpp"

using namespace classcover;

namespace {

CycleType type_of(const oracle::Perm& p) {
  std::vector<bool> seen(p.size(), false);
  std::vector<int> lens;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (seen[i]) continue;
    int len = 0;
    for (std::size_t j = i; !seen[j]; j = static_cast<std::size_t>(p[j])) {
      seen[j] = true;
      ++len;
    }
    if (len > 1) lens.push_back(len);
  }
  return CycleType::of(static_cast<int>(p.size()), lens);
}

}  // namespace

TEST_CASE("alternating class sizes match brute-force classes") {
  for (const char* s : {"A_5", "A_6", "A_7"}) {
    CAPTURE(s);
    const auto G = build_group(s);
    const auto M = mirror(G);
    for (const auto& c : oracle::classes(M.group)) {
      const auto t = type_of(M.elems[*c.begin()]);
      CAPTURE(to_string(t));
      CHECK(class_size_an(t) == c.size());
      CHECK(std::exp(log_class_size_an(t)) == Catch::Approx(static_cast<double>(c.size())).epsilon(1e-9));
    }
  }
}

TEST_CASE("cycle types") {
  const auto t = CycleType::of(7, {3, 2, 2});
  CHECK(t.parts == std::vector<int>{3, 2, 2});
  CHECK(t.is_even());
  CHECK_FALSE(CycleType::of(5, {2}).is_even());
  CHECK(CycleType::of(5, {5}).splits_in_an());
  CHECK(CycleType::of(7, {5}).splits_in_an() == false);
  CHECK(CycleType::of(8, {5, 3}).splits_in_an());
  CHECK(CycleType::identity(4).parts == std::vector<int>{1, 1, 1, 1});
  CHECK(thrown([] { CycleType::of(4, {3, 3}); }) == ErrorKind::InvalidSpec);
  CHECK(thrown([] { class_size_an(CycleType::of(6, {2})); }) == ErrorKind::OddParity);
}

TEST_CASE("big class sizes agree with their logarithms") {
  for (int n : {20, 50, 120}) {
    const auto t = CycleType::of(n, {n % 2 ? n - 2 : n - 3});
    CHECK(log_class_size_an(t) == Catch::Approx(std::log(class_size_an(t).convert_to<double>())).epsilon(1e-9));
    CHECK(alternating_group_order(n) == factorial(n) / 2);
  }
  CHECK(alternating_group_order(1) == 1);
}

TEST_CASE("nearest odd length") {
  CHECK(nearest_odd_length(5.2, 10) == 5);
  CHECK(nearest_odd_length(6.0, 10) == 5);
  CHECK(nearest_odd_length(6.01, 10) == 7);
  CHECK(nearest_odd_length(0.0, 10) == 3);
  CHECK(nearest_odd_length(20.0, 10) == 9);
  CHECK(nearest_odd_length(20.0, 11) == 11);
  for (int n = 5; n < 200; ++n)
    for (double x = 0; x <= n; x += 0.37) {
      const int k = nearest_odd_length(x, n);
      CHECK(k % 2 == 1);
      CHECK(k >= 3);
      CHECK(k <= n);
    }
}

TEST_CASE("spectrum values lie in the unit interval") {
  for (int n : {5, 9, 40, 301})
    for (double beta = 0; beta <= 1.0; beta += 0.125) {
      const auto e = spectrum_element_an(n, beta);
      CHECK(e.value.h >= 0.0);
      CHECK(e.value.h <= 1.0);
      CHECK(e.type.is_even());
    }
  CHECK(spectrum_value_an(CycleType::identity(9)).h == 0.0);
}

TEST_CASE("spectrum approaches beta") {
  for (double beta = 0.1; beta < 0.95; beta += 0.1) {
    CAPTURE(beta);
    CHECK(spectrum_row(10000, beta).abs_error < 0.1);
    CHECK(spectrum_row(10000, beta, CycleRule::Alpha).abs_error < 0.1);
    CHECK(spectrum_row(20000, beta).abs_error <= spectrum_row(200, beta).abs_error);
  }
}

TEST_CASE("spectrum argument checks") {
  CHECK(thrown([] { spectrum_element_an(4, 0.5); }) == ErrorKind::PreconditionViolated);
  CHECK(thrown([] { spectrum_element_an(10, 1.5); }) == ErrorKind::OutOfRange);
  CHECK(thrown([] { spectrum_element_an(10, -0.1); }) == ErrorKind::OutOfRange);
}

TEST_CASE("limit report") {
  std::vector<double> conv, osc;
  for (int i = 1; i <= 100; ++i) {
    conv.push_back(0.5 + 1.0 / i);
    osc.push_back(i % 2 ? 0.2 : 0.8);
  }
  const auto a = limit_report(conv);
  CHECK(a.converged);
  CHECK(a.value == Catch::Approx(0.5).margin(0.02));
  CHECK(a.tail_start == 75);
  const auto b = limit_report(osc);
  CHECK_FALSE(b.converged);
  CHECK(b.oscillation == Catch::Approx(0.6));
  CHECK(to_string(b) == "no cofinite limit");
}

TEST_CASE("spectrum csv layout") {
  const auto csv = spectrum_csv({spectrum_row(100, 0.5)});
  CHECK(csv.rfind("n,beta,cycle_length,h,abs_error\n100,0.500000,", 0) == 0);
}
