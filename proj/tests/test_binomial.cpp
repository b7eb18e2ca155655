#include <cmath>

#include "doctest.h"
#include "mcb/binomial.hpp"
#include "mcb/special_functions.hpp"

using namespace mcb;

// Reference values from mpmath (40 digits) and scipy.

TEST_CASE("incomplete beta") {
  CHECK(incomplete_beta(2.5, 3.5, 0.3) == doctest::Approx(0.2967529892956663783).epsilon(1e-13));
  CHECK(incomplete_beta(0.5, 25, 0.01) == doctest::Approx(0.5194086879238949594).epsilon(1e-13));
  CHECK(incomplete_beta(50, 0.5, 0.99) == doctest::Approx(0.3173043978741973734).epsilon(1e-12));
  CHECK(incomplete_beta(1000, 2000, 0.33) == doctest::Approx(0.3506326761341834189).epsilon(1e-11));
  CHECK(incomplete_beta(2, 3, 0.0) == 0.0);
  CHECK(incomplete_beta(2, 3, 1.0) == 1.0);
}

TEST_CASE("student t tail") {
  CHECK(student_t_sf(2.0, 100) == doctest::Approx(0.02410608936556682).epsilon(1e-12));
  CHECK(student_t_sf(-1.3, 100) == doctest::Approx(0.9017052682888169).epsilon(1e-12));
  CHECK(student_t_sf(6.5, 100) == doctest::Approx(1.5895070131177258e-09).epsilon(1e-9));
  CHECK(student_t_sf(0.0, 5) == doctest::Approx(0.5));
}

TEST_CASE("binomial tails and log choose") {
  CHECK(binomial_upper_tail(50, 0.1, 10) == doctest::Approx(0.02453793570459145663).epsilon(1e-12));
  CHECK(binomial_lower_tail(50, 0.1, 2) == doctest::Approx(0.1117287563463471478).epsilon(1e-12));
  CHECK(log_choose(1000000, 12345) == doctest::Approx(66513.01554713037173).epsilon(1e-13));
  CHECK(binomial_upper_tail(10, 0.3, 0) == 1.0);
  CHECK(binomial_lower_tail(10, 0.3, 10) == 1.0);
}

TEST_CASE("pmf window sums to one and matches direct pmf") {
  for (auto [n, p] : {std::pair{1000, 0.05}, std::pair{1, 0.3}, std::pair{37, 0.9}, std::pair{200000, 0.001}}) {
    const PmfWindow w = binomial_pmf_window(n, p);
    double total = 0.0;
    for (std::size_t k = 0; k < w.probs.size(); ++k) {
      total += w.probs[k];
      const double direct = std::exp(log_binomial_pmf(n, p, w.first + static_cast<std::int64_t>(k)));
      CHECK(w.probs[k] == doctest::Approx(direct).epsilon(1e-9));
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
  }
  CHECK(binomial_pmf_window(5, 0.0).probs == std::vector<double>{1.0});
  CHECK(binomial_pmf_window(5, 1.0).first == 5);
}

TEST_CASE("Clopper-Pearson against scipy beta quantiles") {
  const Interval a = clopper_pearson(5, 10, 0.05);
  CHECK(a.lo == doctest::Approx(0.18708602844739855).epsilon(1e-10));
  CHECK(a.hi == doctest::Approx(0.8129139715526015).epsilon(1e-10));
  const Interval b = clopper_pearson(3, 20, 0.1);
  CHECK(b.lo == doctest::Approx(0.04216940788577861).epsilon(1e-10));
  CHECK(b.hi == doctest::Approx(0.3436638043142818).epsilon(1e-10));
  CHECK(clopper_pearson(0, 10, 0.1).lo == 0.0);
  CHECK(clopper_pearson(10, 10, 0.1).hi == 1.0);
}

TEST_CASE("Clopper-Pearson contains S/n and narrows with n") {
  for (double ratio : {0.0, 0.1, 0.25, 0.5, 0.8, 1.0}) {
    double prev = 2.0;
    for (std::int64_t n : {20, 40, 80, 160, 320, 640}) {
      const auto s = static_cast<std::int64_t>(std::llround(ratio * static_cast<double>(n)));
      const Interval ci = clopper_pearson(s, n, 0.05);
      CHECK(ci.contains(static_cast<double>(s) / static_cast<double>(n)));
      CHECK(ci.length() < prev);
      prev = ci.length();
    }
  }
}
