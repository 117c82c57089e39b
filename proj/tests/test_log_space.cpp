#include <doctest.h>

#include <cmath>
#include <vector>

#include "fdrot/log_space.hpp"

using namespace fdrot;

TEST_CASE("log_add and log_sub match linear arithmetic") {
  CHECK(log_add(std::log(2.0), std::log(3.0)) ==
        doctest::Approx(std::log(5.0)).epsilon(1e-15));
  CHECK(log_sub(std::log(5.0), std::log(3.0)) ==
        doctest::Approx(std::log(2.0)).epsilon(1e-15));
  CHECK(log_add(kNegInf, 1.5) == 1.5);
  CHECK(log_add(1.5, kNegInf) == 1.5);
  CHECK(log_sub(1.5, kNegInf) == 1.5);
  CHECK(log_sub(2.0, 2.0) == kNegInf);
  CHECK_THROWS_AS(log_sub(1.0, 2.0), std::domain_error);
}

TEST_CASE("log_add is safe far outside double range") {
  const double big = 5000.0;
  CHECK(log_add(big, big) == doctest::Approx(big + std::log(2.0)));
  CHECK(log_add(big, big - 800.0) == doctest::Approx(big));
  CHECK(log_sub(big, big - 800.0) == doctest::Approx(big));
}

TEST_CASE("log_hypot matches hypot") {
  CHECK(log_hypot(std::log(3.0), std::log(4.0)) ==
        doctest::Approx(std::log(5.0)).epsilon(1e-15));
  CHECK(log_hypot(kNegInf, std::log(4.0)) ==
        doctest::Approx(std::log(4.0)));
  // far beyond linear range: hypot(e^1000, e^999)
  const double expect = 1000.0 + 0.5 * std::log1p(std::exp(-2.0));
  CHECK(log_hypot(1000.0, 999.0) == doctest::Approx(expect).epsilon(1e-15));
}

TEST_CASE("log_sum_exp over a span") {
  std::vector<double> xs = {std::log(1.0), std::log(2.0), std::log(3.0)};
  CHECK(log_sum_exp(xs) == doctest::Approx(std::log(6.0)).epsilon(1e-15));
  std::vector<double> empty;
  CHECK(log_sum_exp(empty) == kNegInf);
}

TEST_CASE("LogSigned round trips and signed addition") {
  const LogSigned a = LogSigned::from_value(2.5);
  const LogSigned b = LogSigned::from_value(-4.0);
  CHECK(a.value() == doctest::Approx(2.5).epsilon(1e-15));
  CHECK(b.value() == doctest::Approx(-4.0).epsilon(1e-15));
  CHECK((a + b).value() == doctest::Approx(-1.5).epsilon(1e-14));
  CHECK((a - b).value() == doctest::Approx(6.5).epsilon(1e-14));
  CHECK((b + b.negate()).is_zero());
  CHECK(LogSigned::zero().is_zero());
  CHECK((a + LogSigned::zero()).value() == doctest::Approx(2.5));
  CHECK(a.scaled(-2.0).value() == doctest::Approx(-5.0).epsilon(1e-14));
}

TEST_CASE("LogSigned representability gate") {
  const LogSigned huge = LogSigned::from_log(800.0, 1);
  CHECK(!huge.representable());
  CHECK(LogSigned::from_value(1e300).representable());
  // arithmetic still works out of linear range
  const LogSigned sum = huge + huge;
  CHECK(sum.log_abs == doctest::Approx(800.0 + std::log(2.0)));
  CHECK(sum.sign == 1);
}

TEST_CASE("LogSumAccumulator totals in log space") {
  LogSumAccumulator acc;
  CHECK(acc.log_total() == kNegInf);
  acc.add_log(std::log(1.5));
  acc.add_log(std::log(2.5));
  acc.add_log(kNegInf);
  CHECK(acc.log_total() == doctest::Approx(std::log(4.0)).epsilon(1e-15));
}
