#include "euclidqm/special.hpp"

#include <cmath>
#include <numbers>

namespace euclidqm::special {

double erfcx(double x) {
  if (x < 0.0) {
    // e^{x^2} erfc(x) = 2 e^{x^2} - erfcx(-x)
    return 2.0 * std::exp(x * x) - erfcx(-x);
  }
  if (x < 5.0) return std::exp(x * x) * std::erfc(x);
  // Continued fraction erfcx(x) = (1/sqrt(pi)) / (x + (1/2)/(x + 1/(x + (3/2)/(x + ...)))),
  // evaluated bottom up; 60 levels converge to rounding for x >= 5.
  double f = x;
  for (int k = 60; k >= 1; --k) f = x + 0.5 * k / f;
  return 1.0 / (std::sqrt(std::numbers::pi) * f);
}

double expected_abs_exponential(double omega, double mu, double s) {
  const double r2 = std::numbers::sqrt2;
  const double c = 0.5 * mu * mu / (s * s);
  auto branch = [&](double m) {
    // e^{omega^2 s^2/2 - omega m} erfc((omega s^2 - m)/(s sqrt 2))
    const double z = (omega * s * s - m) / (s * r2);
    if (z >= 0.0) return std::exp(-c) * erfcx(z);
    return 2.0 * std::exp(0.5 * omega * omega * s * s - omega * m) - std::exp(-c) * erfcx(-z);
  };
  return 0.5 * (branch(mu) + branch(-mu));
}

}  // namespace euclidqm::special
