#pragma once

namespace euclidqm::special {

/// Scaled complementary error function e^{x^2} erfc(x), finite for all
/// x below ~26.6 and asymptotic ~ 1/(x sqrt(pi)) for large x.
double erfcx(double x);

/// E[e^{-omega |u|}] for u ~ N(mu, s^2), evaluated without overflow for any
/// omega >= 0 and mu.
double expected_abs_exponential(double omega, double mu, double s);

}  // namespace euclidqm::special
