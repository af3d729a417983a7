#include "euclidqm/chebyshev.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "euclidqm/errors.hpp"

namespace euclidqm {

namespace {

double to_unit(const Interval& d, double x) {
  return (2.0 * x - d.lo - d.hi) / (d.hi - d.lo);
}

}  // namespace

ChebyshevExpansion::ChebyshevExpansion(double frequency,
                                       std::vector<std::complex<double>> coefficients,
                                       Interval domain)
    : frequency_(frequency), coefficients_(std::move(coefficients)), domain_(domain) {
  if (coefficients_.empty()) throw DomainError("ChebyshevExpansion: no coefficients");
  if (!(domain_.hi > domain_.lo)) throw DomainError("ChebyshevExpansion: empty domain");
}

ChebyshevExpansion expansion_coefficients(double frequency, std::size_t degree,
                                          Interval domain) {
  if (!(domain.hi > domain.lo)) throw DomainError("expansion_coefficients: need lo < hi");
  const std::size_t nodes = degree + 1;
  const double np1 = static_cast<double>(nodes);
  const double half = 0.5 * (domain.hi - domain.lo);
  const double mid = 0.5 * (domain.hi + domain.lo);

  std::vector<double> theta(nodes);
  std::vector<std::complex<double>> fvals(nodes);
  for (std::size_t k = 0; k < nodes; ++k) {
    theta[k] = std::numbers::pi * (static_cast<double>(k) + 0.5) / np1;
    const double x = mid + half * std::cos(theta[k]);
    fvals[k] = std::polar(1.0, frequency * x);
  }
  std::vector<std::complex<double>> c(nodes);
  for (std::size_t j = 0; j < nodes; ++j) {
    std::complex<double> sum = 0.0;
    const double jj = static_cast<double>(j);
    for (std::size_t k = 0; k < nodes; ++k) sum += fvals[k] * std::cos(jj * theta[k]);
    c[j] = (2.0 / np1) * sum;
  }
  return ChebyshevExpansion(frequency, std::move(c), domain);
}

std::complex<double> evaluate_scalar(const ChebyshevExpansion& expansion, double x) {
  const Interval& d = expansion.domain();
  const double slack = 1e-13 * (d.hi - d.lo);
  if (!(x >= d.lo - slack && x <= d.hi + slack)) {
    std::ostringstream os;
    os << "evaluate_scalar: x = " << x << " outside [" << d.lo << ", " << d.hi << "]";
    throw DomainError(os.str());
  }
  const double s = std::clamp(to_unit(d, x), -1.0, 1.0);
  const auto& c = expansion.coefficients();
  std::complex<double> b1 = 0.0;
  std::complex<double> b2 = 0.0;
  for (std::size_t j = c.size() - 1; j >= 1; --j) {
    const std::complex<double> b0 = c[j] + 2.0 * s * b1 - b2;
    b2 = b1;
    b1 = b0;
  }
  return 0.5 * c[0] + s * b1 - b2;
}

Eigen::VectorXcd apply_to_semigroup(const ChebyshevExpansion& expansion,
                                    const SpectralOperator& op, double beta,
                                    const Eigen::VectorXcd& v) {
  const Interval& d = expansion.domain();
  const auto [smin, smax] = op.semigroup_bounds(beta);
  const double slack = 1e-13 * (d.hi - d.lo);
  if (smin < d.lo - slack || smax > d.hi + slack) {
    std::ostringstream os;
    os.precision(17);
    os << "apply_to_semigroup: spectrum of e^{-beta H} is [" << smin << ", " << smax
       << "], outside expansion domain [" << d.lo << ", " << d.hi << "]";
    throw PreconditionError(os.str());
  }
  const double scale = 2.0 / (d.hi - d.lo);
  const double shift = (d.hi + d.lo) / (d.hi - d.lo);
  // s(X) w = scale * e^{-beta H} w - shift * w
  auto mapped = [&](const Eigen::VectorXcd& w) -> Eigen::VectorXcd {
    return scale * op.semigroup_apply(beta, w) - shift * w;
  };
  const auto& c = expansion.coefficients();
  Eigen::VectorXcd b1 = Eigen::VectorXcd::Zero(v.size());
  Eigen::VectorXcd b2 = Eigen::VectorXcd::Zero(v.size());
  for (std::size_t j = c.size() - 1; j >= 1; --j) {
    Eigen::VectorXcd b0 = c[j] * v + 2.0 * mapped(b1) - b2;
    b2 = std::move(b1);
    b1 = std::move(b0);
  }
  return 0.5 * c[0] * v + mapped(b1) - b2;
}

std::size_t required_degree(double frequency, Interval domain, double tolerance) {
  if (!(tolerance > 0.0)) throw DomainError("required_degree: tolerance must be > 0");
  // On [-1,1], e^{i w s} = sum (2 - delta_j0) i^j J_j(w) T_j(s), w = n (hi-lo)/2.
  const double w = std::abs(frequency) * 0.5 * (domain.hi - domain.lo);
  if (w == 0.0) return 0;
  // Interpolation aliases the truncated tail back once, hence the factor 2.
  auto tail = [&](std::size_t from) {
    double sum = 0.0;
    for (std::size_t j = from; j < from + 60; ++j)
      sum += 2.0 * std::abs(std::cyl_bessel_j(static_cast<double>(j), w));
    return 2.0 * sum;
  };
  auto degree = static_cast<std::size_t>(std::floor(w));
  while (tail(degree + 1) > tolerance) ++degree;
  return degree;
}

ErrorReport uniform_error_report(const ChebyshevExpansion& expansion, std::size_t samples,
                                 std::size_t dense_points) {
  if (samples < 2) throw DomainError("uniform_error_report: need at least 2 samples");
  const Interval& d = expansion.domain();
  const double n = expansion.frequency();
  auto row_at = [&](double x) {
    const std::complex<double> p = evaluate_scalar(expansion, x);
    return ErrorRow{x, std::abs(p.real() - std::cos(n * x)),
                    std::abs(p.imag() - std::sin(n * x))};
  };
  ErrorReport rep;
  for (std::size_t i = 0; i < samples; ++i) {
    double x = d.lo + (d.hi - d.lo) * static_cast<double>(i) / static_cast<double>(samples - 1);
    if (i + 1 == samples) x = d.hi;
    rep.rows.push_back(row_at(x));
  }
  rep.dense_points = std::max<std::size_t>(dense_points, 2);
  for (std::size_t i = 0; i < rep.dense_points; ++i) {
    const double x = d.lo + (d.hi - d.lo) * static_cast<double>(i) /
                                static_cast<double>(rep.dense_points - 1);
    const ErrorRow r = row_at(x);
    rep.dense_max_cos = std::max(rep.dense_max_cos, r.delta_cos);
    rep.dense_max_sin = std::max(rep.dense_max_sin, r.delta_sin);
  }
  return rep;
}

}  // namespace euclidqm
