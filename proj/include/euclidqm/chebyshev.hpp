#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "euclidqm/spectral.hpp"

namespace euclidqm {

struct Interval {
  double lo = 0.0;
  double hi = 1.0;
};

/// Degree-N Chebyshev interpolant of x -> e^{i n x} on [lo, hi], evaluated as
///
///   p(x) = c_0/2 T_0(s) + sum_{j=1}^N c_j T_j(s),   s = (2x - lo - hi)/(hi - lo).
///
/// Coefficients come from the N+1 Chebyshev-Gauss nodes.
class ChebyshevExpansion {
 public:
  ChebyshevExpansion(double frequency, std::vector<std::complex<double>> coefficients,
                     Interval domain);

  [[nodiscard]] std::size_t degree() const { return coefficients_.size() - 1; }
  [[nodiscard]] double frequency() const { return frequency_; }
  [[nodiscard]] const Interval& domain() const { return domain_; }
  [[nodiscard]] const std::vector<std::complex<double>>& coefficients() const {
    return coefficients_;
  }

 private:
  double frequency_;
  std::vector<std::complex<double>> coefficients_;
  Interval domain_;
};

ChebyshevExpansion expansion_coefficients(double frequency, std::size_t degree,
                                          Interval domain = {});

/// Clenshaw evaluation; throws DomainError off [lo, hi].
std::complex<double> evaluate_scalar(const ChebyshevExpansion& expansion, double x);

/// p(e^{-beta H}) v by Clenshaw recurrence. The operator is touched only
/// through SpectralOperator::semigroup_apply, one application per degree.
/// Throws PreconditionError if the semigroup spectrum leaves the domain.
Eigen::VectorXcd apply_to_semigroup(const ChebyshevExpansion& expansion,
                                    const SpectralOperator& op, double beta,
                                    const Eigen::VectorXcd& v);

/// Smallest degree whose truncation tail for e^{i n x} on `domain` is below
/// `tolerance`, from the Bessel-function form of the coefficients.
std::size_t required_degree(double frequency, Interval domain, double tolerance);

struct ErrorRow {
  double x = 0.0;
  double delta_cos = 0.0;
  double delta_sin = 0.0;
};

struct ErrorReport {
  std::vector<ErrorRow> rows;  ///< equispaced samples including both ends
  double dense_max_cos = 0.0;
  double dense_max_sin = 0.0;
  std::size_t dense_points = 0;

  [[nodiscard]] double dense_max() const { return std::max(dense_max_cos, dense_max_sin); }
};

ErrorReport uniform_error_report(const ChebyshevExpansion& expansion, std::size_t samples,
                                 std::size_t dense_points = 10000);

}  // namespace euclidqm
