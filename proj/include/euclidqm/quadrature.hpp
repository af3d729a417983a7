#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace euclidqm::quad {

struct Rule {
  std::vector<double> nodes;
  std::vector<double> weights;

  [[nodiscard]] std::size_t size() const { return nodes.size(); }
};

/// Gauss-Legendre rule with n nodes on [-1, 1], nodes ascending.
/// Exact for polynomials of degree <= 2n - 1.
Rule gauss_legendre(std::size_t n);

/// Gauss-Legendre rule affinely mapped onto [a, b].
Rule gauss_legendre(std::size_t n, double a, double b);

/// Gauss-Hermite rule for weight exp(-x^2), nodes ascending.
Rule gauss_hermite(std::size_t n);

/// Concatenation of n-point Gauss-Legendre rules on the panels delimited by
/// consecutive entries of `breaks` (which must be ascending).
Rule composite_gauss_legendre(const std::vector<double>& breaks, std::size_t n);

/// Integral of f over the half line [a, inf) using the map
/// k = a + scale * t / (1 - t), t in [0, 1), split into `panels` GL panels.
double integrate_half_line(const std::function<double(double)>& f, double a,
                           double scale, std::size_t panels, std::size_t n);

}  // namespace euclidqm::quad
