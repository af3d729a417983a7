#include "euclidqm/quadrature.hpp"

#include <cmath>
#include <numbers>

#include "euclidqm/errors.hpp"

namespace euclidqm::quad {

Rule gauss_legendre(std::size_t n) {
  if (n == 0) throw DomainError("gauss_legendre: n must be positive");
  Rule r;
  r.nodes.resize(n);
  r.weights.resize(n);
  const std::size_t half = (n + 1) / 2;
  for (std::size_t i = 0; i < half; ++i) {
    // Tricomi initial guess for the i-th largest root.
    double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) /
                        (static_cast<double>(n) + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0;
      double p1 = x;
      for (std::size_t k = 2; k <= n; ++k) {
        const double kk = static_cast<double>(k);
        const double p2 = ((2.0 * kk - 1.0) * x * p1 - (kk - 1.0) * p0) / kk;
        p0 = p1;
        p1 = p2;
      }
      dp = static_cast<double>(n) * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // Recompute the derivative at the converged root.
    {
      double p0 = 1.0;
      double p1 = x;
      for (std::size_t k = 2; k <= n; ++k) {
        const double kk = static_cast<double>(k);
        const double p2 = ((2.0 * kk - 1.0) * x * p1 - (kk - 1.0) * p0) / kk;
        p0 = p1;
        p1 = p2;
      }
      dp = static_cast<double>(n) * (x * p1 - p0) / (x * x - 1.0);
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    r.nodes[i] = -x;
    r.nodes[n - 1 - i] = x;
    r.weights[i] = w;
    r.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) r.nodes[n / 2] = 0.0;
  return r;
}

Rule gauss_legendre(std::size_t n, double a, double b) {
  Rule r = gauss_legendre(n);
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (b + a);
  for (std::size_t i = 0; i < n; ++i) {
    r.nodes[i] = mid + half * r.nodes[i];
    r.weights[i] *= half;
  }
  return r;
}

Rule gauss_hermite(std::size_t n) {
  if (n == 0) throw DomainError("gauss_hermite: n must be positive");
  Rule r;
  r.nodes.resize(n);
  r.weights.resize(n);
  // Newton iteration on orthonormal Hermite functions (Numerical Recipes
  // gauher) for stability at large n.
  const double pim4 = std::pow(std::numbers::pi, -0.25);
  const std::size_t m = (n + 1) / 2;
  const double nn = static_cast<double>(n);
  double z = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    if (i == 0) {
      z = std::sqrt(2.0 * nn + 1.0) - 1.85575 * std::pow(2.0 * nn + 1.0, -0.16667);
    } else if (i == 1) {
      z -= 1.14 * std::pow(nn, 0.426) / z;
    } else if (i == 2) {
      z = 1.86 * z - 0.86 * r.nodes[0];
    } else if (i == 3) {
      z = 1.91 * z - 0.91 * r.nodes[1];
    } else {
      z = 2.0 * z - r.nodes[i - 2];
    }
    double pp = 0.0;
    for (int it = 0; it < 200; ++it) {
      double p1 = pim4;
      double p2 = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        const double jj = static_cast<double>(j);
        const double p3 = p2;
        p2 = p1;
        p1 = z * std::sqrt(2.0 / (jj + 1.0)) * p2 - std::sqrt(jj / (jj + 1.0)) * p3;
      }
      pp = std::sqrt(2.0 * nn) * p2;
      const double dz = p1 / pp;
      z -= dz;
      if (std::abs(dz) <= 1e-15 * std::max(1.0, std::abs(z))) break;
    }
    r.nodes[i] = z;
    r.weights[i] = 2.0 / (pp * pp);
  }
  // r.nodes[0..m) currently hold the positive roots in descending order.
  Rule out;
  out.nodes.resize(n);
  out.weights.resize(n);
  for (std::size_t i = 0; i < m; ++i) {
    out.nodes[i] = -r.nodes[i];
    out.weights[i] = r.weights[i];
    out.nodes[n - 1 - i] = r.nodes[i];
    out.weights[n - 1 - i] = r.weights[i];
  }
  if (n % 2 == 1) out.nodes[n / 2] = 0.0;
  return out;
}

Rule composite_gauss_legendre(const std::vector<double>& breaks, std::size_t n) {
  Rule out;
  if (breaks.size() < 2) return out;
  const Rule base = gauss_legendre(n);
  for (std::size_t p = 0; p + 1 < breaks.size(); ++p) {
    const double a = breaks[p];
    const double b = breaks[p + 1];
    if (!(b > a)) continue;
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (b + a);
    for (std::size_t i = 0; i < n; ++i) {
      out.nodes.push_back(mid + half * base.nodes[i]);
      out.weights.push_back(half * base.weights[i]);
    }
  }
  return out;
}

double integrate_half_line(const std::function<double(double)>& f, double a,
                           double scale, std::size_t panels, std::size_t n) {
  const Rule base = gauss_legendre(n);
  double sum = 0.0;
  // Panels are packed towards t = 1 geometrically so the algebraic tail is
  // resolved.
  std::vector<double> tb{0.0};
  double t = 0.5;
  for (std::size_t p = 1; p < panels; ++p) {
    tb.push_back(t);
    t = 0.5 * (1.0 + t);
  }
  tb.push_back(1.0);
  for (std::size_t p = 0; p + 1 < tb.size(); ++p) {
    const double half = 0.5 * (tb[p + 1] - tb[p]);
    const double mid = 0.5 * (tb[p + 1] + tb[p]);
    for (std::size_t i = 0; i < n; ++i) {
      const double tt = mid + half * base.nodes[i];
      const double one_minus = 1.0 - tt;
      const double k = a + scale * tt / one_minus;
      const double jac = scale / (one_minus * one_minus);
      sum += half * base.weights[i] * jac * f(k);
    }
  }
  return sum;
}

}  // namespace euclidqm::quad
