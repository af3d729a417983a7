#include <doctest.h>

#include <cmath>
#include <random>

#include "euclidqm/errors.hpp"
#include "euclidqm/model.hpp"
#include "euclidqm/spectral.hpp"

using namespace euclidqm;

namespace {

// exp(-beta A) by scaling and squaring of a Taylor series; independent of
// the eigensolver.
Eigen::MatrixXd expm_neg(const Eigen::MatrixXd& a, double beta) {
  const double norm = (beta * a).cwiseAbs().rowwise().sum().maxCoeff();
  int squarings = 0;
  while (norm / std::pow(2.0, squarings) > 0.25) ++squarings;
  const Eigen::MatrixXd x = -beta * a / std::pow(2.0, squarings);
  Eigen::MatrixXd term = Eigen::MatrixXd::Identity(a.rows(), a.cols());
  Eigen::MatrixXd sum = term;
  for (int j = 1; j < 20; ++j) {
    term = term * x / j;
    sum += term;
  }
  for (int s = 0; s < squarings; ++s) sum = sum * sum;
  return sum;
}

// Grid bound state from the rank-one secular equation
// 1 = lambda sum_i u_i^2 / (k_i^2/m - E), bisection.
double secular_root(const SeparableModel& m, const RadialGrid& g) {
  auto f = [&](double e) {
    double s = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
      const double k = g.nodes[i];
      const double u = k * form_factor(m, k);
      s += g.weights[i] * u * u / (k * k / m.mass - e);
    }
    return 1.0 - m.coupling * s;
  };
  double lo = -100.0, hi = -1e-6;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) > 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

GridSpec small_spec() {
  GridSpec s;
  s.low_points = 16;
  s.high_points = 24;
  s.kmax = 3000.0;
  return s;
}

}  // namespace

TEST_CASE("grid structure") {
  GridSpec spec;
  const RadialGrid g = build_grid(spec);
  CHECK(g.size() == spec.low_points + spec.high_points);
  double len = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    len += g.weights[i];
    if (i) CHECK(g.nodes[i] > g.nodes[i - 1]);
  }
  CHECK(len == doctest::Approx(spec.kmax).epsilon(1e-13));

  spec.focus = FocusWindow{800.0, 1200.0, 200};
  const RadialGrid f = build_grid(spec);
  std::size_t inside = 0;
  for (double k : f.nodes) inside += (k > 800.0 && k < 1200.0) ? 1 : 0;
  CHECK(inside == 200);
  CHECK(f.breaks.back() == spec.kmax);
}

TEST_CASE("grid validation") {
  GridSpec s;
  s.split = 7000.0;
  CHECK_THROWS_AS(build_grid(s), ConfigError);
  s = GridSpec{};
  s.focus = FocusWindow{100.0, 7000.0, 50};
  CHECK_THROWS_AS(build_grid(s), ConfigError);
}

TEST_CASE("free Hamiltonian is diagonal k^2/m") {
  SeparableModel m = default_model();
  m.coupling = 0.0;
  const RadialGrid g = build_grid(small_spec());
  const auto h = diagonalize(discretize_h(m, g), OperatorKind::free);
  for (Eigen::Index i = 0; i < h.dimension(); ++i) {
    const double k = g.nodes[static_cast<std::size_t>(i)];
    CHECK(h.eigenvalues()[i] == doctest::Approx(k * k / m.mass).epsilon(1e-13));
    CHECK(std::abs(std::abs(h.eigenvectors()(i, i)) - 1.0) < 1e-13);
  }
}

TEST_CASE("grid bound state: eigen-solve matches the secular equation") {
  const SeparableModel m = default_model();
  const RadialGrid g = build_grid(GridSpec{});
  const auto h = diagonalize(discretize_h(m, g));
  CHECK(h.eigenvalues()[0] == doctest::Approx(secular_root(m, g)).epsilon(1e-10));
  CHECK(std::abs(h.eigenvalues()[0] + kDefaultBindingMev) < 1e-4);
  CHECK(h.eigenvalues()[1] > 0.0);
}

TEST_CASE("grid bound state converges under refinement") {
  const SeparableModel m = default_model();
  double previous = 1e300;
  for (double kmax : {3000.0, 6000.0, 12000.0}) {
    GridSpec s;
    s.kmax = kmax;
    const double e = diagonalize(discretize_h(m, build_grid(s))).eigenvalues()[0];
    const double err = std::abs(e + kDefaultBindingMev);
    CHECK(err < previous);
    previous = err;
  }
  CHECK(previous < 2e-5);
}

TEST_CASE("semigroup against an independent matrix exponential") {
  const SeparableModel m = default_model();
  const RadialGrid g = build_grid(small_spec());
  const Eigen::MatrixXd hm = discretize_h(m, g);
  const auto h = diagonalize(hm);
  std::mt19937_64 rng(3);
  std::normal_distribution<double> n01;
  Eigen::VectorXd v(h.dimension());
  for (auto& x : v) x = n01(rng);
  for (double beta : {1e-4, 5e-4, 3e-3}) {
    const Eigen::VectorXd ref = expm_neg(hm, beta) * v;
    CHECK((h.semigroup_apply(beta, v) - ref).norm() <= 1e-11 * ref.norm());
  }
}

TEST_CASE("semigroup laws") {
  const SeparableModel m = default_model();
  const RadialGrid g = build_grid(GridSpec{});
  const auto h = diagonalize(discretize_h(m, g));
  const auto h0 = diagonalize(discretize_h0(m, g), OperatorKind::free);
  std::mt19937_64 rng(11);
  std::normal_distribution<double> n01;
  Eigen::VectorXd u(h.dimension()), v(h.dimension());
  for (auto& x : u) x = n01(rng);
  for (auto& x : v) x = n01(rng);

  CHECK((h.semigroup_apply(0.0, v) - v).norm() < 1e-12 * v.norm());
  const double b1 = 2e-4, b2 = 3e-4;
  const Eigen::VectorXd two = h.semigroup_apply(b1, h.semigroup_apply(b2, v));
  CHECK((two - h.semigroup_apply(b1 + b2, v)).norm() < 1e-12 * v.norm());
  const double lhs = u.dot(h.semigroup_apply(b1, v));
  const double rhs = h.semigroup_apply(b1, u).dot(v);
  CHECK(std::abs(lhs - rhs) < 1e-12 * u.norm() * v.norm());

  for (double beta : {1e-4, 1e-3, 1e-2}) {
    CHECK(h0.semigroup_apply(beta, v).norm() <= v.norm());
    // with a bound state the norm may grow, but never beyond e^{beta E_b}
    CHECK(h.semigroup_apply(beta, v).norm() <=
          std::exp(-beta * h.eigenvalues()[0]) * v.norm() * (1.0 + 1e-14));
    const auto [lo, hi] = h.semigroup_bounds(beta);
    CHECK(hi > 1.0);
    CHECK(lo > 0.0);
    CHECK(h0.semigroup_bounds(beta).second <= 1.0);
  }
}

TEST_CASE("semigroup argument checks") {
  const auto h = diagonalize(discretize_h(default_model(), build_grid(small_spec())));
  const Eigen::VectorXd v = Eigen::VectorXd::Ones(h.dimension());
  CHECK_THROWS_AS((void)h.semigroup_apply(-1e-6, v), DomainError);
  CHECK_THROWS_AS((void)h.semigroup_bounds(0.0), DomainError);
  Eigen::MatrixXd bad = Eigen::MatrixXd::Identity(3, 3);
  bad(0, 1) = 1.0;
  CHECK_THROWS_AS(diagonalize(bad), DomainError);
}
