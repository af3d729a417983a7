#include "euclidqm/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "euclidqm/errors.hpp"
#include "euclidqm/quadrature.hpp"

namespace euclidqm {

void GridSpec::validate() const {
  if (!(kmax > 0.0)) throw ConfigError("grid kmax must be > 0");
  if (!(split > 0.0 && split < kmax)) throw ConfigError("grid split must lie in (0, kmax)");
  if (low_points + high_points < 16 || low_points == 0 || high_points == 0)
    throw ConfigError("grid needs at least 16 nodes and a nonempty panel on each side of split");
  if (focus) {
    if (!(focus->hi > focus->lo) || focus->lo < 0.0)
      throw ConfigError("grid focus window must satisfy 0 <= lo < hi");
    if (focus->hi > kmax) throw ConfigError("grid focus window exceeds kmax");
    if (focus->points == 0) throw ConfigError("grid focus window needs points");
  }
}

RadialGrid build_grid(const GridSpec& spec) {
  spec.validate();
  struct Segment {
    double a, b;
    std::size_t n;
  };
  std::vector<Segment> segments;

  auto add_panel = [&](double a, double b, std::size_t n) {
    if (!spec.focus || spec.focus->hi <= a || spec.focus->lo >= b) {
      segments.push_back({a, b, n});
      return;
    }
    const double flo = std::max(a, spec.focus->lo);
    const double fhi = std::min(b, spec.focus->hi);
    const double rest = (b - a) - (fhi - flo);
    auto share = [&](double len) {
      if (rest <= 0.0) return spec.min_segment_points;
      const auto s = static_cast<std::size_t>(std::lround(static_cast<double>(n) * len / rest));
      return std::max(spec.min_segment_points, s);
    };
    if (flo > a) segments.push_back({a, flo, share(flo - a)});
    // The focus window may straddle the split; each part gets its length share.
    const double flen = spec.focus->hi - spec.focus->lo;
    const auto fn = std::max<std::size_t>(
        8, static_cast<std::size_t>(std::lround(static_cast<double>(spec.focus->points) *
                                                (fhi - flo) / flen)));
    segments.push_back({flo, fhi, fn});
    if (fhi < b) segments.push_back({fhi, b, share(b - fhi)});
  };
  add_panel(0.0, spec.split, spec.low_points);
  add_panel(spec.split, spec.kmax, spec.high_points);

  RadialGrid g;
  g.kmax = spec.kmax;
  std::ostringstream desc;
  desc << "gauss-legendre panels (dk weights):";
  g.breaks.push_back(0.0);
  for (const auto& s : segments) {
    const quad::Rule r = quad::gauss_legendre(s.n, s.a, s.b);
    g.nodes.insert(g.nodes.end(), r.nodes.begin(), r.nodes.end());
    g.weights.insert(g.weights.end(), r.weights.begin(), r.weights.end());
    g.breaks.push_back(s.b);
    desc << " [" << s.a << "," << s.b << "]x" << s.n;
  }
  g.descriptor = desc.str();
  return g;
}

Eigen::MatrixXd discretize_h0(const SeparableModel& model, const RadialGrid& grid) {
  const auto n = static_cast<Eigen::Index>(grid.size());
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double k = grid.nodes[static_cast<std::size_t>(i)];
    h(i, i) = k * k / model.mass;
  }
  return h;
}

Eigen::MatrixXd discretize_h(const SeparableModel& model, const RadialGrid& grid) {
  model.validate();
  const auto n = static_cast<Eigen::Index>(grid.size());
  Eigen::VectorXd u(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto ii = static_cast<std::size_t>(i);
    const double k = grid.nodes[ii];
    u[i] = std::sqrt(grid.weights[ii]) * k * form_factor(model, k);
  }
  Eigen::MatrixXd h = discretize_h0(model, grid);
  h.noalias() -= model.coupling * u * u.transpose();
  return h;
}

SpectralOperator::SpectralOperator(Eigen::VectorXd eigenvalues,
                                   Eigen::MatrixXd eigenvectors, OperatorKind kind)
    : eigenvalues_(std::move(eigenvalues)),
      eigenvectors_(std::move(eigenvectors)),
      kind_(kind) {}

Eigen::VectorXd SpectralOperator::semigroup_apply(double beta, const Eigen::VectorXd& v) const {
  if (!(beta >= 0.0)) throw DomainError("semigroup_apply: beta must be >= 0");
  Eigen::VectorXd c = eigenvectors_.transpose() * v;
  c.array() *= (-beta * eigenvalues_.array()).exp();
  return eigenvectors_ * c;
}

Eigen::VectorXcd SpectralOperator::semigroup_apply(double beta,
                                                   const Eigen::VectorXcd& v) const {
  if (!(beta >= 0.0)) throw DomainError("semigroup_apply: beta must be >= 0");
  const Eigen::VectorXd re = semigroup_apply(beta, Eigen::VectorXd(v.real()));
  const Eigen::VectorXd im = semigroup_apply(beta, Eigen::VectorXd(v.imag()));
  Eigen::VectorXcd out(v.size());
  out.real() = re;
  out.imag() = im;
  return out;
}

std::pair<double, double> SpectralOperator::semigroup_bounds(double beta) const {
  if (!(beta > 0.0)) throw DomainError("semigroup_bounds: beta must be > 0");
  const double e_min = eigenvalues_[0];
  const double e_max = eigenvalues_[eigenvalues_.size() - 1];
  return {std::exp(-beta * e_max), std::exp(-beta * e_min)};
}

Eigen::VectorXcd SpectralOperator::to_eigenbasis(const Eigen::VectorXcd& v) const {
  Eigen::VectorXcd c(v.size());
  c.real() = eigenvectors_.transpose() * v.real();
  c.imag() = eigenvectors_.transpose() * v.imag();
  return c;
}

Eigen::VectorXcd SpectralOperator::from_eigenbasis(const Eigen::VectorXcd& c) const {
  Eigen::VectorXcd v(c.size());
  v.real() = eigenvectors_ * c.real();
  v.imag() = eigenvectors_ * c.imag();
  return v;
}

SpectralOperator diagonalize(const Eigen::MatrixXd& h, OperatorKind kind) {
  if (h.rows() != h.cols()) throw DomainError("diagonalize: matrix must be square");
  const double asym = (h - h.transpose()).norm();
  if (asym > 1e-12 * std::max(1.0, h.norm()))
    throw DomainError("diagonalize: matrix is not symmetric");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h);
  if (solver.info() != Eigen::Success) {
    std::ostringstream os;
    os << "diagonalize: eigen-solver failed (dim " << h.rows() << ", |H| = " << h.norm() << ")";
    throw InternalError(os.str());
  }
  // Eigen returns eigenvalues in ascending order.
  return SpectralOperator(solver.eigenvalues(), solver.eigenvectors(), kind);
}

}  // namespace euclidqm
