#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "euclidqm/model.hpp"

namespace euclidqm {

/// Dense sub-panel placed around a wave-packet momentum.
struct FocusWindow {
  double lo = 0.0;
  double hi = 0.0;
  std::size_t points = 200;
};

struct GridSpec {
  std::size_t low_points = 48;   ///< Gauss-Legendre nodes on [0, split]
  std::size_t high_points = 96;  ///< nodes on [split, kmax]
  double split = 2.0 * 139.0;
  double kmax = 6000.0;
  std::optional<FocusWindow> focus;
  /// Minimum nodes in any sub-segment cut out by the focus window.
  std::size_t min_segment_points = 24;

  void validate() const;
};

/// Radial momentum quadrature on [0, kmax]. Weights are plain dk weights;
/// consumers apply the k^2 measure.
struct RadialGrid {
  std::vector<double> nodes;
  std::vector<double> weights;
  std::vector<double> breaks;
  std::string descriptor;
  double kmax = 0.0;

  [[nodiscard]] std::size_t size() const { return nodes.size(); }
};

RadialGrid build_grid(const GridSpec& spec);

/// H_ij = delta_ij k_i^2/m - lambda u_i u_j,  u_i = sqrt(w_i) k_i g(k_i).
Eigen::MatrixXd discretize_h(const SeparableModel& model, const RadialGrid& grid);
Eigen::MatrixXd discretize_h0(const SeparableModel& model, const RadialGrid& grid);

enum class OperatorKind { interacting, free };

/// Eigendecomposition of a discretized Hamiltonian. Immutable; the only
/// dynamical primitive it hands out is the Euclidean semigroup e^{-beta H}.
class SpectralOperator {
 public:
  SpectralOperator(Eigen::VectorXd eigenvalues, Eigen::MatrixXd eigenvectors,
                   OperatorKind kind);

  [[nodiscard]] const Eigen::VectorXd& eigenvalues() const { return eigenvalues_; }
  [[nodiscard]] const Eigen::MatrixXd& eigenvectors() const { return eigenvectors_; }
  [[nodiscard]] OperatorKind kind() const { return kind_; }
  [[nodiscard]] Eigen::Index dimension() const { return eigenvalues_.size(); }

  /// U diag(e^{-beta E}) U^T v, beta >= 0.
  [[nodiscard]] Eigen::VectorXd semigroup_apply(double beta, const Eigen::VectorXd& v) const;
  [[nodiscard]] Eigen::VectorXcd semigroup_apply(double beta, const Eigen::VectorXcd& v) const;

  /// (e^{-beta E_max}, e^{-beta E_min}); the upper end exceeds 1 when H binds.
  [[nodiscard]] std::pair<double, double> semigroup_bounds(double beta) const;

  /// U diag(f(E)) U^T v. Reference path for tests and oracles only.
  template <typename F>
  [[nodiscard]] Eigen::VectorXcd apply_function(F&& f, const Eigen::VectorXcd& v) const {
    Eigen::VectorXcd coeffs = to_eigenbasis(v);
    for (Eigen::Index i = 0; i < coeffs.size(); ++i) coeffs[i] *= f(eigenvalues_[i]);
    return from_eigenbasis(coeffs);
  }

 private:
  [[nodiscard]] Eigen::VectorXcd to_eigenbasis(const Eigen::VectorXcd& v) const;
  [[nodiscard]] Eigen::VectorXcd from_eigenbasis(const Eigen::VectorXcd& c) const;

  Eigen::VectorXd eigenvalues_;
  Eigen::MatrixXd eigenvectors_;
  OperatorKind kind_;
};

SpectralOperator diagonalize(const Eigen::MatrixXd& h,
                             OperatorKind kind = OperatorKind::interacting);

}  // namespace euclidqm
