#pragma once

#include <Eigen/Dense>
#include <array>
#include <complex>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

namespace euclidqm::gf {

using Vec3 = std::array<double, 3>;
using Mat3 = std::array<Vec3, 3>;

/// f(tau, x) = A exp(-(tau - tau0)^2 / (2 s_tau^2)) exp(-|x - x0|^2 / (2 s_x^2))
///             * exp(i p0 . (x - x0)),
/// with support in tau cut at tau0 +- 6 s_tau. Real iff p0 = 0. Units:
/// tau, x in MeV^-1, p0 in MeV.
struct EuclideanTestFunction {
  static constexpr double kTruncationWidths = 6.0;

  double amplitude = 1.0;
  double tau_center = 0.0;
  double tau_width = 0.0;
  double spatial_width = 0.0;
  Vec3 position{};
  Vec3 momentum{};

  [[nodiscard]] double support_lo() const { return tau_center - kTruncationWidths * tau_width; }
  [[nodiscard]] double support_hi() const { return tau_center + kTruncationWidths * tau_width; }
  [[nodiscard]] bool positive_time() const { return support_lo() > 0.0; }
  [[nodiscard]] bool is_real() const;
  [[nodiscard]] bool isotropic() const { return is_real(); }

  /// Theta: tau -> -tau.
  [[nodiscard]] EuclideanTestFunction reflected() const;
  [[nodiscard]] EuclideanTestFunction time_shifted(double beta) const;
  [[nodiscard]] EuclideanTestFunction space_shifted(const Vec3& a) const;
  [[nodiscard]] EuclideanTestFunction rotated(const Mat3& r) const;

  void validate() const;
};

/// Finite real combination h = sum_i c_i f_i.
struct TestFunctionSum {
  struct Term {
    double coefficient = 1.0;
    EuclideanTestFunction function;
  };
  std::vector<Term> terms;

  TestFunctionSum& add(double c, const EuclideanTestFunction& f) {
    terms.push_back({c, f});
    return *this;
  }
};

/// B[phi] = sum_j b_j e^{i phi(f_j)}.
struct WaveFunctional {
  std::vector<std::complex<double>> coefficients;
  std::vector<EuclideanTestFunction> functions;

  WaveFunctional& add(std::complex<double> b, const EuclideanTestFunction& f) {
    coefficients.push_back(b);
    functions.push_back(f);
    return *this;
  }
  [[nodiscard]] std::size_t size() const { return functions.size(); }
  [[nodiscard]] bool positive_time() const;
  void validate() const;
};

struct KernelQuadrature {
  std::size_t radial_nodes = 24;    ///< Gauss-Legendre nodes per radial panel
  std::size_t hermite_nodes = 20;   ///< per Cartesian axis on the anisotropic route
  double gaussian_cutoff = 40.0;    ///< integrand ignored below e^{-cutoff}
  double relative_tolerance = 1e-12;
};

/// Two-point Schwinger function of the free scalar field of mass m in the
/// mixed representation, e^{-omega(p)|tau - tau'|} / (2 omega(p)), acting on
/// Gaussian test functions:
///
///   <f, C g> = int d^3p/(2 pi)^3 fhat*(p) ghat(p) / (2 omega)
///              int int dtau dtau' T_f(tau) T_g(tau') e^{-omega |tau - tau'|}.
///
/// The time integrals are closed form (untruncated Gaussians; the cut at
/// six widths changes them by < 1e-8 relative). The momentum integral is
/// radial with j0(p r) when both functions are real, otherwise a Cartesian
/// Gauss-Hermite rule centered on the product Gaussian.
class CovarianceKernel {
 public:
  explicit CovarianceKernel(double mass, KernelQuadrature quadrature = {});

  [[nodiscard]] double mass() const { return mass_; }
  [[nodiscard]] const KernelQuadrature& quadrature() const { return quadrature_; }

  /// Sesquilinear <f, C g>; conjugate-symmetric.
  [[nodiscard]] std::complex<double> cross(const EuclideanTestFunction& f,
                                           const EuclideanTestFunction& g) const;

 private:
  [[nodiscard]] double radial(const EuclideanTestFunction& f,
                              const EuclideanTestFunction& g) const;
  [[nodiscard]] std::complex<double> anisotropic(const EuclideanTestFunction& f,
                                                 const EuclideanTestFunction& g) const;
  [[nodiscard]] std::complex<double> hermite_sum(const EuclideanTestFunction& f,
                                                 const EuclideanTestFunction& g,
                                                 std::size_t nodes) const;

  double mass_;
  KernelQuadrature quadrature_;
};

/// <f, C g> for real test functions.
double covariance(const CovarianceKernel& kernel, const EuclideanTestFunction& f,
                  const EuclideanTestFunction& g);
double covariance(const CovarianceKernel& kernel, const TestFunctionSum& h,
                  const TestFunctionSum& k);

/// Gaussian generating functional Z[h] = exp(-<h, C h>/2).
double gf_value(const CovarianceKernel& kernel, const TestFunctionSum& h);

/// (B, C) = sum_jk b_j* c_k Z[g_k - f_j].
std::complex<double> euclidean_inner(const CovarianceKernel& kernel, const WaveFunctional& b,
                                     const WaveFunctional& c);

/// <B|C> = sum_jk b_j* c_k Z[g_k - Theta f_j]; all test functions must have
/// positive-time support.
std::complex<double> physical_inner(const CovarianceKernel& kernel, const WaveFunctional& b,
                                    const WaveFunctional& c);

/// e^{-beta H}|B>: every tau-center moved up by beta >= 0.
WaveFunctional time_translate(const WaveFunctional& b, double beta);
WaveFunctional space_translate(const WaveFunctional& b, const Vec3& a);

/// Linear-in-phi sector <f|g>_1 = <Theta f, C g>, complex profiles allowed.
std::complex<double> one_particle_inner(const CovarianceKernel& kernel,
                                        const EuclideanTestFunction& f,
                                        const EuclideanTestFunction& g);

// ---------------------------------------------------------------------------
// Generators by numerical differentiation

struct DifferenceSteps {
  double time = 1e-4;   ///< MeV^-1
  double space = 1e-4;  ///< MeV^-1
};

struct GeneratorElement {
  std::complex<double> value;
  double error = 0.0;  ///< |Richardson - finer central difference|
};

struct MomentumElement {
  std::array<std::complex<double>, 3> value{};
  double error = 0.0;
};

/// F(beta, a) = <B_{beta,a}|C>: inner product with the bra translated in
/// Euclidean time by beta and in space by a.
using TranslatedInner = std::function<std::complex<double>(double beta, const Vec3& a)>;

namespace numdiff {
/// (F(h) - F(-h)) / 2h
std::complex<double> central_first(const std::function<std::complex<double>(double)>& f,
                                   double h);
/// (F(h) - 2F(0) + F(-h)) / h^2
std::complex<double> central_second(const std::function<std::complex<double>(double)>& f,
                                    double h);
/// Richardson extrapolation of a central difference over steps h, h/2.
GeneratorElement richardson(const std::function<std::complex<double>(double)>& difference,
                            double h);
}  // namespace numdiff

/// <B|H|C> = -d/dbeta F(beta, 0) at 0.
GeneratorElement hamiltonian_element(const TranslatedInner& family, DifferenceSteps steps = {});
/// <B|P|C> = -i grad_a F(0, a) at 0.
MomentumElement momentum_element(const TranslatedInner& family, DifferenceSteps steps = {});
/// <B|M^2|C> = (d^2/dbeta^2 + laplacian_a) F at 0.
GeneratorElement mass_squared_element(const TranslatedInner& family,
                                      DifferenceSteps steps = {});

/// Families for full wave functionals (physical product) and for the
/// one-particle sector. Both check that the stencil keeps the bra in
/// positive time.
TranslatedInner physical_family(const CovarianceKernel& kernel, const WaveFunctional& b,
                                const WaveFunctional& c, DifferenceSteps steps = {});
TranslatedInner one_particle_family(const CovarianceKernel& kernel,
                                    const EuclideanTestFunction& f,
                                    const EuclideanTestFunction& g, DifferenceSteps steps = {});

GeneratorElement hamiltonian_element(const CovarianceKernel& kernel, const WaveFunctional& b,
                                     const WaveFunctional& c, DifferenceSteps steps = {});
MomentumElement momentum_element(const CovarianceKernel& kernel, const WaveFunctional& b,
                                 const WaveFunctional& c, DifferenceSteps steps = {});
GeneratorElement mass_squared_element(const CovarianceKernel& kernel, const WaveFunctional& b,
                                      const WaveFunctional& c, DifferenceSteps steps = {});

// ---------------------------------------------------------------------------
// Axiom checks

enum class ProductKind { euclidean, physical };

struct GramMatrix {
  Eigen::MatrixXcd entries;
  ProductKind kind = ProductKind::physical;
  std::vector<EuclideanTestFunction> functions;

  [[nodiscard]] double hermiticity_defect() const;
  /// Ascending eigenvalues of the Hermitian part.
  [[nodiscard]] Eigen::VectorXd eigenvalues() const;
};

/// M_ij = Z[f_j - Theta f_i] (physical) or E_ij = Z[f_j - f_i] (euclidean),
/// i.e. the Gram matrix of the functionals e^{i phi(f_i)}.
GramMatrix gram_matrix(const CovarianceKernel& kernel,
                       const std::vector<EuclideanTestFunction>& functions, ProductKind kind);

struct ClusterRow {
  double distance = 0.0;
  double deviation = 0.0;  ///< |Z[f + g_a] - Z[f] Z[g]|
};

std::vector<ClusterRow> cluster_check(const CovarianceKernel& kernel,
                                      const EuclideanTestFunction& f,
                                      const EuclideanTestFunction& g,
                                      const std::vector<double>& distances,
                                      const Vec3& direction = {1.0, 0.0, 0.0});

struct ClusterFit {
  double rate = 0.0;       ///< MeV
  double intercept = 0.0;
};

/// Least-squares fit of log(deviation * a^{3/2}) = c - rate * a. The a^{-3/2}
/// prefactor is the large-distance form of the four-dimensional massive
/// propagator, m K_1(m a) / (4 pi^2 a).
ClusterFit fit_cluster_rate(const std::vector<ClusterRow>& rows);

/// Deterministic uniform draw in [lo, hi) from a 64-bit engine (independent
/// of the standard library's distribution implementation).
double uniform(std::mt19937_64& rng, double lo, double hi);

/// Real test function with widths and offsets on the scale 1/m and
/// amplitude set so that <f, C f> is drawn from [0.2, 2]. With
/// `positive_time` the tau-center satisfies tau0 >= 7 s_tau; otherwise it is
/// drawn from a symmetric window around tau = 0.
EuclideanTestFunction random_test_function(std::mt19937_64& rng,
                                           const CovarianceKernel& kernel,
                                           bool positive_time = true);

}  // namespace euclidqm::gf
