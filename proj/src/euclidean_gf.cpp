#include "euclidqm/euclidean_gf.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "euclidqm/errors.hpp"
#include "euclidqm/quadrature.hpp"
#include "euclidqm/special.hpp"

namespace euclidqm::gf {

namespace {

constexpr double kPi = std::numbers::pi;
const std::complex<double> kI{0.0, 1.0};

double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }
Vec3 sub(const Vec3& a, const Vec3& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }

double sinc(double x) {
  if (std::abs(x) < 1e-4) return 1.0 - x * x / 6.0;
  return std::sin(x) / x;
}

// Common factor of fhat* ghat and the tau double integral that does not
// depend on p: A_f A_g (2 pi)^3 s_f^3 s_g^3 * 2 pi st_f st_g.
double prefactor(const EuclideanTestFunction& f, const EuclideanTestFunction& g) {
  const double sf = f.spatial_width;
  const double sg = g.spatial_width;
  return f.amplitude * g.amplitude * std::pow(2.0 * kPi, 3) * sf * sf * sf * sg * sg * sg *
         2.0 * kPi * f.tau_width * g.tau_width;
}

struct TimeData {
  double mu;     // tau_g - tau_f
  double width;  // sqrt(st_f^2 + st_g^2)
};

TimeData time_data(const EuclideanTestFunction& f, const EuclideanTestFunction& g) {
  return {g.tau_center - f.tau_center, std::hypot(f.tau_width, g.tau_width)};
}

void require_positive_time(const WaveFunctional& w, const char* what) {
  for (const auto& f : w.functions) {
    if (!f.positive_time()) {
      std::ostringstream os;
      os << what << ": test function with tau support starting at " << f.support_lo()
         << " is not positive-time";
      throw PreconditionError(os.str());
    }
  }
}

}  // namespace

// ---------------------------------------------------------------------------

bool EuclideanTestFunction::is_real() const {
  return momentum[0] == 0.0 && momentum[1] == 0.0 && momentum[2] == 0.0;
}

EuclideanTestFunction EuclideanTestFunction::reflected() const {
  EuclideanTestFunction r = *this;
  r.tau_center = -tau_center;
  return r;
}

EuclideanTestFunction EuclideanTestFunction::time_shifted(double beta) const {
  EuclideanTestFunction r = *this;
  r.tau_center += beta;
  return r;
}

EuclideanTestFunction EuclideanTestFunction::space_shifted(const Vec3& a) const {
  EuclideanTestFunction r = *this;
  for (int i = 0; i < 3; ++i) r.position[i] += a[i];
  return r;
}

EuclideanTestFunction EuclideanTestFunction::rotated(const Mat3& rot) const {
  EuclideanTestFunction r = *this;
  for (int i = 0; i < 3; ++i) {
    r.position[i] = dot(rot[i], position);
    r.momentum[i] = dot(rot[i], momentum);
  }
  return r;
}

void EuclideanTestFunction::validate() const {
  if (!(tau_width > 0.0) || !(spatial_width > 0.0))
    throw DomainError("test function widths must be > 0");
  if (!std::isfinite(amplitude) || !std::isfinite(tau_center))
    throw DomainError("test function parameters must be finite");
}

bool WaveFunctional::positive_time() const {
  return std::all_of(functions.begin(), functions.end(),
                     [](const auto& f) { return f.positive_time(); });
}

void WaveFunctional::validate() const {
  if (coefficients.size() != functions.size())
    throw DomainError("wave functional: coefficient and test-function counts differ");
  for (const auto& f : functions) f.validate();
}

// ---------------------------------------------------------------------------

CovarianceKernel::CovarianceKernel(double mass, KernelQuadrature quadrature)
    : mass_(mass), quadrature_(quadrature) {
  if (!(mass > 0.0)) throw ConfigError("field mass must be > 0");
  if (quadrature_.radial_nodes < 4 || quadrature_.hermite_nodes < 4)
    throw ConfigError("kernel quadrature needs at least 4 nodes");
}

std::complex<double> CovarianceKernel::cross(const EuclideanTestFunction& f,
                                             const EuclideanTestFunction& g) const {
  f.validate();
  g.validate();
  if (f.amplitude == 0.0 || g.amplitude == 0.0) return 0.0;
  if (f.is_real() && g.is_real()) return radial(f, g);
  return anisotropic(f, g);
}

double CovarianceKernel::radial(const EuclideanTestFunction& f,
                                const EuclideanTestFunction& g) const {
  const double m = mass_;
  const double s = f.spatial_width * f.spatial_width + g.spatial_width * g.spatial_width;
  const double r = norm(sub(f.position, g.position));
  const TimeData td = time_data(f, g);
  const double cut = quadrature_.gaussian_cutoff;

  double pmax = std::sqrt(2.0 * cut / s);
  const double amu = std::abs(td.mu);
  const double s2 = td.width * td.width;
  if (amu * amu > 2.0 * s2 * cut) {
    // Beyond omega* the time-ordered factor 2 e^{omega^2 S^2/2 - omega |mu|} < e^{-cut}.
    const double wstar = (amu - std::sqrt(amu * amu - 2.0 * s2 * cut)) / s2;
    const double pt = wstar > m ? std::sqrt(wstar * wstar - m * m) : m;
    pmax = std::min(pmax, std::max(pt, m));
  }

  auto integrand = [&](double p) {
    const double w = std::sqrt(p * p + m * m);
    return p * p * sinc(p * r) * std::exp(-0.5 * s * p * p) *
           special::expected_abs_exponential(w, td.mu, td.width) / (2.0 * w);
  };

  std::vector<double> breaks{0.0};
  for (double b = m / 8.0; b < pmax; b *= 2.0) breaks.push_back(b);
  breaks.push_back(pmax);
  double max_width = pmax / 8.0;
  if (r > 0.0) max_width = std::min(max_width, kPi / r);
  auto refine = [](const std::vector<double>& in, double width) {
    std::vector<double> out{in.front()};
    for (std::size_t i = 1; i < in.size(); ++i) {
      const double len = in[i] - in[i - 1];
      const auto pieces = static_cast<std::size_t>(std::max(1.0, std::ceil(len / width)));
      for (std::size_t k = 1; k <= pieces; ++k)
        out.push_back(in[i - 1] + len * static_cast<double>(k) / static_cast<double>(pieces));
    }
    return out;
  };
  breaks = refine(breaks, max_width);

  auto integrate = [&](const std::vector<double>& br, double& l1) {
    const quad::Rule rule = quad::composite_gauss_legendre(br, quadrature_.radial_nodes);
    double sum = 0.0;
    l1 = 0.0;
    for (std::size_t i = 0; i < rule.size(); ++i) {
      const double v = rule.weights[i] * integrand(rule.nodes[i]);
      sum += v;
      l1 += std::abs(v);
    }
    return sum;
  };
  double l1 = 0.0;
  double coarse = integrate(breaks, l1);
  double fine = coarse;
  bool converged = false;
  for (int level = 0; level < 6; ++level) {
    std::vector<double> halved{breaks.front()};
    for (std::size_t i = 1; i < breaks.size(); ++i) {
      halved.push_back(0.5 * (breaks[i - 1] + breaks[i]));
      halved.push_back(breaks[i]);
    }
    breaks = std::move(halved);
    fine = integrate(breaks, l1);
    if (std::abs(fine - coarse) <= quadrature_.relative_tolerance * l1) {
      converged = true;
      break;
    }
    coarse = fine;
  }
  if (!converged) {
    std::ostringstream os;
    os << "covariance: radial quadrature did not converge; achieved relative change "
       << std::abs(fine - coarse) / l1;
    throw AccuracyError(os.str());
  }
  return prefactor(f, g) * fine / (2.0 * kPi * kPi);
}

std::complex<double> CovarianceKernel::hermite_sum(const EuclideanTestFunction& f,
                                                   const EuclideanTestFunction& g,
                                                   std::size_t nodes) const {
  const double m = mass_;
  const double sf2 = f.spatial_width * f.spatial_width;
  const double sg2 = g.spatial_width * g.spatial_width;
  const double s = sf2 + sg2;
  Vec3 center{};
  for (int i = 0; i < 3; ++i) center[i] = (sf2 * f.momentum[i] + sg2 * g.momentum[i]) / s;
  const Vec3 dp = sub(f.momentum, g.momentum);
  const double damping = std::exp(-0.5 * sf2 * sg2 / s * dot(dp, dp));
  const Vec3 dx = sub(f.position, g.position);
  const TimeData td = time_data(f, g);
  const double scale = std::sqrt(2.0 / s);
  const quad::Rule gh = quad::gauss_hermite(nodes);

  std::complex<double> sum = 0.0;
  for (std::size_t a = 0; a < nodes; ++a) {
    for (std::size_t b = 0; b < nodes; ++b) {
      const double wab = gh.weights[a] * gh.weights[b];
      for (std::size_t c = 0; c < nodes; ++c) {
        const Vec3 p{center[0] + scale * gh.nodes[a], center[1] + scale * gh.nodes[b],
                     center[2] + scale * gh.nodes[c]};
        const double w = std::sqrt(dot(p, p) + m * m);
        const double t = special::expected_abs_exponential(w, td.mu, td.width) / (2.0 * w);
        sum += wab * gh.weights[c] * t * std::polar(1.0, dot(p, dx));
      }
    }
  }
  const double jac = scale * scale * scale / std::pow(2.0 * kPi, 3);
  return prefactor(f, g) * damping * jac * sum;
}

std::complex<double> CovarianceKernel::anisotropic(const EuclideanTestFunction& f,
                                                   const EuclideanTestFunction& g) const {
  std::size_t n = quadrature_.hermite_nodes;
  std::complex<double> coarse = hermite_sum(f, g, n);
  const double tol = 100.0 * quadrature_.relative_tolerance;
  double change = 0.0;
  for (int level = 0; level < 4; ++level) {
    n += n / 2;
    const std::complex<double> fine = hermite_sum(f, g, n);
    change = std::abs(fine - coarse) / std::max(std::abs(fine), 1e-300);
    if (change <= tol) return fine;
    coarse = fine;
  }
  std::ostringstream os;
  os << "covariance: Gauss-Hermite rule did not converge with " << n
     << " nodes per axis; achieved relative change " << change;
  throw AccuracyError(os.str());
}

double covariance(const CovarianceKernel& kernel, const EuclideanTestFunction& f,
                  const EuclideanTestFunction& g) {
  if (!f.is_real() || !g.is_real())
    throw PreconditionError("covariance: test functions must be real (zero central momentum)");
  return kernel.cross(f, g).real();
}

double covariance(const CovarianceKernel& kernel, const TestFunctionSum& h,
                  const TestFunctionSum& k) {
  double sum = 0.0;
  for (const auto& a : h.terms) {
    for (const auto& b : k.terms) {
      sum += a.coefficient * b.coefficient * covariance(kernel, a.function, b.function);
    }
  }
  return sum;
}

double gf_value(const CovarianceKernel& kernel, const TestFunctionSum& h) {
  // <h, C h> with the symmetric cross terms evaluated once.
  double q = 0.0;
  const auto& t = h.terms;
  for (std::size_t i = 0; i < t.size(); ++i) {
    q += t[i].coefficient * t[i].coefficient * covariance(kernel, t[i].function, t[i].function);
    for (std::size_t j = i + 1; j < t.size(); ++j) {
      q += 2.0 * t[i].coefficient * t[j].coefficient *
           covariance(kernel, t[i].function, t[j].function);
    }
  }
  return std::exp(-0.5 * q);
}

std::complex<double> euclidean_inner(const CovarianceKernel& kernel, const WaveFunctional& b,
                                     const WaveFunctional& c) {
  b.validate();
  c.validate();
  std::complex<double> sum = 0.0;
  for (std::size_t j = 0; j < b.size(); ++j) {
    for (std::size_t k = 0; k < c.size(); ++k) {
      TestFunctionSum h;
      h.add(1.0, c.functions[k]).add(-1.0, b.functions[j]);
      sum += std::conj(b.coefficients[j]) * c.coefficients[k] * gf_value(kernel, h);
    }
  }
  return sum;
}

std::complex<double> physical_inner(const CovarianceKernel& kernel, const WaveFunctional& b,
                                    const WaveFunctional& c) {
  b.validate();
  c.validate();
  require_positive_time(b, "physical_inner");
  require_positive_time(c, "physical_inner");
  std::complex<double> sum = 0.0;
  for (std::size_t j = 0; j < b.size(); ++j) {
    for (std::size_t k = 0; k < c.size(); ++k) {
      TestFunctionSum h;
      h.add(1.0, c.functions[k]).add(-1.0, b.functions[j].reflected());
      sum += std::conj(b.coefficients[j]) * c.coefficients[k] * gf_value(kernel, h);
    }
  }
  return sum;
}

WaveFunctional time_translate(const WaveFunctional& b, double beta) {
  if (!(beta >= 0.0)) throw DomainError("time_translate: beta must be >= 0");
  WaveFunctional out = b;
  for (auto& f : out.functions) f = f.time_shifted(beta);
  return out;
}

WaveFunctional space_translate(const WaveFunctional& b, const Vec3& a) {
  WaveFunctional out = b;
  for (auto& f : out.functions) f = f.space_shifted(a);
  return out;
}

std::complex<double> one_particle_inner(const CovarianceKernel& kernel,
                                        const EuclideanTestFunction& f,
                                        const EuclideanTestFunction& g) {
  if (!f.positive_time() || !g.positive_time())
    throw PreconditionError("one_particle_inner: test functions must be positive-time");
  return kernel.cross(f.reflected(), g);
}

// ---------------------------------------------------------------------------

namespace numdiff {

std::complex<double> central_first(const std::function<std::complex<double>(double)>& f,
                                   double h) {
  return (f(h) - f(-h)) / (2.0 * h);
}

std::complex<double> central_second(const std::function<std::complex<double>(double)>& f,
                                    double h) {
  return (f(h) - 2.0 * f(0.0) + f(-h)) / (h * h);
}

GeneratorElement richardson(const std::function<std::complex<double>(double)>& difference,
                            double h) {
  const std::complex<double> d1 = difference(h);
  const std::complex<double> d2 = difference(0.5 * h);
  const std::complex<double> r = (4.0 * d2 - d1) / 3.0;
  return {r, std::abs(r - d2)};
}

}  // namespace numdiff

GeneratorElement hamiltonian_element(const TranslatedInner& family, DifferenceSteps steps) {
  auto f = [&](double beta) { return family(beta, Vec3{}); };
  GeneratorElement e = numdiff::richardson(
      [&](double h) { return numdiff::central_first(f, h); }, steps.time);
  e.value = -e.value;
  return e;
}

MomentumElement momentum_element(const TranslatedInner& family, DifferenceSteps steps) {
  MomentumElement out;
  for (int axis = 0; axis < 3; ++axis) {
    auto f = [&](double t) {
      Vec3 a{};
      a[axis] = t;
      return family(0.0, a);
    };
    const GeneratorElement d = numdiff::richardson(
        [&](double h) { return numdiff::central_first(f, h); }, steps.space);
    out.value[axis] = -kI * d.value;
    out.error = std::max(out.error, d.error);
  }
  return out;
}

GeneratorElement mass_squared_element(const TranslatedInner& family, DifferenceSteps steps) {
  auto ft = [&](double beta) { return family(beta, Vec3{}); };
  GeneratorElement total = numdiff::richardson(
      [&](double h) { return numdiff::central_second(ft, h); }, steps.time);
  for (int axis = 0; axis < 3; ++axis) {
    auto fa = [&](double t) {
      Vec3 a{};
      a[axis] = t;
      return family(0.0, a);
    };
    const GeneratorElement d = numdiff::richardson(
        [&](double h) { return numdiff::central_second(fa, h); }, steps.space);
    total.value += d.value;
    total.error += d.error;
  }
  return total;
}

TranslatedInner physical_family(const CovarianceKernel& kernel, const WaveFunctional& b,
                                const WaveFunctional& c, DifferenceSteps steps) {
  b.validate();
  c.validate();
  require_positive_time(c, "generator element");
  for (const auto& f : b.functions) {
    if (!(f.support_lo() - steps.time > 0.0))
      throw PreconditionError(
          "generator element: time stencil would push the bra support to tau <= 0");
  }
  return [&kernel, b, c](double beta, const Vec3& a) {
    WaveFunctional moved = b;
    for (auto& f : moved.functions) f = f.time_shifted(beta).space_shifted(a);
    return physical_inner(kernel, moved, c);
  };
}

TranslatedInner one_particle_family(const CovarianceKernel& kernel,
                                    const EuclideanTestFunction& f,
                                    const EuclideanTestFunction& g, DifferenceSteps steps) {
  if (!g.positive_time()) throw PreconditionError("generator element: ket not positive-time");
  if (!(f.support_lo() - steps.time > 0.0))
    throw PreconditionError(
        "generator element: time stencil would push the bra support to tau <= 0");
  return [&kernel, f, g](double beta, const Vec3& a) {
    return one_particle_inner(kernel, f.time_shifted(beta).space_shifted(a), g);
  };
}

GeneratorElement hamiltonian_element(const CovarianceKernel& kernel, const WaveFunctional& b,
                                     const WaveFunctional& c, DifferenceSteps steps) {
  return hamiltonian_element(physical_family(kernel, b, c, steps), steps);
}

MomentumElement momentum_element(const CovarianceKernel& kernel, const WaveFunctional& b,
                                 const WaveFunctional& c, DifferenceSteps steps) {
  return momentum_element(physical_family(kernel, b, c, steps), steps);
}

GeneratorElement mass_squared_element(const CovarianceKernel& kernel, const WaveFunctional& b,
                                      const WaveFunctional& c, DifferenceSteps steps) {
  return mass_squared_element(physical_family(kernel, b, c, steps), steps);
}

// ---------------------------------------------------------------------------

double GramMatrix::hermiticity_defect() const {
  return (entries - entries.adjoint()).cwiseAbs().maxCoeff();
}

Eigen::VectorXd GramMatrix::eigenvalues() const {
  const Eigen::MatrixXcd herm = 0.5 * (entries + entries.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(herm, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw InternalError("gram eigen-solve failed");
  return solver.eigenvalues();
}

GramMatrix gram_matrix(const CovarianceKernel& kernel,
                       const std::vector<EuclideanTestFunction>& functions, ProductKind kind) {
  const auto n = static_cast<Eigen::Index>(functions.size());
  if (kind == ProductKind::physical) {
    for (const auto& f : functions) {
      if (!f.positive_time())
        throw PreconditionError("gram_matrix: physical product needs positive-time functions");
    }
  }
  // Z[f_j - X f_i] = exp(-(|f_i|^2 + |f_j|^2)/2 + <X f_i, C f_j>), X = Theta or 1;
  // |Theta f|^2 = |f|^2.
  std::vector<double> self(functions.size());
  for (std::size_t i = 0; i < functions.size(); ++i)
    self[i] = covariance(kernel, functions[i], functions[i]);
  GramMatrix g;
  g.kind = kind;
  g.functions = functions;
  g.entries.resize(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& fi = functions[static_cast<std::size_t>(i)];
    const EuclideanTestFunction bra = kind == ProductKind::physical ? fi.reflected() : fi;
    for (Eigen::Index j = i; j < n; ++j) {
      const auto jj = static_cast<std::size_t>(j);
      const double c = covariance(kernel, bra, functions[jj]);
      const double v =
          std::exp(-0.5 * (self[static_cast<std::size_t>(i)] + self[jj]) + c);
      g.entries(i, j) = v;
      g.entries(j, i) = v;
    }
  }
  return g;
}

std::vector<ClusterRow> cluster_check(const CovarianceKernel& kernel,
                                      const EuclideanTestFunction& f,
                                      const EuclideanTestFunction& g,
                                      const std::vector<double>& distances,
                                      const Vec3& direction) {
  for (std::size_t i = 1; i < distances.size(); ++i)
    if (distances[i] < distances[i - 1]) throw ConfigError("cluster_check: distances must ascend");
  const double dn = norm(direction);
  if (!(dn > 0.0)) throw ConfigError("cluster_check: direction must be nonzero");
  const double zf = gf_value(kernel, TestFunctionSum{}.add(1.0, f));
  const double zg = gf_value(kernel, TestFunctionSum{}.add(1.0, g));
  std::vector<ClusterRow> rows;
  for (double d : distances) {
    const Vec3 a{direction[0] * d / dn, direction[1] * d / dn, direction[2] * d / dn};
    TestFunctionSum h;
    h.add(1.0, f).add(1.0, g.space_shifted(a));
    rows.push_back({d, std::abs(gf_value(kernel, h) - zf * zg)});
  }
  return rows;
}

ClusterFit fit_cluster_rate(const std::vector<ClusterRow>& rows) {
  std::vector<double> xs;
  std::vector<double> ys;
  for (const auto& r : rows) {
    if (r.distance > 0.0 && r.deviation > 0.0) {
      xs.push_back(r.distance);
      ys.push_back(std::log(r.deviation) + 1.5 * std::log(r.distance));
    }
  }
  if (xs.size() < 2) throw PreconditionError("fit_cluster_rate: need two positive rows");
  const double n = static_cast<double>(xs.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  return {-slope, (sy - slope * sx) / n};
}

double uniform(std::mt19937_64& rng, double lo, double hi) {
  const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  return lo + (hi - lo) * u;
}

EuclideanTestFunction random_test_function(std::mt19937_64& rng,
                                           const CovarianceKernel& kernel,
                                           bool positive_time) {
  const double inv_m = 1.0 / kernel.mass();
  EuclideanTestFunction f;
  f.tau_width = uniform(rng, 0.1, 0.6) * inv_m;
  if (positive_time) {
    f.tau_center = 7.0 * f.tau_width + uniform(rng, 0.0, 2.0) * inv_m;
  } else {
    f.tau_center = uniform(rng, -2.0, 2.0) * inv_m;
  }
  f.spatial_width = uniform(rng, 0.3, 1.0) * inv_m;
  for (auto& x : f.position) x = uniform(rng, -1.5, 1.5) * inv_m;
  f.amplitude = 1.0;
  const double target = uniform(rng, 0.2, 2.0);
  f.amplitude = std::sqrt(target / covariance(kernel, f, f));
  return f;
}

}  // namespace euclidqm::gf
