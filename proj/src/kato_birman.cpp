#include "euclidqm/kato_birman.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "euclidqm/errors.hpp"
#include "euclidqm/parallel.hpp"

namespace euclidqm {

namespace {

constexpr double kPi = std::numbers::pi;
const std::complex<double> kI{0.0, 1.0};

void require_same_grid(const RadialGrid& grid, const WavePacket& a, const WavePacket& b) {
  const auto n = static_cast<Eigen::Index>(grid.size());
  if (a.state.size() != n || b.state.size() != n)
    throw PreconditionError("wave packets do not live on the given grid");
}

// e^{-i n e^{-beta E0}} elementwise
Eigen::VectorXcd free_phases(const Eigen::VectorXd& e0, int n, double beta) {
  Eigen::VectorXcd ph(e0.size());
  for (Eigen::Index i = 0; i < e0.size(); ++i)
    ph[i] = std::polar(1.0, -static_cast<double>(n) * std::exp(-beta * e0[i]));
  return ph;
}

}  // namespace

WavePacket make_packet(double k0, double sigma, const RadialGrid& grid) {
  if (!(k0 > 0.0)) throw ConfigError("make_packet: k0 must be > 0");
  if (!(sigma > 0.0 && sigma < k0)) throw ConfigError("make_packet: need 0 < sigma < k0");
  const double needed = k0 + 8.0 * sigma;
  if (needed > grid.kmax) {
    std::ostringstream os;
    os << "make_packet: grid kmax " << grid.kmax << " MeV does not cover k0 + 8 sigma; need kmax >= "
       << needed << " MeV";
    throw ConfigError(os.str());
  }
  WavePacket p;
  p.center = k0;
  p.width = sigma;
  const auto n = static_cast<Eigen::Index>(grid.size());
  p.amplitude.resize(n);
  p.state.resize(n);
  double norm2 = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto ii = static_cast<std::size_t>(i);
    const double k = grid.nodes[ii];
    const double d = (k - k0) / sigma;
    const double a = std::exp(-0.25 * d * d);
    p.amplitude[i] = a;
    norm2 += grid.weights[ii] * k * k * a * a;
  }
  if (!(norm2 > 0.0)) throw PreconditionError("make_packet: packet has zero norm on grid");
  p.amplitude /= std::sqrt(norm2);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto ii = static_cast<std::size_t>(i);
    p.state[i] = std::sqrt(grid.weights[ii]) * grid.nodes[ii] * p.amplitude[i];
  }
  return p;
}

double PacketSpec::sigma(double k0) const {
  const double w = width_fraction * k0;
  if (convention == WidthConvention::sigma) return w;
  return w / (2.0 * std::sqrt(2.0 * std::log(2.0)));
}

void PacketSpec::validate() const {
  if (!(width_fraction > 0.0 && width_fraction < 0.5))
    throw ConfigError("packet width fraction must lie in (0, 0.5)");
}

void KBConfig::validate() const {
  if (n < 1) throw ConfigError("kb.n must be >= 1");
  if (!adaptive_beta && !(beta > 0.0)) throw ConfigError("kb.beta must be > 0");
  if (adaptive_beta && !(beta_scale > 0.0)) throw ConfigError("kb.beta_scale must be > 0");
  if (!(chebyshev_tolerance > 0.0)) throw ConfigError("kb.chebyshev_tolerance must be > 0");
  if (focus_points < 16) throw ConfigError("grid.focus_points must be >= 16");
  if (!(focus_sigmas >= 8.0)) throw ConfigError("grid.focus_sigmas must be >= 8");
  grid.validate();
}

double KBConfig::beta_for(double k0, double mass) const {
  if (!adaptive_beta) return beta;
  return beta_scale * mass / (k0 * k0);
}

ScatteringProblem::ScatteringProblem(SeparableModel model, RadialGrid grid)
    : model_(model),
      grid_(std::move(grid)),
      h_(diagonalize(discretize_h(model_, grid_), OperatorKind::interacting)),
      free_energies_(discretize_h0(model_, grid_).diagonal()) {}

RadialGrid packet_grid(const KBConfig& cfg, double k0, double sigma) {
  GridSpec spec = cfg.grid;
  const double half = cfg.focus_sigmas * sigma;
  spec.focus = FocusWindow{std::max(0.0, k0 - half), std::min(spec.kmax, k0 + half),
                           cfg.focus_points};
  return build_grid(spec);
}

Interval semigroup_domain(const SpectralOperator& h, double beta) {
  const auto bounds = h.semigroup_bounds(beta);
  return Interval{0.0, std::max(1.0, bounds.second)};
}

std::size_t chebyshev_degree_for(const KBConfig& cfg, int n, Interval domain) {
  const std::size_t threshold =
      required_degree(2.0 * static_cast<double>(n), domain, cfg.chebyshev_tolerance);
  if (cfg.chebyshev_degree == 0) return std::max<std::size_t>(threshold, 1);
  if (cfg.chebyshev_degree < threshold) {
    std::ostringstream os;
    os << "chebyshev degree " << cfg.chebyshev_degree << " is below the threshold " << threshold
       << " for n = " << n;
    throw ConfigError(os.str());
  }
  return cfg.chebyshev_degree;
}

std::complex<double> kb_s_overlap(const ScatteringProblem& problem, const KBConfig& cfg,
                                  const WavePacket& out, const WavePacket& in) {
  require_same_grid(problem.grid(), out, in);
  const double beta = cfg.beta;
  if (!(beta > 0.0)) throw ConfigError("kb_s_overlap: beta must be > 0");
  const Interval domain = semigroup_domain(problem.hamiltonian(), beta);
  const std::size_t degree = chebyshev_degree_for(cfg, cfg.n, domain);
  const ChebyshevExpansion p =
      expansion_coefficients(2.0 * static_cast<double>(cfg.n), degree, domain);
  const Eigen::VectorXcd ph = free_phases(problem.free_energies(), cfg.n, beta);
  const Eigen::VectorXcd x = ph.cwiseProduct(in.state);
  const Eigen::VectorXcd y = apply_to_semigroup(p, problem.hamiltonian(), beta, x);
  return out.state.dot(ph.cwiseProduct(y));
}

std::complex<double> kb_s_overlap_spectral(const ScatteringProblem& problem,
                                           const KBConfig& cfg, const WavePacket& out,
                                           const WavePacket& in) {
  require_same_grid(problem.grid(), out, in);
  const double beta = cfg.beta;
  const double two_n = 2.0 * static_cast<double>(cfg.n);
  const Eigen::VectorXcd ph = free_phases(problem.free_energies(), cfg.n, beta);
  const Eigen::VectorXcd y = problem.hamiltonian().apply_function(
      [&](double e) { return std::polar(1.0, two_n * std::exp(-beta * e)); },
      Eigen::VectorXcd(ph.cwiseProduct(in.state)));
  return out.state.dot(ph.cwiseProduct(y));
}

std::complex<double> wave_operator_s(const ScatteringProblem& problem, double time,
                                     const WavePacket& out, const WavePacket& in) {
  require_same_grid(problem.grid(), out, in);
  const Eigen::VectorXd& e0 = problem.free_energies();
  Eigen::VectorXcd ph(e0.size());
  for (Eigen::Index i = 0; i < e0.size(); ++i) ph[i] = std::polar(1.0, e0[i] * time);
  const Eigen::VectorXcd y = problem.hamiltonian().apply_function(
      [&](double e) { return std::polar(1.0, -2.0 * e * time); },
      Eigen::VectorXcd(ph.cwiseProduct(in.state)));
  return out.state.dot(ph.cwiseProduct(y));
}

std::complex<double> exact_s_in_packets(const SeparableModel& model, const RadialGrid& grid,
                                        const WavePacket& out, const WavePacket& in) {
  require_same_grid(grid, out, in);
  std::complex<double> sum = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto ii = static_cast<Eigen::Index>(i);
    const double k = grid.nodes[i];
    sum += grid.weights[i] * k * k * std::conj(out.amplitude[ii]) * exact_s_on_shell(model, k) *
           in.amplitude[ii];
  }
  return sum;
}

double delta_e_overlap(const SeparableModel& model, const RadialGrid& grid,
                       const WavePacket& out, const WavePacket& in) {
  require_same_grid(grid, out, in);
  std::complex<double> sum = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto ii = static_cast<Eigen::Index>(i);
    const double k = grid.nodes[i];
    sum += grid.weights[i] * k * k * on_shell_density(model, k) * std::conj(out.amplitude[ii]) *
           in.amplitude[ii];
  }
  return sum.real();
}

std::vector<SweepRow> sweep_n(const SeparableModel& model, const KBConfig& cfg,
                              const std::vector<int>& n_values, double k0, double sigma,
                              unsigned threads) {
  cfg.validate();
  if (n_values.empty()) throw ConfigError("sweep_n: no n values");
  for (std::size_t i = 1; i < n_values.size(); ++i)
    if (n_values[i] <= n_values[i - 1]) throw ConfigError("sweep_n: n values must ascend");
  const ScatteringProblem problem(model, packet_grid(cfg, k0, sigma));
  const WavePacket packet = make_packet(k0, sigma, problem.grid());
  const std::complex<double> exact = exact_s_in_packets(model, problem.grid(), packet, packet);
  KBConfig base = cfg;
  base.beta = cfg.beta_for(k0, model.mass);
  const Interval domain = semigroup_domain(problem.hamiltonian(), base.beta);

  std::vector<SweepRow> rows(n_values.size());
  parallel_for(n_values.size(), threads, [&](std::size_t i) {
    KBConfig c = base;
    c.n = n_values[i];
    const std::size_t threshold =
        required_degree(2.0 * c.n, domain, c.chebyshev_tolerance);
    c.chebyshev_degree = std::max(cfg.chebyshev_degree, threshold);
    SweepRow& r = rows[i];
    r.n = c.n;
    r.degree = c.chebyshev_degree;
    r.approx = kb_s_overlap(problem, c, packet, packet);
    r.exact = exact;
    r.rel_err = std::abs(r.approx - exact) / std::abs(exact);
  });
  return rows;
}

SMatrixEstimate extract_sharp_t(const SeparableModel& model, const KBConfig& cfg,
                                const PacketSpec& packets, double k) {
  cfg.validate();
  packets.validate();
  if (!(k > 0.0)) throw ConfigError("extract_sharp_t: k must be > 0");
  SMatrixEstimate est;
  est.momentum = k;
  est.sigma = packets.sigma(k);
  est.n = cfg.n;
  KBConfig c = cfg;
  c.beta = cfg.beta_for(k, model.mass);
  est.beta = c.beta;

  const ScatteringProblem problem(model, packet_grid(cfg, k, est.sigma));
  const WavePacket packet = make_packet(k, est.sigma, problem.grid());
  est.degree = chebyshev_degree_for(c, c.n, semigroup_domain(problem.hamiltonian(), c.beta));
  c.chebyshev_degree = est.degree;

  est.s_approx = kb_s_overlap(problem, c, packet, packet);
  est.s_exact = exact_s_in_packets(model, problem.grid(), packet, packet);
  const std::complex<double> identity = packet.state.squaredNorm();
  const double delta = delta_e_overlap(model, problem.grid(), packet, packet);
  if (!(std::abs(delta) > 1e-14)) throw PreconditionError("extract_sharp_t: degenerate packet");
  est.t_approx = (est.s_approx - identity) / (-2.0 * kPi * kI * delta);
  est.t_exact = exact_t_on_shell(model, k);
  const double scale = std::abs(est.t_exact);
  if (scale > 0.0) {
    est.rel_err = std::abs(est.t_approx - est.t_exact) / scale;
    est.rel_err_re = std::abs(est.t_approx.real() - est.t_exact.real()) / scale;
    est.rel_err_im = std::abs(est.t_approx.imag() - est.t_exact.imag()) / scale;
  } else {
    est.rel_err = std::abs(est.t_approx);
    est.rel_err_re = std::abs(est.t_approx.real());
    est.rel_err_im = std::abs(est.t_approx.imag());
  }
  return est;
}

std::vector<SMatrixEstimate> t_scan(const SeparableModel& model, const KBConfig& cfg,
                                    const PacketSpec& packets,
                                    const std::vector<double>& momenta, unsigned threads) {
  std::vector<SMatrixEstimate> out(momenta.size());
  parallel_for(momenta.size(), threads,
               [&](std::size_t i) { out[i] = extract_sharp_t(model, cfg, packets, momenta[i]); });
  return out;
}

}  // namespace euclidqm
