#include "euclidqm/model.hpp"

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "euclidqm/errors.hpp"
#include "euclidqm/quadrature.hpp"

namespace euclidqm {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr std::size_t kPanelNodes = 64;

double finite_or_throw(double v, const char* what) {
  if (!std::isfinite(v)) throw DomainError(std::string(what) + " must be finite");
  return v;
}

// k^2 g(k)^2
double radial_weight(const SeparableModel& model, double k) {
  const double g = form_factor(model, k);
  return k * k * g * g;
}

// Breakpoints on [lo, hi] that resolve the form-factor scale.
std::vector<double> scale_breaks(double lo, double hi, double scale) {
  std::vector<double> b{lo};
  for (double s = scale / 8.0; s < hi; s *= 2.0) {
    if (s > lo) b.push_back(s);
  }
  b.push_back(hi);
  return b;
}

double integrate_panels(const std::vector<double>& breaks,
                        const std::function<double(double)>& f) {
  const quad::Rule rule = quad::composite_gauss_legendre(breaks, kPanelNodes);
  double sum = 0.0;
  for (std::size_t i = 0; i < rule.size(); ++i) sum += rule.weights[i] * f(rule.nodes[i]);
  return sum;
}

}  // namespace

void SeparableModel::validate() const {
  if (!(mass > 0.0) || !std::isfinite(mass)) throw ConfigError("model mass must be > 0");
  if (!(form_scale > 0.0) || !std::isfinite(form_scale))
    throw ConfigError("model form-factor scale must be > 0");
  if (!std::isfinite(coupling)) throw ConfigError("model coupling must be finite");
}

double coupling_for_binding(double mass, double form_scale, double binding) {
  if (!(binding >= 0.0)) throw ConfigError("binding energy must be >= 0");
  // 1 + lambda G(-kappa^2/m) = 0 with G = -m pi / (4 b (b + kappa)^2).
  const double kappa = std::sqrt(mass * binding);
  const double b = form_scale;
  return 4.0 * b * (b + kappa) * (b + kappa) / (mass * kPi);
}

double critical_coupling(double mass, double form_scale) {
  return coupling_for_binding(mass, form_scale, 0.0);
}

SeparableModel default_model() {
  SeparableModel m;
  m.coupling = coupling_for_binding(m.mass, m.form_scale, kDefaultBindingMev);
  return m;
}

double form_factor(const SeparableModel& model, double k) {
  return 1.0 / (model.form_scale * model.form_scale + k * k);
}

std::complex<double> resolvent_element(const SeparableModel& model, double energy,
                                       Side side) {
  finite_or_throw(energy, "resolvent energy");
  const double b = model.form_scale;
  const double m = model.mass;
  // kappa solves E = -kappa^2/m, continued to Re kappa >= 0 off the cut;
  // on the cut E + i0 -> kappa = -i k, E - i0 -> kappa = +i k.
  std::complex<double> kappa;
  if (energy <= 0.0) {
    kappa = std::sqrt(-m * energy);
  } else {
    const double k = std::sqrt(m * energy);
    kappa = side == Side::above ? std::complex<double>(0.0, -k)
                                : std::complex<double>(0.0, k);
  }
  const std::complex<double> d = b + kappa;
  return -m * kPi / (4.0 * b * d * d);
}

std::complex<double> resolvent_element_quadrature(const SeparableModel& model,
                                                  double energy, Side side) {
  finite_or_throw(energy, "resolvent energy");
  const double m = model.mass;
  const double b = model.form_scale;
  if (energy <= 0.0) {
    const double kappa2 = -m * energy;
    auto f = [&](double k) { return -m * radial_weight(model, k) / (kappa2 + k * k); };
    const double cut = 4.0 * b;
    double v = integrate_panels(scale_breaks(0.0, cut, b), f);
    v += quad::integrate_half_line(f, cut, b, 16, kPanelNodes);
    return {v, 0.0};
  }
  const double k0 = std::sqrt(m * energy);
  const double f0 = radial_weight(model, k0);
  // PV int dk/(k0^2 - k^2) over [0, inf) vanishes, so subtracting f0 leaves a
  // regular integrand. Panels end at k0; Gauss nodes never hit it.
  auto f = [&](double k) { return m * (radial_weight(model, k) - f0) / (k0 * k0 - k * k); };
  double v = integrate_panels(scale_breaks(0.0, k0, b), f);
  std::vector<double> mid = scale_breaks(k0, 2.0 * k0, b);
  v += integrate_panels(mid, f);
  const double tail_start = std::max(2.0 * k0, 4.0 * b);
  if (tail_start > 2.0 * k0) v += integrate_panels(scale_breaks(2.0 * k0, tail_start, b), f);
  v += quad::integrate_half_line(f, tail_start, std::max(k0, b), 16, kPanelNodes);
  const double im = kPi * on_shell_density(model, k0) * form_factor(model, k0) *
                    form_factor(model, k0);
  return {v, side == Side::above ? -im : im};
}

double on_shell_density(const SeparableModel& model, double k) {
  return 0.5 * model.mass * k;
}

std::complex<double> exact_t_on_shell(const SeparableModel& model, double k) {
  if (!(k > 0.0)) throw DomainError("exact_t_on_shell: k must be > 0");
  const double g = form_factor(model, k);
  const double energy = k * k / model.mass;
  const std::complex<double> denom =
      1.0 + model.coupling * resolvent_element(model, energy, Side::above);
  if (std::abs(denom) < 1e-14) {
    throw InternalError("exact_t_on_shell: vanishing denominator at k = " +
                        std::to_string(k));
  }
  return -model.coupling * g * g / denom;
}

std::complex<double> exact_s_on_shell(const SeparableModel& model, double k) {
  const std::complex<double> t = exact_t_on_shell(model, k);
  return 1.0 - std::complex<double>(0.0, 2.0 * kPi * on_shell_density(model, k)) * t;
}

OnShellAmplitude exact_amplitude(const SeparableModel& model, double k) {
  OnShellAmplitude a;
  a.momentum = k;
  a.t_on_shell = exact_t_on_shell(model, k);
  a.s_matrix = 1.0 - std::complex<double>(0.0, 2.0 * kPi * on_shell_density(model, k)) *
                         a.t_on_shell;
  a.phase_shift = 0.5 * std::arg(a.s_matrix);
  return a;
}

std::optional<double> bound_state_energy(const SeparableModel& model) {
  model.validate();
  auto secular = [&](double e) {
    return 1.0 + model.coupling * resolvent_element(model, e, Side::above).real();
  };
  // secular -> 1 - lambda/lambda_c at threshold and -> 1 far below; it is
  // monotone in between, so a root exists iff the threshold value is < 0.
  if (!(secular(0.0) < 0.0)) return std::nullopt;
  double lo = -1.0;
  while (secular(lo) < 0.0) {
    lo *= 2.0;
    if (lo < -1e12) throw InternalError("bound_state_energy: bracket search diverged");
  }
  double hi = 0.0;
  while (hi - lo > 1e-10) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    if (secular(mid) < 0.0) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace euclidqm
