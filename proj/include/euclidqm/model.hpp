#pragma once

#include <complex>
#include <optional>

namespace euclidqm {

/// Rank-one separable toy Hamiltonian
///
///   H = k^2/m - lambda |g><g|,   g(k) = 1/(mpi^2 + k^2)
///
/// acting in the s-wave. Natural units, energies and momenta in MeV.
///
/// Normalization: radial states with <k|k'> = delta(k - k')/k^2, so the
/// completeness relation is int_0^inf dk k^2 |k><k|. Under this measure
///
///   <g|(z - H0)^-1|g> = int_0^inf dk k^2 g(k)^2 / (z - k^2/m),
///   t(k)  = -lambda g(k)^2 / (1 + lambda <g|(E + i0 - H0)^-1|g>),
///   S(k)  = 1 - 2 pi i rho(k) t(k),  rho(k) = m k / 2,
///
/// i.e. S = 1 - i pi m k t. `lambda` therefore has units MeV^4 * MeV^-2
/// relative to the radial measure.
struct SeparableModel {
  double mass = 938.9;       ///< m in H0 = k^2/m
  double coupling = 0.0;     ///< lambda; positive is attractive
  double form_scale = 139.0; ///< mpi

  void validate() const;
};

/// Coupling for which the model binds at energy -binding (closed form).
double coupling_for_binding(double mass, double form_scale, double binding);

/// Coupling at which the bound state reaches threshold.
double critical_coupling(double mass, double form_scale);

/// m = 938.9 MeV, mpi = 139 MeV, lambda tuned to E_b = -2.2246 MeV.
SeparableModel default_model();

inline constexpr double kDefaultBindingMev = 2.2246;

enum class Side { above, below };

double form_factor(const SeparableModel& model, double k);

/// <g|(E +- i0 - H0)^-1|g>, closed form for the Yamaguchi form factor.
std::complex<double> resolvent_element(const SeparableModel& model, double energy,
                                       Side side = Side::above);

/// Same quantity by subtracted principal-value quadrature plus the explicit
/// -+ i pi rho g^2 residue.
std::complex<double> resolvent_element_quadrature(const SeparableModel& model,
                                                  double energy,
                                                  Side side = Side::above);

/// On-shell density rho(k) = k^2 dk/dE = m k / 2.
double on_shell_density(const SeparableModel& model, double k);

struct OnShellAmplitude {
  double momentum = 0.0;
  std::complex<double> t_on_shell;
  std::complex<double> s_matrix;
  double phase_shift = 0.0;  ///< arg(S)/2 in (-pi/2, pi/2]
};

std::complex<double> exact_t_on_shell(const SeparableModel& model, double k);
std::complex<double> exact_s_on_shell(const SeparableModel& model, double k);
OnShellAmplitude exact_amplitude(const SeparableModel& model, double k);

/// Bound-state energy (< 0) if the coupling binds, found by bracketing and
/// bisection to 1e-10 MeV.
std::optional<double> bound_state_energy(const SeparableModel& model);

}  // namespace euclidqm
