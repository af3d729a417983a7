#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "euclidqm/chebyshev.hpp"
#include "euclidqm/model.hpp"
#include "euclidqm/spectral.hpp"

namespace euclidqm {

/// Gaussian momentum-space packet psi(k) ~ exp(-(k - k0)^2 / (4 sigma^2)),
/// normalized so that sum_i w_i k_i^2 |psi(k_i)|^2 = 1. |psi|^2 has standard
/// deviation sigma.
struct WavePacket {
  double center = 0.0;
  double width = 0.0;
  Eigen::VectorXcd amplitude;  ///< psi(k_i)
  Eigen::VectorXcd state;      ///< sqrt(w_i) k_i psi(k_i); plain dot product is <.|.>

  /// dk/dE = m/(2k) at the packet center.
  [[nodiscard]] double energy_jacobian(double mass) const { return mass / (2.0 * center); }
};

WavePacket make_packet(double k0, double sigma, const RadialGrid& grid);

enum class WidthConvention { sigma, fwhm };

/// Packet width as a fraction of the central momentum. With `sigma` the
/// fraction is the standard deviation of |psi|^2, with `fwhm` its full
/// width at half maximum. The packet-averaging bias of the extracted t grows
/// as the width squared (about 5% at sigma = k/10, 0.4% at k/40).
struct PacketSpec {
  double width_fraction = 0.025;
  WidthConvention convention = WidthConvention::sigma;

  [[nodiscard]] double sigma(double k0) const;
  void validate() const;
};

struct KBConfig {
  int n = 250;
  double beta = 5e-4;            ///< MeV^-1, used when adaptive_beta is false
  bool adaptive_beta = false;    ///< beta = beta_scale / (k^2/m) per packet
  double beta_scale = 1.0;
  std::size_t chebyshev_degree = 0;  ///< 0 selects the threshold degree
  double chebyshev_tolerance = 1e-13;
  GridSpec grid;                  ///< template; a focus window is added per packet
  std::size_t focus_points = 200;
  double focus_sigmas = 8.0;      ///< focus window is k0 +- focus_sigmas * sigma

  void validate() const;
  [[nodiscard]] double beta_for(double k0, double mass) const;
};

/// Model plus its diagonalized grid Hamiltonian; immutable.
class ScatteringProblem {
 public:
  ScatteringProblem(SeparableModel model, RadialGrid grid);

  [[nodiscard]] const SeparableModel& model() const { return model_; }
  [[nodiscard]] const RadialGrid& grid() const { return grid_; }
  [[nodiscard]] const SpectralOperator& hamiltonian() const { return h_; }
  [[nodiscard]] const Eigen::VectorXd& free_energies() const { return free_energies_; }

 private:
  SeparableModel model_;
  RadialGrid grid_;
  SpectralOperator h_;
  Eigen::VectorXd free_energies_;
};

/// Grid from cfg.grid with the focus window centered on k0.
RadialGrid packet_grid(const KBConfig& cfg, double k0, double sigma);

/// Chebyshev interval [0, max(1, e^{-beta E_min})] for the semigroup.
Interval semigroup_domain(const SpectralOperator& h, double beta);

/// Degree actually used for a given n: cfg.chebyshev_degree if nonzero
/// (ConfigError if below threshold), else the threshold for frequency 2n.
std::size_t chebyshev_degree_for(const KBConfig& cfg, int n, Interval domain);

/// <psi'| e^{-in e^{-beta H0}} p(e^{-beta H}) e^{-in e^{-beta H0}} |psi>, where p is
/// the Chebyshev approximant of e^{2in x}. Phi is the identity injection.
std::complex<double> kb_s_overlap(const ScatteringProblem& problem, const KBConfig& cfg,
                                  const WavePacket& out, const WavePacket& in);

/// Same overlap with p replaced by the exact spectral map (reference route).
std::complex<double> kb_s_overlap_spectral(const ScatteringProblem& problem,
                                           const KBConfig& cfg, const WavePacket& out,
                                           const WavePacket& in);

/// <psi'| e^{iH0 t} e^{-2iHt} e^{iH0 t} |psi>, the time-dependent wave-operator
/// form of S, evaluated through the eigendecomposition.
std::complex<double> wave_operator_s(const ScatteringProblem& problem, double time,
                                     const WavePacket& out, const WavePacket& in);

/// sum_i w_i k_i^2 psi'*(k_i) S(k_i) psi(k_i) with the exact on-shell S.
std::complex<double> exact_s_in_packets(const SeparableModel& model, const RadialGrid& grid,
                                        const WavePacket& out, const WavePacket& in);

/// <psi'| delta(E' - E) |psi> = sum_i w_i k_i^2 psi'* psi * rho(k_i), rho = m k / 2
/// (the energy Jacobian m/(2k) times the k^2 of the second packet's measure).
double delta_e_overlap(const SeparableModel& model, const RadialGrid& grid,
                       const WavePacket& out, const WavePacket& in);

struct SweepRow {
  int n = 0;
  std::size_t degree = 0;
  std::complex<double> approx;
  std::complex<double> exact;
  double rel_err = 0.0;  ///< |approx - exact| / |exact|
};

/// S-overlap of identical packets at k0 for each n; the Chebyshev degree is
/// raised per n to keep the polynomial error below tolerance.
std::vector<SweepRow> sweep_n(const SeparableModel& model, const KBConfig& cfg,
                              const std::vector<int>& n_values, double k0, double sigma,
                              unsigned threads = 1);

struct SMatrixEstimate {
  double momentum = 0.0;
  double sigma = 0.0;
  double beta = 0.0;
  int n = 0;
  std::size_t degree = 0;
  std::complex<double> s_approx;  ///< Kato-Birman packet overlap
  std::complex<double> s_exact;   ///< exact packet-averaged S
  std::complex<double> t_approx;
  std::complex<double> t_exact;   ///< exact_t_on_shell(momentum)
  double rel_err = 0.0;           ///< |t_approx - t_exact| / |t_exact|
  double rel_err_re = 0.0;        ///< |Re t_approx - Re t_exact| / |t_exact|
  double rel_err_im = 0.0;        ///< |Im t_approx - Im t_exact| / |t_exact|
};

/// Sharp-momentum t from identical packets at k:
///   t ~ (<psi|S|psi> - <psi|psi>) / (-2 pi i <psi|delta(E'-E)|psi>).
SMatrixEstimate extract_sharp_t(const SeparableModel& model, const KBConfig& cfg,
                                const PacketSpec& packets, double k);

std::vector<SMatrixEstimate> t_scan(const SeparableModel& model, const KBConfig& cfg,
                                    const PacketSpec& packets,
                                    const std::vector<double>& momenta, unsigned threads = 1);

}  // namespace euclidqm
