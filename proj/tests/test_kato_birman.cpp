#include <doctest.h>

#include <cmath>
#include <complex>
#include <string>

#include "euclidqm/errors.hpp"
#include "euclidqm/kato_birman.hpp"

using namespace euclidqm;

namespace {

const SeparableModel kModel = default_model();

struct Fixture {
  KBConfig cfg;
  double k0 = 1000.0;
  double sigma = 100.0;
  ScatteringProblem problem{kModel, packet_grid(cfg, k0, sigma)};
  WavePacket packet = make_packet(k0, sigma, problem.grid());
};

}  // namespace

TEST_CASE("packet normalization and moments") {
  const Fixture f;
  CHECK(f.packet.state.squaredNorm() == doctest::Approx(1.0).epsilon(1e-14));
  // Under the density k^2 |psi|^2, Gaussian moments give
  // <k> = (k0^3 + 3 k0 s^2) / (k0^2 + s^2).
  const double k0 = f.k0, s = f.sigma;
  double mean = 0.0;
  const auto& g = f.problem.grid();
  for (std::size_t i = 0; i < g.size(); ++i) {
    mean += g.weights[i] * std::pow(g.nodes[i], 3) * std::norm(f.packet.amplitude[static_cast<Eigen::Index>(i)]);
  }
  const double expect = (k0 * k0 * k0 + 3.0 * k0 * s * s) / (k0 * k0 + s * s);
  CHECK(mean == doctest::Approx(expect).epsilon(1e-12));
  CHECK(delta_e_overlap(kModel, g, f.packet, f.packet) ==
        doctest::Approx(0.5 * kModel.mass * expect).epsilon(1e-12));
}

TEST_CASE("packet beyond the grid names the required kmax") {
  GridSpec spec;
  spec.kmax = 1500.0;
  const RadialGrid g = build_grid(spec);
  try {
    (void)make_packet(1000.0, 100.0, g);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("1800") != std::string::npos);
  }
}

TEST_CASE("Chebyshev route equals the spectral route") {
  const Fixture f;
  for (int n : {20, 250}) {
    KBConfig c = f.cfg;
    c.n = n;
    const auto a = kb_s_overlap(f.problem, c, f.packet, f.packet);
    const auto b = kb_s_overlap_spectral(f.problem, c, f.packet, f.packet);
    CHECK(std::abs(a - b) < 1e-12);
  }
}

TEST_CASE("Kato-Birman overlap matches the exact packet S") {
  const Fixture f;
  const auto exact = exact_s_in_packets(kModel, f.problem.grid(), f.packet, f.packet);
  const auto kb = kb_s_overlap(f.problem, f.cfg, f.packet, f.packet);
  CHECK(std::abs(kb - exact) < 1e-5 * std::abs(exact - 1.0));
}

TEST_CASE("wave-operator oracle on its plateau") {
  const Fixture f;
  const auto kb = kb_s_overlap(f.problem, f.cfg, f.packet, f.packet);
  for (double t : {0.03, 0.05, 0.1}) {
    const auto w = wave_operator_s(f.problem, t, f.packet, f.packet);
    CHECK(std::abs(w - kb) < 1e-3 * std::abs(kb - 1.0));
  }
}

TEST_CASE("result does not depend on beta") {
  const Fixture f;
  const auto exact = exact_s_in_packets(kModel, f.problem.grid(), f.packet, f.packet);
  for (double beta : {2e-4, 8e-4, 1.2e-3}) {
    KBConfig c = f.cfg;
    c.beta = beta;
    CHECK(std::abs(kb_s_overlap(f.problem, c, f.packet, f.packet) - exact) <
          1e-5 * std::abs(exact - 1.0));
  }
}

TEST_CASE("zero coupling gives the identity") {
  SeparableModel free = kModel;
  free.coupling = 0.0;
  const KBConfig cfg;
  const auto rows = sweep_n(free, cfg, {50, 250}, 1000.0, 100.0);
  for (const auto& r : rows) CHECK(r.rel_err < 1e-12);
  PacketSpec ps;
  KBConfig scan = cfg;
  scan.adaptive_beta = true;
  const auto e = extract_sharp_t(free, scan, ps, 700.0);
  CHECK(e.t_exact == std::complex<double>(0.0));
  CHECK(std::abs(e.t_approx) < 1e-20);
}

TEST_CASE("n-sweep converges and narrower packets converge later") {
  const KBConfig cfg;
  const std::vector<int> ns{20, 40, 100, 200, 250, 300};
  const auto wide = sweep_n(kModel, cfg, ns, 1000.0, 100.0);
  const auto narrow = sweep_n(kModel, cfg, ns, 1000.0, 50.0);
  for (std::size_t i = 3; i < ns.size(); ++i) {
    CHECK(wide[i].rel_err < 1e-2);
    CHECK(narrow[i].rel_err < 1e-2);
  }
  CHECK(narrow[1].rel_err > 10.0 * wide[1].rel_err);
  CHECK(wide.front().rel_err > wide.back().rel_err);
  for (std::size_t i = 1; i < ns.size(); ++i) CHECK(wide[i].degree > wide[i - 1].degree);
}

TEST_CASE("sweep is independent of thread count") {
  const KBConfig cfg;
  const auto a = sweep_n(kModel, cfg, {100, 200, 300}, 1000.0, 100.0, 1);
  const auto b = sweep_n(kModel, cfg, {100, 200, 300}, 1000.0, 100.0, 3);
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i].approx == b[i].approx);
}

TEST_CASE("sharp t with and without a bound state") {
  KBConfig cfg;
  cfg.adaptive_beta = true;
  const PacketSpec ps;
  for (double k : {150.0, 1000.0, 1900.0}) {
    const auto e = extract_sharp_t(kModel, cfg, ps, k);
    CHECK(e.rel_err < 2e-2);
    CHECK(e.rel_err_re <= e.rel_err);
  }
  SeparableModel unbound = kModel;
  unbound.coupling = 0.5 * critical_coupling(kModel.mass, kModel.form_scale);
  REQUIRE_FALSE(bound_state_energy(unbound).has_value());
  CHECK(extract_sharp_t(unbound, cfg, ps, 400.0).rel_err < 2e-2);
}

TEST_CASE("bound state widens the Chebyshev domain") {
  const Fixture f;
  const double beta = 0.05;
  const Interval d = semigroup_domain(f.problem.hamiltonian(), beta);
  CHECK(d.hi == doctest::Approx(std::exp(beta * kDefaultBindingMev)).epsilon(1e-4));
  SeparableModel unbound = kModel;
  unbound.coupling = 0.2 * critical_coupling(kModel.mass, kModel.form_scale);
  const ScatteringProblem p(unbound, f.problem.grid());
  CHECK(semigroup_domain(p.hamiltonian(), beta).hi == 1.0);
}

TEST_CASE("configuration errors") {
  KBConfig cfg;
  cfg.chebyshev_degree = 10;
  const Fixture f;
  CHECK_THROWS_AS((void)kb_s_overlap(f.problem, cfg, f.packet, f.packet), ConfigError);
  cfg = KBConfig{};
  cfg.n = 0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  PacketSpec ps;
  ps.width_fraction = 0.7;
  CHECK_THROWS_AS(ps.validate(), ConfigError);
  CHECK(PacketSpec{0.1, WidthConvention::sigma}.sigma(1000.0) == 100.0);
  CHECK(PacketSpec{0.1, WidthConvention::fwhm}.sigma(1000.0) ==
        doctest::Approx(100.0 / 2.3548200450309493).epsilon(1e-14));
}
