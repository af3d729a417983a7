// One PASS/FAIL line per acceptance criterion; exit status 0 iff all pass.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <unistd.h>
#include <vector>

#include "euclidqm/chebyshev.hpp"
#include "euclidqm/cli.hpp"
#include "euclidqm/euclidean_gf.hpp"
#include "euclidqm/kato_birman.hpp"
#include "euclidqm/model.hpp"

using namespace euclidqm;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void criterion(int id, const char* title, double time_limit_s, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const bool in_time = secs < time_limit_s;
  const bool pass = o.pass && in_time;
  if (!pass) ++failures;
  std::printf("%s criterion %d: %s | %s | %.2f s (limit %.0f s)%s\n", pass ? "PASS" : "FAIL", id,
              title, o.detail.c_str(), secs, time_limit_s, in_time ? "" : " TOO SLOW");
  std::fflush(stdout);
}

std::string fmt(const char* pattern, double a) {
  char buf[96];
  std::snprintf(buf, sizeof buf, pattern, a);
  return buf;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

int main() {
  const SeparableModel model = default_model();

  criterion(1, "Chebyshev N=300, n=220 on [0,1]: table and dense max <= 1e-12", 1.0, [] {
    const ChebyshevExpansion p = expansion_coefficients(220.0, 300, {0.0, 1.0});
    const ErrorReport r = uniform_error_report(p, 11, 10000);
    double table = 0.0;
    for (const auto& row : r.rows)
      table = std::max({table, std::abs(row.delta_cos), std::abs(row.delta_sin)});
    const bool ok = r.rows.size() == 11 && table <= 1e-12 && r.dense_max() < 1e-12;
    return Outcome{ok, "table max " + fmt("%.2e", table) + ", dense max " + fmt("%.2e", r.dense_max())};
  });

  criterion(2, "KB n-sweep at k0 = 1 GeV, sigma = k0/10: Re S, Im S within 1% from some n in [200,300] on", 60.0, [&] {
    KBConfig cfg;
    std::vector<int> ns;
    for (int n = 200; n <= 300; n += 10) ns.push_back(n);
    const auto rows = sweep_n(model, cfg, ns, 1000.0, 100.0);
    // first n from which both component errors stay below 1% through 300
    int onset = -1;
    double worst = 0.0;
    for (std::size_t i = rows.size(); i-- > 0;) {
      const auto& r = rows[i];
      const double er = std::abs(r.approx.real() - r.exact.real()) / std::abs(r.exact.real());
      const double ei = std::abs(r.approx.imag() - r.exact.imag()) / std::abs(r.exact.imag());
      if (er >= 1e-2 || ei >= 1e-2) break;
      onset = r.n;
      worst = std::max({worst, er, ei});
    }
    return Outcome{onset >= 200,
                   "below 1% from n = " + std::to_string(onset) + ", worst component error " +
                       fmt("%.2e", worst)};
  });

  criterion(3, "sharp t over 20 momenta in [100, 2000] MeV: median <= 1%, max <= 2% for Re t and Im t", 600.0, [&] {
    KBConfig cfg;
    cfg.adaptive_beta = true;
    const PacketSpec packets;  // sigma = k/40
    std::vector<double> ks;
    for (int i = 0; i < 20; ++i) ks.push_back(100.0 + 100.0 * i);
    const auto rows = t_scan(model, cfg, packets, ks);
    std::vector<double> re, im;
    for (const auto& r : rows) {
      re.push_back(std::abs(r.t_approx.real() - r.t_exact.real()) / std::abs(r.t_exact.real()));
      im.push_back(std::abs(r.t_approx.imag() - r.t_exact.imag()) / std::abs(r.t_exact.imag()));
    }
    const double mre = median(re), mim = median(im);
    const double xre = *std::max_element(re.begin(), re.end());
    const double xim = *std::max_element(im.begin(), im.end());
    const bool ok = ks.size() >= 20 && mre <= 1e-2 && mim <= 1e-2 && xre <= 2e-2 && xim <= 2e-2;
    return Outcome{ok, "Re median " + fmt("%.2e", mre) + " max " + fmt("%.2e", xre) +
                           "; Im median " + fmt("%.2e", mim) + " max " + fmt("%.2e", xim)};
  });

  criterion(4, "oracles: resolvent 1e-8, KB vs wave operator 0.1%, |S| = 1 to 1e-10", 60.0, [&] {
    double res = 0.0;
    for (double e : {-300.0, -5.0, -1e-2, 1e-3, 1.0, 10.6, 100.0, 1065.0, 4260.0, 20000.0}) {
      for (Side side : {Side::above, Side::below}) {
        const auto a = resolvent_element(model, e, side);
        res = std::max(res, std::abs(resolvent_element_quadrature(model, e, side) - a) / std::abs(a));
      }
    }
    KBConfig cfg;
    const ScatteringProblem problem(model, packet_grid(cfg, 1000.0, 100.0));
    const WavePacket packet = make_packet(1000.0, 100.0, problem.grid());
    const auto kb = kb_s_overlap(problem, cfg, packet, packet);
    double wave = 0.0;
    for (double t : {0.03, 0.05, 0.1})
      wave = std::max(wave, std::abs(wave_operator_s(problem, t, packet, packet) - kb) / std::abs(kb));
    double unit = 0.0;
    for (double k = 10.0; k <= 3000.0; k += 10.0)
      unit = std::max(unit, std::abs(std::abs(exact_s_on_shell(model, k)) - 1.0));
    const bool ok = res <= 1e-8 && wave <= 1e-3 && unit <= 1e-10;
    return Outcome{ok, "resolvent " + fmt("%.2e", res) + ", wave operator " + fmt("%.2e", wave) +
                           ", ||S|-1| " + fmt("%.2e", unit)};
  });

  criterion(5, "Euclidean axioms: 100 physical Gram matrices, contraction, Hermiticity, cluster rate", 300.0, [] {
    const double m = 139.0;
    const gf::CovarianceKernel kernel(m);
    std::mt19937_64 rng(2024);
    double worst = 1e300;
    for (int s = 0; s < 100; ++s) {
      const auto size = 2 + static_cast<std::size_t>(gf::uniform(rng, 0.0, 7.0));
      std::vector<gf::EuclideanTestFunction> fs;
      for (std::size_t i = 0; i < size; ++i) fs.push_back(gf::random_test_function(rng, kernel, true));
      const gf::GramMatrix g = gf::gram_matrix(kernel, fs, gf::ProductKind::physical);
      const Eigen::VectorXd ev = g.eigenvalues();
      worst = std::min(worst, ev[0] / ev[ev.size() - 1]);
    }
    double contraction = -1e300, herm = 0.0;
    for (int s = 0; s < 20; ++s) {
      gf::WaveFunctional b, c;
      for (int i = 0; i < 3; ++i) {
        b.add({gf::uniform(rng, -1, 1), gf::uniform(rng, -1, 1)}, gf::random_test_function(rng, kernel, true));
        c.add({gf::uniform(rng, -1, 1), gf::uniform(rng, -1, 1)}, gf::random_test_function(rng, kernel, true));
      }
      const double norm = gf::physical_inner(kernel, b, b).real();
      for (double beta : {0.5 / m, 2.0 / m}) {
        const auto bb = gf::time_translate(b, beta);
        contraction = std::max(contraction, gf::physical_inner(kernel, bb, bb).real() - norm);
        herm = std::max(herm, std::abs(gf::physical_inner(kernel, b, gf::time_translate(c, beta)) -
                                       gf::physical_inner(kernel, bb, c)));
      }
    }
    gf::EuclideanTestFunction f;
    f.tau_width = 0.05 / m;
    f.tau_center = 1.0 / m;
    f.spatial_width = 0.05 / m;
    f.amplitude = 1.0 / std::sqrt(gf::covariance(kernel, f, f));
    std::vector<double> d;
    for (int i = 0; i <= 12; ++i) d.push_back((2.0 + 0.5 * i) / m);
    const auto rows = gf::cluster_check(kernel, f, f, d);
    const double rate = gf::fit_cluster_rate(rows).rate / m;
    bool decays = true;
    for (std::size_t i = 1; i < rows.size(); ++i) decays = decays && rows[i].deviation < rows[i - 1].deviation;
    const bool ok = worst >= -1e-10 && contraction <= 1e-10 && herm <= 1e-10 && decays &&
                    std::abs(rate - 1.0) <= 0.1;
    return Outcome{ok, "min eig/max " + fmt("%.2e", worst) + ", max norm growth " + fmt("%.2e", contraction) +
                           ", Hermiticity " + fmt("%.2e", herm) + ", rate/m " + fmt("%.4f", rate)};
  });

  criterion(6, "one-particle <H> = sqrt(p^2+m^2) to 0.1%, <M^2> = m^2 to 0.5%, p in {0,100,300,500,800}", 60.0, [] {
    const double m = 139.0;
    const gf::CovarianceKernel kernel(m);
    double herr = 0.0, merr = 0.0;
    for (double p : {0.0, 100.0, 300.0, 500.0, 800.0}) {
      gf::EuclideanTestFunction f;
      f.tau_width = 2e-3;
      f.tau_center = 0.02;
      f.spatial_width = 1.0;
      f.momentum = {p, 0.0, 0.0};
      const auto fam = gf::one_particle_family(kernel, f, f);
      const auto norm = fam(0.0, gf::Vec3{});
      const double h = (gf::hamiltonian_element(fam).value / norm).real();
      const double m2 = (gf::mass_squared_element(fam).value / norm).real();
      herr = std::max(herr, std::abs(h / std::hypot(p, m) - 1.0));
      merr = std::max(merr, std::abs(m2 / (m * m) - 1.0));
    }
    return Outcome{herr <= 1e-3 && merr <= 5e-3,
                   "max H error " + fmt("%.2e", herr) + ", max M^2 error " + fmt("%.2e", merr)};
  });

  criterion(7, "repeated single-threaded runs give byte-identical CSVs", 600.0, [] {
    const fs::path root = fs::temp_directory_path() / ("euclidqm_accept_" + std::to_string(::getpid()));
    fs::remove_all(root);
    const std::vector<std::pair<std::string, std::vector<std::string>>> commands{
        {"cheb-table", {"cheb_table.csv"}},
        {"kb-sweep", {"kb_sweep.csv"}},
        {"t-scan", {"t_scan.csv"}},
        {"gf-report", {"gf_gram.csv", "gf_dispersion.csv", "gf_cluster.csv", "gf_cluster_fit.csv"}}};
    std::size_t compared = 0;
    bool ok = true;
    std::string note;
    for (const auto& [cmd, files] : commands) {
      std::ostringstream sink;
      for (const char* run : {"a", "b"}) {
        const fs::path dir = root / (cmd + "_" + run);
        const int code = cli::run({cmd, "--out", dir.string(), "--seed", "42", "--threads", "1"}, sink, sink);
        if (code != 0) {
          ok = false;
          note += " " + cmd + " exit " + std::to_string(code);
        }
      }
      for (const auto& f : files) {
        const std::string a = slurp(root / (cmd + "_a") / f);
        const std::string b = slurp(root / (cmd + "_b") / f);
        ++compared;
        if (a.empty() || a != b) {
          ok = false;
          note += " " + f + " differs";
        }
      }
    }
    fs::remove_all(root);
    return Outcome{ok, std::to_string(compared) + " files compared" + note};
  });

  std::printf("%s: %d criteria failed\n", failures ? "FAIL" : "PASS", failures);
  return failures ? 1 : 0;
}
