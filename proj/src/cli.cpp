#include "euclidqm/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <ostream>
#include <random>

#include "euclidqm/chebyshev.hpp"
#include "euclidqm/config.hpp"
#include "euclidqm/csv.hpp"
#include "euclidqm/errors.hpp"
#include "euclidqm/euclidean_gf.hpp"
#include "euclidqm/kato_birman.hpp"
#include "euclidqm/model.hpp"
#include "euclidqm/parallel.hpp"

namespace euclidqm::cli {

namespace {

struct Options {
  std::string command;
  std::string config_path;
  std::string out_dir;
  unsigned threads = 1;
  std::uint64_t seed = 1;
  bool seed_given = false;
};

std::string num(double v) { return format_number(v); }
std::string num(std::size_t v) { return std::to_string(v); }

std::string fmt(const char* pattern, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, pattern, v);
  return buf;
}

SeparableModel model_from(const Config& c) {
  SeparableModel m;
  m.mass = c.get_double("model.mass_mev", 938.9);
  m.form_scale = c.get_double("model.mpi_mev", 139.0);
  if (!(m.mass > 0.0) || !(m.form_scale > 0.0))
    throw ConfigError("model.mass_mev and model.mpi_mev must be > 0");
  if (c.has("model.lambda")) {
    m.coupling = c.get_double("model.lambda", 0.0);
  } else {
    const double eb = c.get_double("model.binding_mev", kDefaultBindingMev);
    if (!(eb > 0.0)) throw ConfigError("model.binding_mev must be > 0 (or set model.lambda)");
    m.coupling = coupling_for_binding(m.mass, m.form_scale, eb);
  }
  m.validate();
  return m;
}

std::size_t positive_count(const Config& c, const std::string& key, long fallback) {
  const long v = c.get_int(key, fallback);
  if (v < 1) throw ConfigError(key + " must be >= 1");
  return static_cast<std::size_t>(v);
}

KBConfig kb_from(const Config& c, const std::string& section, bool adaptive_default) {
  KBConfig k;
  k.n = static_cast<int>(c.get_int("kb.n", 250));
  k.beta = c.get_double("kb.beta", 5e-4);
  k.adaptive_beta = c.get_bool(section + ".adaptive_beta", adaptive_default);
  k.beta_scale = c.get_double("kb.beta_scale", 1.0);
  const long degree = c.get_int("kb.degree", 0);
  if (degree < 0) throw ConfigError("kb.degree must be >= 0");
  k.chebyshev_degree = static_cast<std::size_t>(degree);
  k.chebyshev_tolerance = c.get_double("kb.chebyshev_tolerance", 1e-13);
  k.grid.low_points = positive_count(c, "grid.low_points", 48);
  k.grid.high_points = positive_count(c, "grid.high_points", 96);
  k.grid.split = c.get_double("grid.split_mev", 2.0 * 139.0);
  k.grid.kmax = c.get_double("grid.kmax_mev", 6000.0);
  k.focus_points = positive_count(c, "grid.focus_points", 200);
  k.focus_sigmas = c.get_double("grid.focus_sigmas", 8.0);
  k.validate();
  return k;
}

PacketSpec packets_from(const Config& c, const std::string& section, double fraction,
                        WidthConvention fallback) {
  PacketSpec p;
  p.width_fraction = c.get_double(section + ".width_fraction", fraction);
  const std::string conv =
      c.get_string(section + ".width_convention", fallback == WidthConvention::fwhm ? "fwhm" : "sigma");
  if (conv == "fwhm") {
    p.convention = WidthConvention::fwhm;
  } else if (conv == "sigma") {
    p.convention = WidthConvention::sigma;
  } else {
    throw ConfigError(section + ".width_convention must be 'sigma' or 'fwhm'");
  }
  p.validate();
  return p;
}

std::string output_path(const Options& o, const std::string& name) {
  std::error_code ec;
  std::filesystem::create_directories(o.out_dir, ec);
  if (ec) throw IoError("cannot create output directory '" + o.out_dir + "': " + ec.message());
  return (std::filesystem::path(o.out_dir) / name).string();
}

// ---------------------------------------------------------------------------

void cheb_table(const Config& c, const Options& o, std::ostream& out) {
  const double n = c.get_double("cheb.n", 220.0);
  const long degree = c.get_int("cheb.degree", 300);
  const Interval domain{c.get_double("cheb.lo", 0.0), c.get_double("cheb.hi", 1.0)};
  const std::size_t samples = positive_count(c, "cheb.samples", 11);
  const std::size_t dense = positive_count(c, "cheb.dense_points", 10000);
  const double target = c.get_double("cheb.tolerance", 1e-12);
  if (degree < 0) throw ConfigError("cheb.degree must be >= 0");
  if (!(domain.hi > domain.lo)) throw ConfigError("cheb.hi must exceed cheb.lo");

  const ChebyshevExpansion p =
      expansion_coefficients(n, static_cast<std::size_t>(degree), domain);
  const ErrorReport report = uniform_error_report(p, samples, dense);
  const std::string path = output_path(o, "cheb_table.csv");
  CsvWriter csv(path, {"row", "x", "delta_cos", "delta_sin"});
  for (const auto& r : report.rows)
    csv.row({"sample", num(r.x), num(r.delta_cos), num(r.delta_sin)});
  csv.row({"dense_max", "", num(report.dense_max_cos), num(report.dense_max_sin)});
  csv.close();

  const std::size_t threshold = required_degree(n, domain, target);
  out << "cheb-table: n=" << n << " degree=" << degree << " on [" << domain.lo << ", "
      << domain.hi << "]\n";
  out << "  dense max |error| over " << report.dense_points
      << " points: " << fmt("%.3e", report.dense_max()) << "\n";
  if (static_cast<std::size_t>(degree) < threshold || report.dense_max() > target) {
    out << "WARN: degree " << degree << " is below the threshold " << threshold
        << " for error " << fmt("%.1e", target) << "\n";
  }
  out << "  wrote " << path << "\n";
}

void kb_sweep(const Config& c, const Options& o, std::ostream& out) {
  const SeparableModel model = model_from(c);
  const KBConfig cfg = kb_from(c, "sweep", false);
  const PacketSpec packets = packets_from(c, "sweep", 0.1, WidthConvention::sigma);
  const double k0 = c.get_double("sweep.k0_mev", 1000.0);
  const long n_min = c.get_int("sweep.n_min", 10);
  const long n_max = c.get_int("sweep.n_max", 350);
  const long n_step = c.get_int("sweep.n_step", 10);
  if (n_min < 1 || n_max < n_min || n_step < 1)
    throw ConfigError("sweep: need 1 <= n_min <= n_max and n_step >= 1");
  std::vector<int> ns;
  for (long n = n_min; n <= n_max; n += n_step) ns.push_back(static_cast<int>(n));

  const double sigma = packets.sigma(k0);
  const auto rows = sweep_n(model, cfg, ns, k0, sigma, o.threads);
  const std::string path = output_path(o, "kb_sweep.csv");
  CsvWriter csv(path, {"n", "re_approx", "im_approx", "re_exact", "im_exact", "rel_err",
                       "rel_err_re", "rel_err_im", "degree"});
  double best = 1e300;
  for (const auto& r : rows) {
    const double scale = std::abs(r.exact);
    csv.row({std::to_string(r.n), num(r.approx.real()), num(r.approx.imag()),
             num(r.exact.real()), num(r.exact.imag()), num(r.rel_err),
             num(std::abs(r.approx.real() - r.exact.real()) / scale),
             num(std::abs(r.approx.imag() - r.exact.imag()) / scale), num(r.degree)});
    best = std::min(best, r.rel_err);
  }
  csv.close();
  out << "kb-sweep: k0=" << k0 << " MeV sigma=" << sigma << " MeV beta="
      << cfg.beta_for(k0, model.mass) << " MeV^-1, n in [" << n_min << ", " << n_max << "]\n";
  out << "  exact packet S = " << fmt("%.10f", rows.front().exact.real()) << " + "
      << fmt("%.10f", rows.front().exact.imag()) << "i\n";
  out << "  smallest rel_err " << fmt("%.3e", best) << "\n";
  out << "  wrote " << path << "\n";
}

void t_scan_cmd(const Config& c, const Options& o, std::ostream& out) {
  const SeparableModel model = model_from(c);
  const KBConfig cfg = kb_from(c, "scan", true);
  const PacketSpec packets = packets_from(c, "scan", 0.025, WidthConvention::sigma);
  std::vector<double> ks;
  if (c.has("scan.momenta_mev")) {
    ks = c.get_doubles("scan.momenta_mev", {});
  } else {
    const double lo = c.get_double("scan.k_min_mev", 100.0);
    const double hi = c.get_double("scan.k_max_mev", 2000.0);
    const std::size_t points = positive_count(c, "scan.points", 20);
    if (!(lo > 0.0) || hi < lo) throw ConfigError("scan: need 0 < k_min <= k_max");
    for (std::size_t i = 0; i < points; ++i)
      ks.push_back(points == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) /
                                               static_cast<double>(points - 1));
  }
  const auto rows = t_scan(model, cfg, packets, ks, o.threads);
  const std::string path = output_path(o, "t_scan.csv");
  CsvWriter csv(path, {"k", "re_t_approx", "im_t_approx", "re_t_exact", "im_t_exact", "rel_err",
                       "rel_err_re", "rel_err_im", "sigma", "beta", "degree"});
  std::vector<double> errs;
  for (const auto& r : rows) {
    csv.row({num(r.momentum), num(r.t_approx.real()), num(r.t_approx.imag()),
             num(r.t_exact.real()), num(r.t_exact.imag()), num(r.rel_err), num(r.rel_err_re),
             num(r.rel_err_im), num(r.sigma), num(r.beta), num(r.degree)});
    errs.push_back(r.rel_err);
  }
  csv.close();
  std::sort(errs.begin(), errs.end());
  const auto bound = bound_state_energy(model);
  out << "t-scan: " << ks.size() << " momenta, n=" << cfg.n
      << (cfg.adaptive_beta ? ", beta = beta_scale * m/k^2" : "") << "\n";
  if (bound) out << "  bound state at " << fmt("%.6f", *bound) << " MeV\n";
  if (!errs.empty()) {
    out << "  rel_err median " << fmt("%.3e", errs[errs.size() / 2]) << ", max "
        << fmt("%.3e", errs.back()) << "\n";
  }
  out << "  wrote " << path << "\n";
}

void gf_report(const Config& c, const Options& o, std::ostream& out) {
  const double mass = c.get_double("gf.mass_mev", 139.0);
  gf::KernelQuadrature quad;
  quad.radial_nodes = positive_count(c, "gf.radial_nodes", 24);
  quad.hermite_nodes = positive_count(c, "gf.hermite_nodes", 20);
  const gf::CovarianceKernel kernel(mass, quad);
  const std::uint64_t seed =
      o.seed_given ? o.seed : static_cast<std::uint64_t>(c.get_int("run.seed", 1));

  // Gram spectra
  const std::size_t sets = positive_count(c, "gf.gram_sets", 100);
  const std::size_t max_size = positive_count(c, "gf.gram_max_size", 8);
  if (max_size < 2) throw ConfigError("gf.gram_max_size must be >= 2");
  std::mt19937_64 rng(seed);
  struct GramJob {
    gf::ProductKind kind;
    std::vector<gf::EuclideanTestFunction> functions;
  };
  std::vector<GramJob> jobs;
  for (std::size_t s = 0; s < sets; ++s) {
    const auto size =
        2 + static_cast<std::size_t>(gf::uniform(rng, 0.0, static_cast<double>(max_size - 1)));
    for (gf::ProductKind kind : {gf::ProductKind::physical, gf::ProductKind::euclidean}) {
      GramJob job{kind, {}};
      for (std::size_t i = 0; i < size; ++i)
        job.functions.push_back(
            gf::random_test_function(rng, kernel, kind == gf::ProductKind::physical));
      jobs.push_back(std::move(job));
    }
  }
  struct GramResult {
    double min_eig = 0.0, max_eig = 0.0, herm = 0.0;
  };
  std::vector<GramResult> gram(jobs.size());
  parallel_for(jobs.size(), o.threads, [&](std::size_t i) {
    const gf::GramMatrix g = gf::gram_matrix(kernel, jobs[i].functions, jobs[i].kind);
    const Eigen::VectorXd ev = g.eigenvalues();
    gram[i] = {ev[0], ev[ev.size() - 1], g.hermiticity_defect()};
  });
  const std::string gram_path = output_path(o, "gf_gram.csv");
  CsvWriter gcsv(gram_path, {"set", "product", "size", "min_eig", "max_eig", "min_over_max",
                             "hermiticity_defect"});
  double worst_phys = 1e300;
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    const double ratio = gram[i].min_eig / gram[i].max_eig;
    if (jobs[i].kind == gf::ProductKind::physical) worst_phys = std::min(worst_phys, ratio);
    gcsv.row({std::to_string(i / 2),
              jobs[i].kind == gf::ProductKind::physical ? "physical" : "euclidean",
              num(jobs[i].functions.size()), num(gram[i].min_eig), num(gram[i].max_eig),
              num(ratio), num(gram[i].herm)});
  }
  gcsv.close();

  // Dispersion in the one-particle sector
  const std::vector<double> momenta =
      c.get_doubles("gf.dispersion_momenta_mev", {0.0, 100.0, 300.0, 500.0, 800.0});
  gf::DifferenceSteps steps;
  steps.time = c.get_double("gf.time_step", 1e-4);
  steps.space = c.get_double("gf.space_step", 1e-4);
  const double spatial_width = c.get_double("gf.state_spatial_width", 1.0);
  const double tau_width = c.get_double("gf.state_tau_width", 2e-3);
  struct DispRow {
    std::complex<double> norm;
    gf::GeneratorElement h, m2;
    gf::MomentumElement p;
  };
  std::vector<DispRow> disp(momenta.size());
  parallel_for(momenta.size(), o.threads, [&](std::size_t i) {
    gf::EuclideanTestFunction f;
    f.tau_width = tau_width;
    f.tau_center = 8.0 * tau_width + 2.0 * steps.time;
    f.spatial_width = spatial_width;
    f.momentum = {momenta[i], 0.0, 0.0};
    const auto family = gf::one_particle_family(kernel, f, f, steps);
    disp[i] = {family(0.0, gf::Vec3{}), gf::hamiltonian_element(family, steps),
               gf::mass_squared_element(family, steps), gf::momentum_element(family, steps)};
  });
  const std::string disp_path = output_path(o, "gf_dispersion.csv");
  CsvWriter dcsv(disp_path, {"p", "h_over_norm", "omega_exact", "h_rel_err", "px_over_norm",
                             "m2_over_norm", "m2_exact", "m2_rel_err", "h_fd_error"});
  double worst_h = 0.0, worst_m2 = 0.0;
  for (std::size_t i = 0; i < momenta.size(); ++i) {
    const double p = momenta[i];
    const double w = std::sqrt(p * p + mass * mass);
    const double h = (disp[i].h.value / disp[i].norm).real();
    const double m2 = (disp[i].m2.value / disp[i].norm).real();
    const double herr = std::abs(h - w) / w;
    const double merr = std::abs(m2 - mass * mass) / (mass * mass);
    worst_h = std::max(worst_h, herr);
    worst_m2 = std::max(worst_m2, merr);
    dcsv.row({num(p), num(h), num(w), num(herr), num((disp[i].p.value[0] / disp[i].norm).real()),
              num(m2), num(mass * mass), num(merr), num(disp[i].h.error / std::abs(disp[i].norm))});
  }
  dcsv.close();

  // Cluster decay
  gf::EuclideanTestFunction f;
  f.tau_width = 0.05 / mass;
  f.tau_center = 1.0 / mass;
  f.spatial_width = 0.05 / mass;
  f.amplitude = 1.0 / std::sqrt(gf::covariance(kernel, f, f));
  const std::size_t cpoints = positive_count(c, "gf.cluster_points", 13);
  const double a_lo = c.get_double("gf.cluster_min", 2.0) / mass;
  const double a_hi = c.get_double("gf.cluster_max", 8.0) / mass;
  if (!(a_hi > a_lo) || cpoints < 2) throw ConfigError("gf.cluster: need 2 points and max > min");
  std::vector<double> dist;
  for (std::size_t i = 0; i < cpoints; ++i)
    dist.push_back(a_lo + (a_hi - a_lo) * static_cast<double>(i) / static_cast<double>(cpoints - 1));
  const auto rows = gf::cluster_check(kernel, f, f, dist);
  const gf::ClusterFit fit = gf::fit_cluster_rate(rows);
  const std::string cl_path = output_path(o, "gf_cluster.csv");
  CsvWriter ccsv(cl_path, {"distance", "distance_times_mass", "deviation"});
  for (const auto& r : rows) ccsv.row({num(r.distance), num(r.distance * mass), num(r.deviation)});
  ccsv.close();
  const std::string fit_path = output_path(o, "gf_cluster_fit.csv");
  CsvWriter fcsv(fit_path, {"fitted_rate", "field_mass", "rate_over_mass"});
  fcsv.row({num(fit.rate), num(mass), num(fit.rate / mass)});
  fcsv.close();

  out << "gf-report: field mass " << mass << " MeV, seed " << seed << "\n";
  out << "  " << sets << " physical Gram sets, worst min/max eigenvalue "
      << fmt("%.3e", worst_phys) << "\n";
  out << "  dispersion: max |<H>/omega - 1| " << fmt("%.3e", worst_h) << ", max |<M^2>/m^2 - 1| "
      << fmt("%.3e", worst_m2) << "\n";
  out << "  cluster rate / mass " << fmt("%.4f", fit.rate / mass) << "\n";
  out << "  wrote " << gram_path << ", " << disp_path << ", " << cl_path << ", " << fit_path
      << "\n";
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Euclidean-formulation scattering and generating-functional experiments",
               "euclidqm"};
  app.require_subcommand(1);
  for (const char* name : {"cheb-table", "kb-sweep", "t-scan", "gf-report"}) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--config", o.config_path, "key=value config file");
    sub->add_option("--out", o.out_dir, "output directory");
    sub->add_option("--threads", o.threads, "worker threads")->check(CLI::PositiveNumber);
    sub->add_option("--seed", o.seed, "random seed");
    sub->callback([&o, name] { o.command = name; });
  }
  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kConfigError;
  }
  for (CLI::App* sub : app.get_subcommands())
    o.seed_given = sub->count("--seed") > 0;

  try {
    const Config config = o.config_path.empty() ? Config{} : Config::from_file(o.config_path);
    if (o.out_dir.empty()) o.out_dir = config.get_string("run.out_dir", "out");
    if (o.command == "cheb-table") cheb_table(config, o, out);
    else if (o.command == "kb-sweep") kb_sweep(config, o, out);
    else if (o.command == "t-scan") t_scan_cmd(config, o, out);
    else gf_report(config, o, out);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const IoError& e) {
    err << "I/O error: " << e.what() << "\n";
    return kIoError;
  } catch (const std::exception& e) {
    err << "numerical error: " << e.what() << "\n";
    return kNumericalError;
  }
  return kOk;
}

}  // namespace euclidqm::cli
