#include "tailmix/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include "tailmix/copula.hpp"
#include "tailmix/csv.hpp"
#include "tailmix/dist.hpp"
#include "tailmix/fit.hpp"
#include "tailmix/mixing.hpp"
#include "tailmix/sim.hpp"
#include "tailmix/tails.hpp"

namespace tailmix::cli {

namespace {

CopulaFamily parse_family(const std::string& spec) {
  if (spec == "gauss" || spec == "gaussian") return CopulaFamily::gaussian();
  if (spec.rfind("t:", 0) == 0) {
    const double nu = std::stod(spec.substr(2));
    return CopulaFamily::student_t(nu);
  }
  throw CLI::ValidationError("--family", "expected 'gauss' or 't:<nu>', got '" + spec + "'");
}

// Mixing grammar: point:<rho> | uniform:<lo>,<hi> |
// scar:<beta>,<sigma>,mean=<rho_bar> | empirical:<path>.
// SCAR is parameterized by (beta, sigma, mean); alpha is solved internally.
MixingDistribution parse_mixing(const std::string& spec, double* solved_alpha) {
  const auto colon = spec.find(':');
  if (colon == std::string::npos)
    throw CLI::ValidationError("--mix", "malformed mixing spec '" + spec + "'");
  const std::string kind = spec.substr(0, colon);
  const std::string args = spec.substr(colon + 1);

  if (kind == "point") return MixingDistribution::point_mass(std::stod(args));

  if (kind == "uniform") {
    const auto comma = args.find(',');
    if (comma == std::string::npos)
      throw CLI::ValidationError("--mix", "uniform needs '<lo>,<hi>'");
    return MixingDistribution::uniform_interval(std::stod(args.substr(0, comma)),
                                                std::stod(args.substr(comma + 1)));
  }

  if (kind == "scar") {
    const auto c1 = args.find(',');
    const auto c2 = args.find(',', c1 == std::string::npos ? c1 : c1 + 1);
    const auto mean_tag = args.find("mean=");
    if (c1 == std::string::npos || c2 == std::string::npos || mean_tag == std::string::npos)
      throw CLI::ValidationError("--mix", "scar needs '<beta>,<sigma>,mean=<rho_bar>'");
    const double beta = std::stod(args.substr(0, c1));
    const double sigma = std::stod(args.substr(c1 + 1, c2 - c1 - 1));
    const double mean = std::stod(args.substr(mean_tag + 5));
    const double alpha = solve_alpha_for_mean(mean, beta, sigma);
    if (solved_alpha) *solved_alpha = alpha;
    return MixingDistribution::scar_stationary(alpha, beta, sigma);
  }

  if (kind == "empirical") {
    std::ifstream in(args);
    if (!in) throw CLI::ValidationError("--mix", "cannot open empirical sample file '" + args + "'");
    return MixingDistribution::empirical(csv::read_column(in));
  }

  throw CLI::ValidationError("--mix", "unknown mixing kind '" + kind + "'");
}

struct GridSpec {
  double hi = 1e-1;
  double lo = 1e-10;
  int per_decade = 50;
};

GridSpec parse_grid(const std::string& spec) {
  GridSpec g;
  const auto c1 = spec.find(':');
  const auto c2 = spec.find(':', c1 + 1);
  if (c1 == std::string::npos || c2 == std::string::npos)
    throw CLI::ValidationError("--grid", "expected '<u_hi>:<u_lo>:<points_per_decade>'");
  g.hi = std::stod(spec.substr(0, c1));
  g.lo = std::stod(spec.substr(c1 + 1, c2 - c1 - 1));
  g.per_decade = std::stoi(spec.substr(c2 + 1));
  return g;
}

// Output sink: file path or '-' for stdout. The config header carries every
// value that affects the numbers; thread count is deliberately left out so
// reruns at any parallelism are byte-identical.
class Output {
 public:
  explicit Output(const std::string& path) : path_(path) {
    if (path_ != "-") {
      file_.open(path_);
      if (!file_) throw std::runtime_error("cannot open output file '" + path_ + "'");
    }
  }

  std::ostream& stream() { return path_ == "-" ? std::cout : file_; }

  void finish() {
    if (path_ == "-") {
      std::cout.flush();
      if (!std::cout) throw std::runtime_error("error writing to stdout");
      return;
    }
    file_.flush();
    if (!file_) throw std::runtime_error("error writing output file '" + path_ + "'");
  }

 private:
  std::string path_;
  std::ofstream file_;
};

std::string nu_to_string(const Dof& nu) {
  return nu.is_infinite() ? "inf" : csv::format(nu.value());
}

Dof nu_from_string(const std::string& s) {
  if (s == "inf" || s == "Inf" || s == "INF") return Dof::infinite();
  return Dof(std::stod(s));
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, sep)) out.push_back(tok);
  return out;
}

}  // namespace

int run(int argc, const char* const* argv) {
  CLI::App app{"tail dependence of correlation mixtures of elliptical copulas"};
  app.require_subcommand(1);

  std::string family_spec = "t:5";
  std::string mix_spec = "point:0.5";
  std::string grid_spec = "1e-1:1e-10:50";
  std::string out_path = "-";
  std::string input_path;
  std::uint64_t seed = 1;
  int threads = 0;

  auto add_common = [&](CLI::App* cmd, bool with_family_mix) {
    if (with_family_mix) {
      cmd->add_option("--family", family_spec, "copula family: gauss | t:<nu>");
      cmd->add_option("--mix", mix_spec,
                      "mixing law: point:<rho> | uniform:<lo>,<hi> | "
                      "scar:<beta>,<sigma>,mean=<rho_bar> | empirical:<path>");
    }
    cmd->add_option("--seed", seed, "random seed");
    cmd->add_option("--out", out_path, "output CSV path, '-' for stdout");
    cmd->add_option("--threads", threads, "worker threads, 0 = auto (never changes output)");
  };

  // tail-curve
  auto* curve_cmd = app.add_subcommand("tail-curve", "lambda(u) over a log grid of u");
  add_common(curve_cmd, true);
  curve_cmd->add_option("--grid", grid_spec, "u grid '<u_hi>:<u_lo>:<points_per_decade>'");

  // eta-sweep
  auto* eta_cmd = app.add_subcommand("eta-sweep", "sliding-window eta estimates vs u_lower");
  add_common(eta_cmd, true);
  double kmin = 3.0, kmax = 10.0, kstep = 0.01;
  int eta_per_decade = 50;
  eta_cmd->add_option("--kmin", kmin, "smallest window exponent k");
  eta_cmd->add_option("--kmax", kmax, "largest window exponent k");
  eta_cmd->add_option("--kstep", kstep, "k grid step");
  eta_cmd->add_option("--per-decade", eta_per_decade, "curve points per decade");

  // bias-study
  auto* bias_cmd = app.add_subcommand("bias-study", "static-fit bias table under SCAR truth");
  add_common(bias_cmd, false);
  std::string nu_list = "5,10,20,inf";
  std::string sigma_list = "0.05,0.1,0.15,0.2";
  double scar_beta = 0.97, scar_mean = 0.5, u_eval = 0.01;
  std::size_t bias_n = 1000, bias_reps = 200;
  bias_cmd->add_option("--nu", nu_list, "comma list of true nu values ('inf' for Gaussian)");
  bias_cmd->add_option("--sigma", sigma_list, "comma list of SCAR sigma values");
  bias_cmd->add_option("--beta", scar_beta, "SCAR beta");
  bias_cmd->add_option("--mean", scar_mean, "unconditional mean correlation");
  bias_cmd->add_option("--n", bias_n, "sample size per replicate");
  bias_cmd->add_option("--reps", bias_reps, "Monte Carlo replicates per cell");
  bias_cmd->add_option("--u", u_eval, "penultimate threshold u");

  // fit
  auto* fit_cmd = app.add_subcommand("fit", "static t-copula fit of a two-column CSV");
  add_common(fit_cmd, false);
  double frequency = 250.0;
  std::string input_kind = "auto";
  fit_cmd->add_option("--input", input_path, "input CSV (raw returns or (u,v) pairs)")
      ->required();
  fit_cmd->add_option("--frequency", frequency, "observations per year (250 daily, 12 monthly)");
  fit_cmd->add_option("--input-kind", input_kind, "auto | raw | uv")
      ->check(CLI::IsMember({"auto", "raw", "uv"}));

  // simulate
  auto* sim_cmd = app.add_subcommand("simulate", "draw pairs from the mixture copula");
  add_common(sim_cmd, true);
  std::size_t sim_n = 1000;
  bool path_mode = false;
  sim_cmd->add_option("--n", sim_n, "number of pairs");
  sim_cmd->add_flag("--path", path_mode, "SCAR path mode (consecutive correlations)");

  // lambda
  auto* lambda_cmd = app.add_subcommand("lambda", "one-shot lambda(u) and limiting lambda");
  add_common(lambda_cmd, true);
  double lambda_u = 0.01;
  lambda_cmd->add_option("--u", lambda_u, "penultimate threshold u");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (curve_cmd->parsed()) {
      double alpha = 0.0;
      const auto family = parse_family(family_spec);
      const auto mu = parse_mixing(mix_spec, &alpha);
      const auto g = parse_grid(grid_spec);
      const auto curve = tail_curve(family, mu, log_grid(g.hi, g.lo, g.per_decade), threads);
      Output out(out_path);
      out.stream() << "# tailmix tail-curve family=" << family_spec << " mix=" << mix_spec
                   << " grid=" << grid_spec << " seed=" << seed << "\n";
      curve.write_csv(out.stream());
      out.finish();
      return 0;
    }

    if (eta_cmd->parsed()) {
      double alpha = 0.0;
      const auto family = parse_family(family_spec);
      const auto mu = parse_mixing(mix_spec, &alpha);
      const double u_hi = std::pow(10.0, -kmin);
      const double u_lo = std::pow(10.0, -(kmax + 3.0));
      const auto curve = tail_curve(family, mu, log_grid(u_hi, u_lo, eta_per_decade), threads);
      Output out(out_path);
      out.stream() << "# tailmix eta-sweep family=" << family_spec << " mix=" << mix_spec
                   << " kmin=" << kmin << " kmax=" << kmax << " kstep=" << kstep
                   << " per_decade=" << eta_per_decade << " seed=" << seed << "\n";
      out.stream() << "u_lower,eta,chi_bar,r2\n";
      const int nsteps = static_cast<int>(std::lround((kmax - kmin) / kstep));
      for (int i = 0; i <= nsteps; ++i) {
        const double k = kmin + i * kstep;
        const auto est =
            estimate_eta(curve, std::pow(10.0, -(k + 3.0)), std::pow(10.0, -k));
        out.stream() << csv::format(est.u_lower) << ',' << csv::format(est.eta) << ','
                     << csv::format(est.chi_bar) << ',' << csv::format(est.r_squared) << "\n";
      }
      out.finish();
      return 0;
    }

    if (bias_cmd->parsed()) {
      std::vector<Dof> nus;
      for (const auto& tok : split(nu_list, ',')) nus.push_back(nu_from_string(tok));
      std::vector<double> sigmas;
      for (const auto& tok : split(sigma_list, ',')) sigmas.push_back(std::stod(tok));

      Output out(out_path);
      out.stream() << "# tailmix bias-study nu=" << nu_list << " sigma=" << sigma_list
                   << " beta=" << scar_beta << " mean=" << scar_mean << " n=" << bias_n
                   << " reps=" << bias_reps << " u=" << u_eval << " seed=" << seed << "\n";

      // Table rows: bias of lambda(u) for each nu, then bias of lambda.
      std::vector<std::vector<BiasRow>> rows(nus.size());
      for (std::size_t i = 0; i < nus.size(); ++i) {
        for (std::size_t j = 0; j < sigmas.size(); ++j) {
          const double alpha = solve_alpha_for_mean(scar_mean, scar_beta, sigmas[j]);
          const ScarParams scar{alpha, scar_beta, sigmas[j]};
          const std::uint64_t cell_seed = seed + 1000003ull * (i * sigmas.size() + j);
          rows[i].push_back(
              mc_bias_study(nus[i], scar, bias_n, bias_reps, u_eval, cell_seed, threads));
        }
      }

      out.stream() << "statistic,nu";
      for (double s : sigmas) out.stream() << ",sigma=" << csv::format(s);
      out.stream() << "\n";
      for (std::size_t i = 0; i < nus.size(); ++i) {
        out.stream() << "bias_lambda_u," << nu_to_string(nus[i]);
        for (const auto& row : rows[i]) out.stream() << ',' << csv::format(row.bias_lambda_u);
        out.stream() << "\n";
      }
      for (std::size_t i = 0; i < nus.size(); ++i) {
        out.stream() << "bias_lambda," << nu_to_string(nus[i]);
        for (const auto& row : rows[i]) out.stream() << ',' << csv::format(row.bias_lambda);
        out.stream() << "\n";
      }
      for (std::size_t i = 0; i < nus.size(); ++i)
        for (const auto& row : rows[i])
          out.stream() << "# cell nu=" << nu_to_string(row.nu_true) << " sigma="
                       << csv::format(row.sigma) << " true_lambda_u="
                       << csv::format(row.true_lambda_u) << " true_lambda="
                       << csv::format(row.true_lambda) << " mean_rho_hat="
                       << csv::format(row.mean_rho_hat) << " failures=" << row.failures << "\n";
      out.finish();
      return 0;
    }

    if (fit_cmd->parsed()) {
      std::ifstream in(input_path);
      if (!in) throw std::runtime_error("cannot open input file '" + input_path + "'");
      const auto raw = csv::read_pairs(in);
      if (raw.size() < 20) throw std::runtime_error("fit: need at least 20 input rows");

      bool all_unit = true;
      for (const auto& [a, b] : raw)
        all_unit = all_unit && a > 0.0 && a < 1.0 && b > 0.0 && b < 1.0;
      const bool use_raw = input_kind == "raw" || (input_kind == "auto" && !all_unit);

      CopulaSample sample;
      if (use_raw) {
        std::vector<double> x(raw.size()), y(raw.size());
        for (std::size_t i = 0; i < raw.size(); ++i) {
          x[i] = raw[i].first;
          y[i] = raw[i].second;
        }
        sample = pseudo_observations(x, y);
      } else {
        sample.pairs = raw;
        sample.provenance = "precomputed (u,v)";
      }

      const FitResult fit = fit_static_t(sample);
      const TailReport rep = implied_tail_report(fit, frequency);
      if (std::fabs(fit.rho_hat) >= 0.9999)
        std::cerr << "warning: rho_hat clamped at +-0.9999 (degenerate dependence)\n";

      Output out(out_path);
      out.stream() << "# tailmix fit input=" << input_path << " kind="
                   << (use_raw ? "raw" : "uv") << " frequency=" << frequency << "\n";
      out.stream()
          << "nu_hat,rho_hat,log_lik,at_bound,lambda_year,lambda_dec,lambda_cent,lambda,"
             "u_year,u_dec,u_cent\n";
      out.stream() << nu_to_string(fit.nu_hat) << ',' << csv::format(fit.rho_hat) << ','
                   << csv::format(fit.log_lik) << ',' << (fit.at_bound ? 1 : 0) << ','
                   << csv::format(rep.lambda_year) << ',' << csv::format(rep.lambda_dec) << ','
                   << csv::format(rep.lambda_cent) << ',' << csv::format(rep.lambda_limit) << ','
                   << csv::format(rep.levels[0]) << ',' << csv::format(rep.levels[1]) << ','
                   << csv::format(rep.levels[2]) << "\n";
      out.finish();
      return 0;
    }

    if (sim_cmd->parsed()) {
      double alpha = 0.0;
      const auto family = parse_family(family_spec);
      const auto mu = parse_mixing(mix_spec, &alpha);
      const auto mode = path_mode ? ScarSampling::Path : ScarSampling::Stationary;
      const auto sample = sample_mixture(sim_n, family, mu, seed, mode, threads);
      Output out(out_path);
      out.stream() << "# tailmix simulate family=" << family_spec << " mix=" << mix_spec
                   << " n=" << sim_n << " seed=" << seed << " path=" << (path_mode ? 1 : 0)
                   << "\n";
      sample.write_csv(out.stream());
      out.finish();
      return 0;
    }

    if (lambda_cmd->parsed()) {
      double alpha = 0.0;
      const auto family = parse_family(family_spec);
      const auto mu = parse_mixing(mix_spec, &alpha);
      const double lu = mixture_penultimate_lambda(lambda_u, family, mu);
      const double ll = mixture_limiting_lambda(family, mu);
      Output out(out_path);
      out.stream() << "# tailmix lambda family=" << family_spec << " mix=" << mix_spec
                   << " u=" << csv::format(lambda_u) << " seed=" << seed << "\n";
      out.stream() << "u,lambda_u,lambda_limit\n";
      out.stream() << csv::format(lambda_u) << ',' << csv::format(lu) << ',' << csv::format(ll)
                   << "\n";
      out.finish();
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "tailmix: " << e.what() << "\n";
    return 1;
  }
  return 1;
}

}  // namespace tailmix::cli
