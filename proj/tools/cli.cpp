#include "cli.hpp"

#include <iomanip>
#include <set>
#include <string>

#include "CLI11.hpp"
#include "kssim/config.hpp"
#include "kssim/errors.hpp"
#include "kssim/experiment.hpp"
#include "kssim/io.hpp"
#include "kssim/model.hpp"
#include "kssim/version.hpp"

namespace kssim::cli {

namespace {

using Kinds = std::set<ExperimentKind>;

int execute(const std::string& path, const Kinds& allowed, const std::string& out_override, unsigned jobs,
            std::ostream& out, std::ostream& err) {
  ExperimentConfig cfg;
  try {
    cfg = parse_config(io::read_file(path));
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const Error& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  }
  if (!allowed.empty() && !allowed.count(cfg.kind)) {
    err << "config error: experiment.kind '" << to_string(cfg.kind) << "' is not handled by this subcommand\n";
    return kExitConfig;
  }
  if (!out_override.empty()) cfg.output_dir = out_override;

  ExperimentResult result;
  try {
    result = run_experiment(cfg, jobs, /*persist=*/true);
  } catch (const Error& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  }

  out << "experiment " << to_string(cfg.kind) << " -> " << cfg.output_dir << '\n';
  for (const auto& r : result.runs) {
    out << "  [" << r.index << "] " << r.label << "  ";
    if (r.failed) {
      out << "Failed: " << r.error << '\n';
      continue;
    }
    out << to_string(r.status) << "  " << to_string(r.regime.tag) << "  gap_sup=" << io::format_double(r.gap_sup)
        << "  mass_drift=" << io::format_double(r.mass_drift) << "  " << to_string(r.boundedness) << "  ("
        << std::fixed << std::setprecision(2) << r.wall_seconds << " s)" << std::defaultfloat << '\n';
  }
  if (result.fit) {
    out << "  fit: slope=" << io::format_double(result.fit->slope)
        << "  predicted exponent=" << io::format_double(result.fit->predicted_exponent) << '\n';
  }
  for (const auto& s : result.gradv_spreads) {
    out << "  gradv q=" << io::format_double(s.q) << ": "
        << (s.refused ? std::string("refused (outside admissible range)") : "spread=" + io::format_double(s.spread))
        << '\n';
  }
  if (result.continuation) {
    out << "  epsilon differences:";
    for (double d : result.continuation->differences) out << ' ' << io::format_double(d);
    out << (result.continuation->non_increasing ? "  (non-increasing)" : "  (increasing)") << '\n';
  }
  for (const auto& [ru, rv] : result.refinement_ratios) {
    out << "  refinement ratio u=" << io::format_double(ru) << " v=" << io::format_double(rv) << '\n';
  }
  if (result.any_failed()) {
    err << "one or more runs failed; see summary.json\n";
    return kExitNumerical;
  }
  return kExitOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Flux-limited Keller-Segel simulator and experiment harness", "kssim"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  unsigned jobs = 0;
  auto add_experiment = [&](const char* name, const char* help) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("config", config_path, "experiment config file")->required();
    sub->add_option("--out", out_dir, "override output.dir");
    sub->add_option("-j,--jobs", jobs, "worker threads (0 = all cores)");
    return sub;
  };
  CLI::App* run_cmd = add_experiment("run", "run the experiment described by a config");
  CLI::App* sweep_cmd = add_experiment("sweep", "run a sweep experiment (mass, epsilon, refinement, variation)");
  CLI::App* atlas_cmd = add_experiment("atlas", "run a regime-atlas experiment");

  double p = 0.0;
  double theta = 0.0;
  int dim = 0;
  CLI::App* regime_cmd = app.add_subcommand("check-regime", "classify (p, theta) in dimension n");
  regime_cmd->add_option("--p", p, "flux-limitation exponent")->required();
  regime_cmd->add_option("--theta", theta, "production exponent")->required();
  regime_cmd->add_option("--dim", dim, "space dimension")->required();

  CLI::App* version_cmd = app.add_subcommand("version", "print the version");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kExitOk : kExitConfig;
  }

  if (version_cmd->parsed()) {
    out << "kssim " << kVersion << '\n';
    return kExitOk;
  }
  if (regime_cmd->parsed()) {
    try {
      const Regime r = classify_regime(p, theta, dim);
      const QSup q = admissible_q_sup(theta, dim);
      out << "regime: " << to_string(r.tag) << '\n';
      out << "threshold: " << io::format_double(r.threshold) << '\n';
      out << "q_sup: " << io::format_double(q.value) << (q.inclusive ? " (inclusive)" : " (exclusive)") << '\n';
      return kExitOk;
    } catch (const InvalidArgument& e) {
      err << "error: " << e.what() << '\n';
      return kExitConfig;
    }
  }
  if (run_cmd->parsed()) return execute(config_path, {}, out_dir, jobs, out, err);
  if (sweep_cmd->parsed()) {
    return execute(config_path,
                   {ExperimentKind::MassSweep, ExperimentKind::EpsilonStudy, ExperimentKind::RefinementStudy,
                    ExperimentKind::VariationStability},
                   out_dir, jobs, out, err);
  }
  if (atlas_cmd->parsed()) return execute(config_path, {ExperimentKind::RegimeAtlas}, out_dir, jobs, out, err);
  return kExitConfig;
}

}  // namespace kssim::cli
