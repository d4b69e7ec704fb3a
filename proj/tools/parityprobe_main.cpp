#include "parityprobe/cli/pipeline.hpp"
#include "parityprobe/tomo/estimators.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <string>

namespace {

constexpr int kExitSchema = 2;
constexpr int kExitTruncation = 3;
constexpr int kExitConvergence = 4;

parityprobe::ExperimentConfig load_config(const std::string& path) {
  return parityprobe::ExperimentConfig::from_json(
      parityprobe::read_json_file(path));
}

int run_command(const std::string& config_path, const std::string& out_dir,
                const std::string& seed_str, const std::string& herald) {
  auto config = load_config(config_path);
  if (!out_dir.empty()) config.output_dir = out_dir;
  if (!seed_str.empty()) config.seed = std::stoull(seed_str);
  if (herald == "off")
    config.herald = parityprobe::HeraldSetting::Off;
  else if (herald == "on")
    config.herald = parityprobe::HeraldSetting::On;
  else if (herald == "both")
    config.herald = parityprobe::HeraldSetting::Both;
  else if (!herald.empty())
    throw parityprobe::ConfigError("herald must be one of off/on/both");

  const auto runs = parityprobe::run_experiment(config);
  std::printf("wrote %zu run(s) under %s\n", runs.size(),
              config.output_dir.c_str());
  for (const auto& r : runs)
    std::printf("  %s %s: instrument F_J %.4f, theta_s %.2f deg\n",
                r.op.c_str(), r.herald ? "heralded" : "unheralded",
                r.report.qi_f_j, r.report.spec_report.theta_s_deg);
  return 0;
}

int report_command(const std::string& dir) {
  const auto written = parityprobe::write_report_tables(dir);
  for (const auto& p : written) std::printf("wrote %s\n", p.string().c_str());
  return 0;
}

int validate_command(const std::string& config_path) {
  const auto config = load_config(config_path);
  const auto diags = parityprobe::validate_experiment(config);
  bool ok = true;
  for (const auto& d : diags) {
    std::printf("%s:\n", d.op.c_str());
    std::printf("  mapping window T        %.1f ns\n", d.window_ns);
    for (int k = 0; k < 3; ++k)
      if (d.partial_echo_ns[static_cast<std::size_t>(k)] > 0.0)
        std::printf("  partial echo, qubit %d  %.1f ns\n", k + 1,
                    d.partial_echo_ns[static_cast<std::size_t>(k)]);
    std::printf("  pointer overlap         %.3e%s\n", d.overlap,
                d.overlap_warning ? "  WARNING: overlap > 1e-2" : "");
    std::printf("  peak mean photon        %.2f\n", d.max_mean_photon);
    std::printf("  Fock tail mass          %.3e%s\n", d.tail_mass,
                d.tail_failure ? "  FAIL: tail mass > 1e-8" : "");
    std::printf("  estimated runtime       %.1f s\n", d.estimated_seconds);
    if (d.tail_failure) ok = false;
  }
  std::printf("%s\n", ok ? "all checks passed" : "checks FAILED");
  return ok ? 0 : kExitSchema;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Subset-parity measurement simulator and characterization"};
  app.require_subcommand(1);

  std::string config_path, out_dir, seed_str, herald, results_dir;

  auto* run = app.add_subcommand("run", "simulate, tomograph, and score");
  run->add_option("--config", config_path, "experiment config JSON")
      ->required();
  run->add_option("--out", out_dir, "output directory override");
  run->add_option("--seed", seed_str, "seed override");
  run->add_option("--herald", herald, "herald override: off|on|both");

  auto* report = app.add_subcommand("report", "emit CSV tables from a run");
  report->add_option("dir", results_dir, "results directory")->required();

  auto* validate = app.add_subcommand("validate", "static schedule checks");
  validate->add_option("--config", config_path, "experiment config JSON")
      ->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand(run))
      return run_command(config_path, out_dir, seed_str, herald);
    if (app.got_subcommand(report)) return report_command(results_dir);
    return validate_command(config_path);
  } catch (const parityprobe::TruncationError& e) {
    std::cerr << "truncation failure: " << e.what() << "\n";
    return kExitTruncation;
  } catch (const parityprobe::ConvergenceError& e) {
    std::cerr << "estimator did not converge: " << e.what() << "\n";
    return kExitConvergence;
  } catch (const parityprobe::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitSchema;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitSchema;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitSchema;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
