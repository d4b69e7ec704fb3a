#include <doctest.h>

#include "parityprobe/cli/pipeline.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace parityprobe;
namespace fs = std::filesystem;

namespace {

Json small_config(const std::string& out) {
  Json j;
  j["device"] = {{"preset", "ideal"}, {"fock_cutoff", 36}};
  j["noise"] = false;
  j["operators"] = Json::array({Json{{"label", "ZZZ"}, {"n0", 2.0}}});
  j["shots_per_rotation"] = 0;
  j["herald"] = "off";
  j["seed"] = 12;
  j["output_dir"] = out;
  j["scan_points"] = 5;
  j["s_restarts"] = 8;
  return j;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("config schema") {
  const Json good = small_config("unused");
  const ExperimentConfig c = ExperimentConfig::from_json(good);
  CHECK(c.operators.size() == 1);
  CHECK(c.operators[0].label() == "ZZZ");
  CHECK(c.operators[0].theta == doctest::Approx(kPi));  // 3-qubit default
  CHECK_FALSE(c.noise);
  CHECK(c.seed == 12);

  // round trip through JSON preserves the config
  const ExperimentConfig back = ExperimentConfig::from_json(c.to_json());
  CHECK(back.to_json() == c.to_json());

  Json bad = good;
  bad.erase("operators");
  CHECK_THROWS_AS(ExperimentConfig::from_json(bad), ConfigError);
  bad = good;
  bad["operators"] = Json::array();
  CHECK_THROWS_AS(ExperimentConfig::from_json(bad), ConfigError);
  bad = good;
  bad.erase("seed");
  CHECK_THROWS_AS(ExperimentConfig::from_json(bad), ConfigError);
  bad = good;
  bad["herald"] = "maybe";
  CHECK_THROWS_AS(ExperimentConfig::from_json(bad), ConfigError);
  bad = good;
  bad["shots_per_rotation"] = -5;
  CHECK_THROWS_AS(ExperimentConfig::from_json(bad), ConfigError);
  bad = good;
  bad["device"]["preset"] = "imaginary";
  CHECK_THROWS_AS(ExperimentConfig::from_json(bad), ConfigError);

  // two-qubit operators default to the reduced angle
  Json two = good;
  two["operators"] = Json::array({"ZIZ"});
  CHECK(ExperimentConfig::from_json(two).operators[0].theta ==
        doctest::Approx(2.0 * kPi / 5.0));
}

TEST_CASE("validate_experiment reports schedule facts") {
  ExperimentConfig c = ExperimentConfig::from_json(small_config("unused"));
  c.device = DeviceParams::reference();
  c.operators[0].n0 = 5.0;
  const auto diags = validate_experiment(c);
  REQUIRE(diags.size() == 1);
  CHECK(diags[0].window_ns == doctest::Approx(815.66).epsilon(1e-3));
  CHECK(diags[0].overlap < 1e-8);  // theta = pi pointers are anti-podal
  CHECK_FALSE(diags[0].tail_failure);

  // shallow displacement leaves overlapping pointers
  c.operators[0] = SubsetParitySpec::from_label("ZIZ", 2.0 * kPi / 5.0, 0.5);
  const auto weak = validate_experiment(c);
  CHECK(weak[0].overlap > 0.3);
  CHECK(weak[0].overlap_warning);

  // undersized Fock space is flagged instead of thrown
  c = ExperimentConfig::from_json(small_config("unused"));
  c.device.fock_cutoff = 12;
  CHECK(validate_experiment(c)[0].tail_failure);
}

TEST_CASE("run, report, and determinism") {
  const fs::path base =
      fs::temp_directory_path() / "pp_cli_test";
  fs::remove_all(base);
  const fs::path out1 = base / "run1";
  const fs::path out2 = base / "run2";

  ExperimentConfig config =
      ExperimentConfig::from_json(small_config(out1.string()));
  const auto runs = run_experiment(config);
  REQUIRE(runs.size() == 1);
  CHECK(runs[0].report.qi_f_j > 0.999);
  CHECK(runs[0].report.det_f_s <= runs[0].report.det_f_j + 1e-9);
  CHECK(runs[0].report.spec_report.theta_s_deg < 0.1);
  CHECK(runs[0].report.assignment.fidelity > 0.99);
  CHECK(runs[0].report.assignment.contrast > 0.99);

  const fs::path dir = out1 / "ZZZ_unheralded";
  for (const char* f :
       {"schedule.json", "instrument_true.json", "povm_true.json",
        "detector_dataset.json", "povm_reconstructed.json",
        "instrument_dataset.json", "instrument_reconstructed.json",
        "scan.csv", "report.json"})
    CHECK(fs::exists(dir / f));
  CHECK(fs::exists(out1 / "manifest.json"));

  // metric report round trip
  const MetricReport rep =
      MetricReport::from_json(read_json_file(dir / "report.json"));
  CHECK(rep.op == "ZZZ");
  CHECK(rep.qi_f_j == doctest::Approx(runs[0].report.qi_f_j));

  // report tables
  const auto tables = write_report_tables(out1);
  CHECK(tables.size() == 5);
  const std::string povm_table = slurp(out1 / "povm.csv");
  CHECK(povm_table.find("operator,herald,f_j,d_j,f_s,d_s") == 0);
  CHECK(povm_table.find("ZZZ,unheralded") != std::string::npos);

  // identical config and seed give byte-identical artifacts
  ExperimentConfig again = config;
  again.output_dir = out2.string();
  run_experiment(again);
  for (const char* f : {"instrument_true.json", "report.json", "scan.csv"})
    CHECK(slurp(dir / f) == slurp(out2 / "ZZZ_unheralded" / f));

  // herald=both produces paired directories
  ExperimentConfig both = config;
  both.output_dir = (base / "run3").string();
  both.herald = HeraldSetting::Both;
  const auto paired = run_experiment(both);
  CHECK(paired.size() == 2);
  CHECK(fs::exists(base / "run3" / "ZZZ_unheralded" / "report.json"));
  CHECK(fs::exists(base / "run3" / "ZZZ_heralded" / "report.json"));

  CHECK_THROWS(write_report_tables(base / "nonexistent"));
  fs::remove_all(base);
}
