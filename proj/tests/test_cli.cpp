#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "minorlab/experiments.hpp"

namespace fs = std::filesystem;
using namespace minorlab;

namespace {

ExperimentConfig tiny_theorem1() {
  ExperimentConfig cfg;
  cfg.experiment = "theorem1";
  cfg.m = 3;
  cfg.n_samples = 200;
  cfg.n_steps = 64;
  cfg.master_seed = 0xc11u;
  return cfg;
}

// Everything except wall time must be reproducible.
std::string masked_row(const ResultRecord& r) {
  ResultRecord copy = r;
  copy.ms = 0;
  return csv_row(copy);
}

fs::path fresh_dir(const std::string& tag) {
  const fs::path dir = fs::temp_directory_path() / ("minorlab_cli_" + tag);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// Strip the trailing ms field from every CSV line.
std::string mask_ms_column(const std::string& csv) {
  std::stringstream in(csv);
  std::string line, out;
  bool first = true;
  while (std::getline(in, line)) {
    if (!first) {
      const std::size_t cut = line.rfind(',');
      if (cut != std::string::npos) line.resize(cut);
    }
    first = false;
    out += line;
    out += '\n';
  }
  return out;
}

int run_binary(const std::string& args) {
  const std::string cmd = std::string(VERIFY_BIN) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

void write_config(const fs::path& path, const std::string& body) {
  std::ofstream out(path);
  out << body;
}

}  // namespace

TEST(Experiments, RerunsAreBitwiseIdentical) {
  const ExperimentConfig cfg = tiny_theorem1();
  const std::vector<ResultRecord> a = run_experiment(cfg);
  const std::vector<ResultRecord> b = run_experiment(cfg);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(masked_row(a[i]), masked_row(b[i]));
}

TEST(Experiments, WorkerCountDoesNotAffectResults) {
  ExperimentConfig cfg = tiny_theorem1();
  const std::vector<ResultRecord> serial = run_experiment(cfg);
  cfg.workers = 3;
  const std::vector<ResultRecord> pooled = run_experiment(cfg);
  ASSERT_EQ(serial.size(), pooled.size());
  for (std::size_t i = 0; i < serial.size(); ++i)
    EXPECT_EQ(masked_row(serial[i]), masked_row(pooled[i]));

  ExperimentConfig mk;
  mk.experiment = "markov";
  mk.k = 4;
  mk.markov_p = {0.4, 0.2, 0.2, 0.2};
  mk.n_samples = 300;
  mk.n_steps = 32;
  const std::vector<ResultRecord> mk_serial = run_experiment(mk);
  mk.workers = 4;
  const std::vector<ResultRecord> mk_pooled = run_experiment(mk);
  ASSERT_EQ(mk_serial.size(), mk_pooled.size());
  for (std::size_t i = 0; i < mk_serial.size(); ++i)
    EXPECT_EQ(masked_row(mk_serial[i]), masked_row(mk_pooled[i]));
}

TEST(Experiments, CsvHeaderAndRowShape) {
  EXPECT_STREQ(kCsvHeader,
               "experiment,statistic,l,k,n_samples,n_steps,distance,p_value,threshold,pass,seed,ms");
  ResultRecord r;
  r.experiment = "x";
  r.statistic = "w1";
  r.l = 1;
  r.k = 2;
  r.n_samples = 10;
  r.n_steps = 4;
  r.distance = 0.5;
  r.threshold = 1.0;
  r.pass = true;
  r.seed = 7;
  r.ms = 3;
  EXPECT_EQ(csv_row(r), "x,w1,1,2,10,4,0.5,,1,1,7,3");
  r.p_value = 0.25;
  r.pass = false;
  EXPECT_EQ(csv_row(r), "x,w1,1,2,10,4,0.5,0.25,1,0,7,3");
}

TEST(Experiments, ExitCodePrecedence) {
  ResultRecord pass_row;
  pass_row.pass = true;
  ResultRecord soft_fail;
  soft_fail.pass = false;
  ResultRecord hard_fail;
  hard_fail.pass = false;
  hard_fail.exact = true;
  EXPECT_EQ(exit_code_for({}), 0);
  EXPECT_EQ(exit_code_for({pass_row}), 0);
  EXPECT_EQ(exit_code_for({pass_row, soft_fail}), 2);
  EXPECT_EQ(exit_code_for({soft_fail, hard_fail}), 3);
  EXPECT_EQ(exit_code_for({hard_fail, soft_fail}), 3);
}

TEST(Experiments, ConfigValidationRejectsBadParameters) {
  ExperimentConfig cfg = tiny_theorem1();
  cfg.m = 9;
  EXPECT_THROW(run_experiment(cfg), ConfigError);
  cfg = tiny_theorem1();
  cfg.n_samples = 1;
  EXPECT_THROW(run_experiment(cfg), ConfigError);
  cfg = tiny_theorem1();
  cfg.workers = 0;
  EXPECT_THROW(run_experiment(cfg), ConfigError);
  cfg = tiny_theorem1();
  cfg.experiment = "unknown";
  EXPECT_THROW(run_experiment(cfg), ConfigError);

  ExperimentConfig c1;
  c1.experiment = "corollary1";
  c1.k = 3;
  c1.p = {0.5, 0.3, 0.3};  // does not sum to 1
  c1.n_samples = 10;
  EXPECT_THROW(run_experiment(c1), ConfigError);
  c1.p = {0.2, 0.5, 0.3};  // not nonincreasing
  EXPECT_THROW(run_experiment(c1), ConfigError);

  ExperimentConfig mk;
  mk.experiment = "markov";
  mk.k = 3;
  mk.markov_p = {0.6, 0.3, 0.1};  // asymmetric
  mk.n_samples = 10;
  EXPECT_THROW(run_experiment(mk), ConfigError);
  mk.markov_p = {0.5, 0.25, 0.25};
  mk.sigma_override = {1.0, 0.0};  // wrong size
  EXPECT_THROW(run_experiment(mk), ConfigError);

  ExperimentConfig pl;
  pl.experiment = "prelimit";
  pl.m = 2;
  pl.n_samples = 5000;
  pl.energy_subsample = 5000;  // pooled sample would exceed the cap
  EXPECT_THROW(run_experiment(pl), ConfigError);
}

TEST(Experiments, LevelCapRestrictsPairs) {
  ExperimentConfig cfg = tiny_theorem1();
  cfg.n_samples = 50;
  cfg.l_max = 1;
  const std::vector<ResultRecord> rows = run_experiment(cfg);
  ASSERT_EQ(rows.size(), 6u);  // (1,1) (1,2) (1,3), two rows each
  for (const ResultRecord& r : rows) EXPECT_EQ(r.l, 1);
}

TEST(VerifyBinary, ExitCodesAndArtifacts) {
  const fs::path dir = fresh_dir("exit");
  const fs::path good = dir / "good.json";
  write_config(good, "{\"experiment\":\"oracles\",\"seed\":11}");

  EXPECT_EQ(run_binary("oracles --config " + good.string() + " --out " + (dir / "a").string()),
            0);
  EXPECT_TRUE(fs::exists(dir / "a" / "oracles_results.csv"));
  EXPECT_TRUE(fs::exists(dir / "a" / "oracles_summary.json"));
  EXPECT_TRUE(fs::exists(dir / "a" / "oracles_manifest.json"));

  // Statistical failure: an unreachable W1 bound on a tiny run.
  const fs::path tight = dir / "tight.json";
  write_config(tight,
               "{\"experiment\":\"theorem1\",\"m\":2,\"n_samples\":100,\"n_steps\":16,"
               "\"thresholds\":{\"w1\":1e-9}}");
  EXPECT_EQ(run_binary("theorem1 --config " + tight.string() + " --out " +
                       (dir / "b").string()),
            2);

  // Config errors.
  EXPECT_EQ(run_binary("theorem1 --config " + (dir / "missing.json").string()), 4);
  const fs::path broken = dir / "broken.json";
  write_config(broken, "{not json");
  EXPECT_EQ(run_binary("oracles --config " + broken.string()), 4);
  const fs::path mismatched = dir / "mismatched.json";
  write_config(mismatched, "{\"experiment\":\"oracles\"}");
  EXPECT_EQ(run_binary("theorem1 --config " + mismatched.string()), 4);
  const fs::path overcap = dir / "overcap.json";
  write_config(overcap, "{\"experiment\":\"theorem1\",\"m\":7}");
  EXPECT_EQ(run_binary("theorem1 --config " + overcap.string()), 4);
  EXPECT_EQ(run_binary("oracles"), 4);                       // missing --config
  EXPECT_EQ(run_binary("--config " + good.string()), 4);     // missing subcommand
  EXPECT_EQ(run_binary("bogus --config " + good.string()), 4);
}

TEST(VerifyBinary, RerunsProduceByteIdenticalCsvUpToWallTime) {
  const fs::path dir = fresh_dir("determinism");
  const fs::path cfg = dir / "cfg.json";
  write_config(cfg,
               "{\"experiment\":\"theorem1\",\"m\":2,\"n_samples\":150,\"n_steps\":32,"
               "\"seed\":99,\"thresholds\":{\"w1\":10,\"ks_p\":0}}");
  ASSERT_EQ(run_binary("theorem1 --config " + cfg.string() + " --out " + (dir / "r1").string()),
            0);
  ASSERT_EQ(run_binary("theorem1 --config " + cfg.string() + " --out " + (dir / "r2").string()),
            0);
  const std::string a = read_file(dir / "r1" / "theorem1_results.csv");
  const std::string b = read_file(dir / "r2" / "theorem1_results.csv");
  ASSERT_FALSE(a.empty());
  EXPECT_EQ(mask_ms_column(a), mask_ms_column(b));
  EXPECT_NE(a.find("experiment,statistic,l,k,n_samples,n_steps,distance,p_value,threshold,"
                   "pass,seed,ms\n"),
            std::string::npos);
}

TEST(VerifyBinary, FlagOverridesLandInManifest) {
  const fs::path dir = fresh_dir("overrides");
  const fs::path cfg = dir / "cfg.json";
  write_config(cfg,
               "{\"experiment\":\"theorem1\",\"m\":2,\"n_samples\":500,\"n_steps\":64,"
               "\"seed\":1,\"thresholds\":{\"w1\":10,\"ks_p\":0}}");
  ASSERT_EQ(run_binary("theorem1 --config " + cfg.string() + " --seed 77 --samples 120 " +
                       "--steps 16 --workers 2 --out " + (dir / "r").string()),
            0);
  const std::string manifest = read_file(dir / "r" / "theorem1_manifest.json");
  EXPECT_NE(manifest.find("\"seed\": 77"), std::string::npos);
  EXPECT_NE(manifest.find("\"n_samples\": 120"), std::string::npos);
  EXPECT_NE(manifest.find("\"n_steps\": 16"), std::string::npos);
  EXPECT_NE(manifest.find("\"workers\": 2"), std::string::npos);
  const std::string csv = read_file(dir / "r" / "theorem1_results.csv");
  EXPECT_NE(csv.find(",120,16,"), std::string::npos);
}
