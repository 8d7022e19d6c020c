/**
 * Experiment driver.  Loads a JSON config, applies flag overrides, runs the
 * requested suite, and writes results.csv / summary.json / manifest.json
 * into the output directory.  Exit codes: 0 all pass, 2 statistical
 * failure, 3 exact-identity failure, 4 invalid config, 1 internal error.
 */

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "minorlab/experiments.hpp"

#ifndef MINORLAB_VERSION
#define MINORLAB_VERSION "untagged"
#endif

namespace {

using minorlab::ConfigError;
using minorlab::ExperimentConfig;
using minorlab::ResultRecord;
using nlohmann::json;

int to_bounded_int(const json& value, const char* name) {
  const long long v = value.get<long long>();
  if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max())
    throw ConfigError(std::string("config: ") + name + " out of range");
  return static_cast<int>(v);
}

ExperimentConfig config_from_json(const json& j, const std::string& experiment) {
  if (!j.is_object()) throw ConfigError("config: top level must be a JSON object");
  ExperimentConfig cfg;
  cfg.experiment = experiment;
  if (j.contains("experiment") && j.at("experiment").get<std::string>() != experiment)
    throw ConfigError("config: experiment field does not match the subcommand");
  if (j.contains("m")) cfg.m = to_bounded_int(j.at("m"), "m");
  if (j.contains("k")) cfg.k = to_bounded_int(j.at("k"), "k");
  if (j.contains("q")) cfg.q = j.at("q").get<double>();
  if (j.contains("N")) cfg.n_size = j.at("N").get<long long>();
  if (j.contains("n_samples")) cfg.n_samples = to_bounded_int(j.at("n_samples"), "n_samples");
  if (j.contains("n_steps")) cfg.n_steps = to_bounded_int(j.at("n_steps"), "n_steps");
  if (j.contains("variant_samples"))
    cfg.variant_samples = to_bounded_int(j.at("variant_samples"), "variant_samples");
  if (j.contains("p")) cfg.p = j.at("p").get<std::vector<double>>();
  if (j.contains("markov_p")) cfg.markov_p = j.at("markov_p").get<std::vector<double>>();
  if (j.contains("l_max")) cfg.l_max = to_bounded_int(j.at("l_max"), "l_max");
  if (j.contains("sigma"))
    cfg.sigma_override = j.at("sigma").get<std::vector<double>>();
  if (j.contains("seed")) cfg.master_seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("workers")) cfg.workers = to_bounded_int(j.at("workers"), "workers");
  if (j.contains("out_dir")) cfg.out_dir = j.at("out_dir").get<std::string>();
  if (j.contains("m_cap")) cfg.m_cap = to_bounded_int(j.at("m_cap"), "m_cap");
  if (j.contains("energy_subsample"))
    cfg.energy_subsample = to_bounded_int(j.at("energy_subsample"), "energy_subsample");
  if (j.contains("n_permutations"))
    cfg.n_permutations = to_bounded_int(j.at("n_permutations"), "n_permutations");
  if (j.contains("thresholds")) {
    const json& t = j.at("thresholds");
    if (!t.is_object()) throw ConfigError("config: thresholds must be an object");
    if (t.contains("w1")) cfg.threshold_w1 = t.at("w1").get<double>();
    if (t.contains("ks_p")) cfg.threshold_ks_p = t.at("ks_p").get<double>();
    if (t.contains("energy_p")) cfg.threshold_energy_p = t.at("energy_p").get<double>();
    if (t.contains("residual")) cfg.threshold_residual = t.at("residual").get<double>();
    if (t.contains("cov")) cfg.threshold_cov = t.at("cov").get<double>();
    if (t.contains("scaled_w1")) cfg.threshold_scaled_w1 = t.at("scaled_w1").get<double>();
  }
  if (j.contains("calibration")) cfg.calibration = j.at("calibration").get<std::string>();
  return cfg;
}

json json_from_config(const ExperimentConfig& cfg) {
  json j;
  j["experiment"] = cfg.experiment;
  j["m"] = cfg.m;
  j["k"] = cfg.k;
  j["q"] = cfg.q;
  j["N"] = cfg.n_size;
  j["n_samples"] = cfg.n_samples;
  j["n_steps"] = cfg.n_steps;
  j["variant_samples"] = cfg.variant_samples;
  if (!cfg.p.empty()) j["p"] = cfg.p;
  if (!cfg.markov_p.empty()) j["markov_p"] = cfg.markov_p;
  if (cfg.l_max > 0) j["l_max"] = cfg.l_max;
  if (!cfg.sigma_override.empty()) j["sigma"] = cfg.sigma_override;
  j["seed"] = cfg.master_seed;
  j["workers"] = cfg.workers;
  j["out_dir"] = cfg.out_dir;
  j["m_cap"] = cfg.m_cap;
  j["energy_subsample"] = cfg.energy_subsample;
  j["n_permutations"] = cfg.n_permutations;
  j["thresholds"] = {{"w1", cfg.threshold_w1},
                     {"ks_p", cfg.threshold_ks_p},
                     {"energy_p", cfg.threshold_energy_p},
                     {"residual", cfg.threshold_residual},
                     {"cov", cfg.threshold_cov},
                     {"scaled_w1", cfg.threshold_scaled_w1}};
  if (!cfg.calibration.empty()) j["calibration"] = cfg.calibration;
  return j;
}

json json_from_record(const ResultRecord& r) {
  json j;
  j["statistic"] = r.statistic;
  j["l"] = r.l;
  j["k"] = r.k;
  j["n_samples"] = r.n_samples;
  j["n_steps"] = r.n_steps;
  j["distance"] = r.distance;
  if (std::isnan(r.p_value))
    j["p_value"] = nullptr;
  else
    j["p_value"] = r.p_value;
  j["threshold"] = r.threshold;
  j["pass"] = r.pass;
  return j;
}

void write_outputs(const ExperimentConfig& cfg, const std::vector<ResultRecord>& records) {
  namespace fs = std::filesystem;
  fs::create_directories(cfg.out_dir);
  const fs::path base(cfg.out_dir);

  std::ofstream csv(base / (cfg.experiment + "_results.csv"), std::ios::trunc);
  if (!csv) throw std::runtime_error("cannot write results CSV in " + cfg.out_dir);
  csv << minorlab::kCsvHeader << '\n';
  for (const ResultRecord& r : records) csv << minorlab::csv_row(r) << '\n';

  json suite;
  suite["version"] = MINORLAB_VERSION;
  suite["seed"] = cfg.master_seed;
  suite["exit_code"] = minorlab::exit_code_for(records);
  suite["pass"] = minorlab::exit_code_for(records) == 0;
  suite["records"] = json::array();
  for (const ResultRecord& r : records) suite["records"].push_back(json_from_record(r));
  json summary;
  summary[cfg.experiment] = suite;
  std::ofstream summary_out(base / (cfg.experiment + "_summary.json"), std::ios::trunc);
  summary_out << summary.dump(2) << '\n';

  json manifest;
  manifest["experiment"] = cfg.experiment;
  manifest["version"] = MINORLAB_VERSION;
  manifest["seed"] = cfg.master_seed;
  manifest["config"] = json_from_config(cfg);
  std::ofstream manifest_out(base / (cfg.experiment + "_manifest.json"), std::ios::trunc);
  manifest_out << manifest.dump(2) << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Distributional identity verification suites"};
  app.fallthrough(true);
  app.require_subcommand(1);

  std::string config_path;
  std::uint64_t seed = 0;
  int samples = 0, steps = 0, workers = 0;
  std::string out_dir;
  CLI::Option* opt_config =
      app.add_option("--config", config_path, "JSON config file")->required();
  CLI::Option* opt_seed = app.add_option("--seed", seed, "master seed override");
  CLI::Option* opt_samples = app.add_option("--samples", samples, "n_samples override");
  CLI::Option* opt_steps = app.add_option("--steps", steps, "n_steps override");
  CLI::Option* opt_workers = app.add_option("--workers", workers, "worker count override");
  CLI::Option* opt_out = app.add_option("--out", out_dir, "output directory override");

  app.add_subcommand("theorem1", "minor partial sums vs Brownian path collections");
  app.add_subcommand("prelimit", "geometric RSK patterns vs GUE minor spectra");
  app.add_subcommand("corollary1", "longest nondecreasing subsequence vs GUE limit samplers");
  app.add_subcommand("corollary2", "word shape vector vs traceless block spectra");
  app.add_subcommand("markov", "cyclic chain functional and covariance checks");
  app.add_subcommand("oracles", "exact combinatorial oracle suites");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 4;
  }

  try {
    std::ifstream in(config_path);
    if (!in) throw ConfigError("config: cannot open " + config_path);
    json parsed;
    try {
      parsed = json::parse(in);
    } catch (const json::exception& e) {
      throw ConfigError(std::string("config: ") + e.what());
    }
    ExperimentConfig cfg =
        config_from_json(parsed, app.get_subcommands().front()->get_name());
    if (opt_seed->count() > 0) cfg.master_seed = seed;
    if (opt_samples->count() > 0) cfg.n_samples = samples;
    if (opt_steps->count() > 0) cfg.n_steps = steps;
    if (opt_workers->count() > 0) cfg.workers = workers;
    if (opt_out->count() > 0) cfg.out_dir = out_dir;

    const std::vector<ResultRecord> records = minorlab::run_experiment(cfg);
    write_outputs(cfg, records);
    std::cout << minorlab::kCsvHeader << '\n';
    for (const ResultRecord& r : records) std::cout << minorlab::csv_row(r) << '\n';
    return minorlab::exit_code_for(records);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 4;
  } catch (const json::exception& e) {
    std::cerr << "error: config: " << e.what() << '\n';
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 1;
  }
}
