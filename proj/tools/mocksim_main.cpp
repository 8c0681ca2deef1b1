// Stand-in simulator: a deterministic M/M/1 queue that consumes a
// materialized campaign config and emits SCA/VEC result files, so the
// whole toolchain can be exercised end to end without an external
// simulation framework.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "simcamp/config_ini.hpp"
#include "simcamp/errors.hpp"
#include "simcamp/mm1.hpp"

namespace {

double numeric_param(const simcamp::ParamSet& params, const std::string& key) {
  const simcamp::Value* v = params.find(key);
  if (!v) throw std::runtime_error("config is missing required key '" + key + "'");
  if (!v->is_numeric())
    throw std::runtime_error("config key '" + key + "' must be numeric, got '" + v->canonical() +
                             "'");
  return v->to_double();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"mocksim: deterministic M/M/1 queue simulator"};
  std::string config_path;
  std::string out_dir;
  std::uint64_t seed = 0;
  bool seed_given = false;
  app.add_option("--config", config_path, "materialized campaign config (ini)")->required();
  app.add_option("--out", out_dir, "directory for results.sca / results.vec")->required();
  app.add_option("--seed", seed, "RNG seed (overrides CAMPAIGN_SEED)")
      ->each([&](const std::string&) { seed_given = true; });

  CLI11_PARSE(app, argc, argv);

  try {
    std::ifstream in(config_path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open config " + config_path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    simcamp::ParamSet params = simcamp::parse_params(buffer.str());

    simcamp::mm1::SimConfig cfg;
    cfg.lambda = numeric_param(params, "**.lambda");
    cfg.mu = numeric_param(params, "**.mu");
    double customers = numeric_param(params, "**.customers");
    if (customers < 1 || customers != static_cast<double>(static_cast<std::uint64_t>(customers)))
      throw std::runtime_error("**.customers must be a positive integer");
    cfg.customers = static_cast<std::uint64_t>(customers);

    const char* env_seed = std::getenv("CAMPAIGN_SEED");
    if (!seed_given && env_seed) seed = std::strtoull(env_seed, nullptr, 10);
    cfg.seed = seed;

    const char* env_key = std::getenv("CAMPAIGN_RUNKEY");
    std::string run_key = env_key ? env_key : "";
    std::string run_id = run_key.empty() ? "mocksim" : run_key;

    simcamp::mm1::SimResult result = simcamp::mm1::simulate(cfg);

    std::ofstream sca(out_dir + "/results.sca", std::ios::binary | std::ios::trunc);
    if (!sca) throw std::runtime_error("cannot write " + out_dir + "/results.sca");
    simcamp::mm1::write_sca(sca, result, run_id, run_key, cfg.seed);
    std::ofstream vec(out_dir + "/results.vec", std::ios::binary | std::ios::trunc);
    if (!vec) throw std::runtime_error("cannot write " + out_dir + "/results.vec");
    simcamp::mm1::write_vec(vec, result);
    if (!sca.flush() || !vec.flush()) throw std::runtime_error("I/O error writing results");
  } catch (const simcamp::DefinitionError& e) {
    std::cerr << "mocksim: bad config: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "mocksim: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
