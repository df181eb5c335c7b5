// cglab: command-line front end. Flags override values from --config.

#include <cstdlib>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "cglab/io.hpp"

namespace {

// every flag mirrors a config-file key
const std::map<std::string, std::string> kHelp{
    {"N", "number of qubits N of the fine-grained state"},
    {"p", "comma-separated weights p_1..p_N, summing to 1"},
    {"h", "two-qubit asymmetry h = p_2 - p_1 in (0, 1]"},
    {"eps", "shell thickness / neighbourhood size in (0, 1)"},
    {"eps-grid", "comma-separated eps values for the sweep"},
    {"n", "number of Monte-Carlo draws"},
    {"seed", "64-bit RNG seed (default: $CG_LAB_SEED, else 0)"},
    {"streams", "first RNG stream id; chunk k of the draws uses stream + k"},
    {"ensemble", "full | separable"},
    {"output", "output file (default: standard output)"},
    {"format", "csv | json"},
    {"grid", "number of grid points on [0, 1]"},
    {"p-test", "weight p_1 used to generate the data, in (0, 0.5]"},
    {"r-ts", "target Bloch radius in [0, 1] (target on +z)"},
    {"v-eps", "volume of the infinitesimal target neighbourhood"},
    {"model", "p2 | pn (fit model)"},
    {"placement", "fixed | eps (shell centres: fixed 100-point grid or eps-spaced)"},
};

const std::vector<std::pair<std::string, std::vector<std::string>>> kCommands{
    {"sample", {"N", "p", "h", "n", "seed", "streams", "ensemble", "r-ts", "format", "output"}},
    {"pdf", {"N", "p", "h", "grid", "ensemble", "format", "output"}},
    {"volume", {"p", "h", "r-ts", "v-eps", "eps", "ensemble", "format", "output"}},
    {"avg-state", {"p", "h", "r-ts", "ensemble", "n", "seed", "streams", "format", "output"}},
    {"fit", {"p-test", "eps", "n", "seed", "streams", "model", "placement", "format", "output"}},
    {"sweep-eps", {"p-test", "eps-grid", "n", "seed", "streams", "model", "placement", "format", "output"}},
    {"covariance-check", {"N", "p", "h", "n", "seed", "streams", "format", "output"}},
};

const std::map<std::string, std::string> kAbout{
    {"sample", "draw coarse-grained Bloch vectors (Haar/product states) or exact preimages of a target"},
    {"pdf", "radial density and CDF of coarse-grained Haar states on a grid"},
    {"volume", "preimage volume of a target neighbourhood, or of the eps-ball at the origin"},
    {"avg-state", "average preimage state (closed form, optional Monte-Carlo check)"},
    {"fit", "least-squares estimate of p from simulated coarse-grained radii"},
    {"sweep-eps", "fit p for each eps on one shared sample set"},
    {"covariance-check", "unitary covariance residual on random states and unitaries"},
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Coarse-graining channel laboratory"};
  app.set_help_flag("--help", "print this help and exit");
  app.require_subcommand(1);
  app.fallthrough();  // --config may follow the subcommand
  app.set_version_flag("--version", cglab::kVersion);
  std::string config_path;
  app.add_option("--config", config_path, "flat 'key = value' file; command-line flags take precedence");

  std::map<std::string, std::map<std::string, std::string>> values;
  std::map<std::string, std::map<std::string, CLI::Option*>> opts;
  std::map<std::string, CLI::App*> subs;
  for (const auto& [name, keys] : kCommands) {
    CLI::App* sub = app.add_subcommand(name, kAbout.at(name));
    subs[name] = sub;
    for (const auto& k : keys) opts[name][k] = sub->add_option("--" + k, values[name][k], kHelp.at(k));
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  std::string name;
  for (const auto& [n, sub] : subs)
    if (sub->parsed()) name = n;

  try {
    std::vector<std::pair<std::string, std::string>> pairs;
    if (!config_path.empty()) pairs = cglab::read_config_file(config_path);
    for (const auto& [k, opt] : opts[name])
      if (opt->count() > 0) pairs.emplace_back(k, values[name][k]);

    std::optional<std::string> env_seed;
    if (const char* s = std::getenv("CG_LAB_SEED")) env_seed = s;

    const cglab::RunConfig cfg = cglab::config_from_pairs(cglab::parse_command(name), pairs, env_seed);
    const std::string summary = cglab::run(cfg, std::cout);
    std::cerr << summary << '\n';
  } catch (const cglab::ValidationError& e) {
    std::cerr << "cglab " << name << ": " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "cglab " << name << ": error: " << e.what() << '\n';
    return 3;
  }
  return 0;
}
