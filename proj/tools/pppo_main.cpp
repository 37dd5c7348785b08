// Command-line front end: train / replay / gates-selftest / dump-gate.
// Exit codes: 0 success, 2 configuration error, 3 numerical-domain abort.

#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "pppo/errors.hpp"
#include "pppo/fock.hpp"
#include "pppo/harness.hpp"
#include "pppo/text_io.hpp"

namespace {

using namespace pppo;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

struct TrainArgs {
  std::string policy;
  int layers = -1;
  int cutoff = -1;
  int episodes = -1;
  int agents = -1;
  long seed_base = -1;
  std::string seeds;
  std::string config_path;
  std::string out;
  int filter = -1;
  int filter_checkpoint = -1;
  int window = -1;
  int checkpoint_interval = -1;
  int threads = -1;
  std::vector<std::pair<std::string, std::string>> hp_overrides;
};

void add_hp_options(CLI::App* cmd, TrainArgs& args) {
  static const char* names[] = {"gamma",     "lambda", "epsilon", "beta",
                                "c2",        "alpha",  "tau",     "lr_policy",
                                "lr_value",  "minibatch", "epochs", "horizon",
                                "memory",    "advantage_norm"};
  for (const char* name : names) {
    const std::string opt = std::string("--hp.") + name;
    cmd->add_option_function<std::string>(
        opt,
        [&args, name](const std::string& v) { args.hp_overrides.emplace_back(std::string("hp.") + name, v); },
        std::string("override hyperparameter ") + name);
  }
}

harness::ExperimentConfig build_train_config(const TrainArgs& args) {
  harness::ExperimentConfig cfg;
  bool have_seeds = false;
  if (!args.config_path.empty()) {
    cfg = harness::parse_config_file(args.config_path);
    have_seeds = true;  // parse_config_file always materializes seeds
  }
  if (!args.policy.empty()) cfg.policy_kind = harness::parse_policy_kind(args.policy);
  if (args.layers >= 0) cfg.layers = args.layers;
  if (args.cutoff >= 0) cfg.cutoff = args.cutoff;
  if (args.episodes >= 0) cfg.episodes = args.episodes;
  if (args.filter >= 0) cfg.filter_enabled = args.filter != 0;
  if (args.filter_checkpoint >= 0) cfg.filter_checkpoint = args.filter_checkpoint;
  if (args.window >= 0) cfg.window = args.window;
  if (args.checkpoint_interval >= 0) cfg.checkpoint_interval = args.checkpoint_interval;
  if (args.threads >= 0) cfg.threads = args.threads;
  if (!args.out.empty()) cfg.output_dir = args.out;

  if (!args.seeds.empty()) {
    harness::apply_config_entry(cfg, "seeds", args.seeds);
  } else if (args.agents >= 0 || args.seed_base >= 0 || !have_seeds) {
    const int agents = args.agents >= 0 ? args.agents : (have_seeds ? cfg.num_agents() : 20);
    const std::uint64_t base =
        args.seed_base >= 0 ? static_cast<std::uint64_t>(args.seed_base) : 1;
    if (agents < 1) throw ConfigError("--agents must be >= 1");
    cfg.seeds.clear();
    for (int i = 0; i < agents; ++i) cfg.seeds.push_back(base + static_cast<std::uint64_t>(i));
  }
  for (const auto& [key, value] : args.hp_overrides) {
    harness::apply_config_entry(cfg, key, value);
  }
  return cfg;
}

int run_train(const TrainArgs& args) {
  const harness::ExperimentConfig cfg = build_train_config(args);
  cfg.validate();
  if (cfg.output_dir.empty()) throw ConfigError("train: --out <dir> is required");
  std::cout << "training " << cfg.num_agents() << " " << harness::policy_kind_name(cfg.policy_kind)
            << " agent(s), " << cfg.episodes << " episodes each\n";
  const harness::ExperimentResult result = harness::run_experiment(cfg);

  int aborted = 0;
  for (const auto& rec : result.records) {
    std::cout << "agent seed " << rec.seed << ": " << rec.episodes.size() << " episodes, status "
              << harness::agent_status_name(rec.status);
    if (!rec.error.empty()) {
      std::cout << " (" << rec.error << ")";
      ++aborted;
    }
    std::cout << '\n';
  }
  std::cout << "outputs written to " << cfg.output_dir << '\n';
  return aborted > 0 ? kExitNumerical : kExitOk;
}

int run_replay(const std::string& manifest_path, const std::string& out) {
  std::ifstream is(manifest_path);
  if (!is) throw ConfigError("cannot open manifest " + manifest_path);
  harness::ExperimentConfig cfg = harness::read_manifest(is);
  cfg.output_dir = out;
  cfg.validate();
  if (cfg.output_dir.empty()) throw ConfigError("replay: --out <dir> is required");
  std::cout << "replaying " << cfg.num_agents() << " "
            << harness::policy_kind_name(cfg.policy_kind) << " agent(s)\n";
  const harness::ExperimentResult result = harness::run_experiment(cfg);
  int aborted = 0;
  for (const auto& rec : result.records) {
    if (!rec.error.empty()) ++aborted;
  }
  std::cout << "outputs written to " << cfg.output_dir << '\n';
  return aborted > 0 ? kExitNumerical : kExitOk;
}

struct DumpArgs {
  std::string gate = "displacement";
  double r = 1.0;
  double phi = 0.0;
  double theta = 0.5;
  double kappa = 0.5;
  int cutoff = 16;
};

int run_dump_gate(const DumpArgs& args) {
  fock::SimConfig cfg;
  cfg.modes = args.gate == "beamsplitter" ? 2 : 1;
  cfg.cutoff = args.cutoff;
  fock::GateMatrix gate;
  if (args.gate == "displacement") {
    gate = fock::displacement_gate(args.r, args.phi, cfg);
  } else if (args.gate == "squeezing") {
    gate = fock::squeezing_gate(args.r, args.phi, cfg);
  } else if (args.gate == "rotation") {
    gate = fock::rotation_gate(args.phi, cfg);
  } else if (args.gate == "kerr") {
    gate = fock::kerr_gate(args.kappa, cfg);
  } else if (args.gate == "beamsplitter") {
    gate = fock::beamsplitter_gate(args.theta, args.phi, cfg);
  } else {
    throw ConfigError("unknown gate '" + args.gate + "'");
  }
  fock::dump_gate(gate, std::cout);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"photonic PPO: quantum and classical policy training on restricted CartPole"};
  app.require_subcommand(1);

  TrainArgs train_args;
  CLI::App* train = app.add_subcommand("train", "train a sweep of agents");
  train->add_option("--policy", train_args.policy, "classical|single|reupload");
  train->add_option("--layers", train_args.layers, "variational layers (default 3)");
  train->add_option("--cutoff", train_args.cutoff, "Fock cutoff D (default 16)");
  train->add_option("--episodes", train_args.episodes, "episodes per agent (default 1000)");
  train->add_option("--agents", train_args.agents, "number of agents (default 20)");
  train->add_option("--seed-base", train_args.seed_base, "first seed (default 1)");
  train->add_option("--seeds", train_args.seeds, "explicit comma-separated seed list");
  train->add_option("--config", train_args.config_path, "key = value config file");
  train->add_option("--out", train_args.out, "output directory");
  train->add_option("--filter", train_args.filter, "enable filtering rules (0/1)");
  train->add_option("--filter-checkpoint", train_args.filter_checkpoint,
                    "rule-1 episode checkpoint (default 500)");
  train->add_option("--window", train_args.window, "moving-average window (default 20)");
  train->add_option("--checkpoint-interval", train_args.checkpoint_interval,
                    "write parameter checkpoints every N episodes (0 = off)");
  train->add_option("--threads", train_args.threads, "worker threads (0 = auto)");
  add_hp_options(train, train_args);

  std::string manifest_path, replay_out;
  CLI::App* replay = app.add_subcommand("replay", "re-run an experiment from its manifest");
  replay->add_option("--manifest", manifest_path, "manifest.txt of a previous run")->required();
  replay->add_option("--out", replay_out, "output directory")->required();

  CLI::App* selftest = app.add_subcommand("gates-selftest", "run the gate-matrix oracle suite");

  DumpArgs dump_args;
  CLI::App* dump = app.add_subcommand("dump-gate", "print a gate matrix as re,im text rows");
  dump->add_option("--gate", dump_args.gate,
                   "displacement|squeezing|rotation|kerr|beamsplitter");
  dump->add_option("--r", dump_args.r, "magnitude");
  dump->add_option("--phi", dump_args.phi, "phase (rad)");
  dump->add_option("--theta", dump_args.theta, "beamsplitter angle (rad)");
  dump->add_option("--kappa", dump_args.kappa, "Kerr strength (rad)");
  dump->add_option("--cutoff", dump_args.cutoff, "Fock cutoff D");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (train->parsed()) return run_train(train_args);
    if (replay->parsed()) return run_replay(manifest_path, replay_out);
    if (selftest->parsed()) return fock::selftest(std::cout) ? kExitOk : kExitNumerical;
    if (dump->parsed()) return run_dump_gate(dump_args);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const ShapeError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const GateDomainError& e) {
    std::cerr << "numerical-domain abort: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const NumericalError& e) {
    std::cerr << "numerical-domain abort: " << e.what() << '\n';
    return kExitNumerical;
  }
  return kExitConfig;
}
