#include "pppo/harness.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <thread>

#include "pppo/env.hpp"
#include "pppo/errors.hpp"
#include "pppo/rng.hpp"
#include "pppo/svg_plot.hpp"
#include "pppo/text_io.hpp"

namespace pppo::harness {

namespace fs = std::filesystem;

const char* const kCodeVersion = "photonic-ppo 0.1.0";

const char* policy_kind_name(PolicyKind kind) {
  switch (kind) {
    case PolicyKind::Classical: return "classical";
    case PolicyKind::SingleEncode: return "single";
    case PolicyKind::Reupload: return "reupload";
  }
  return "?";
}

PolicyKind parse_policy_kind(const std::string& name) {
  if (name == "classical") return PolicyKind::Classical;
  if (name == "single") return PolicyKind::SingleEncode;
  if (name == "reupload") return PolicyKind::Reupload;
  throw ConfigError("unknown policy kind '" + name + "' (use classical|single|reupload)");
}

const char* agent_status_name(AgentStatus status) {
  switch (status) {
    case AgentStatus::Active: return "active";
    case AgentStatus::FilteredLow: return "filtered_low";
    case AgentStatus::FilteredHighStart: return "filtered_high_start";
    case AgentStatus::Completed: return "completed";
  }
  return "?";
}

void ExperimentConfig::validate() const {
  if (seeds.empty()) throw ConfigError("config: at least one seed is required");
  if (episodes < 1) throw ConfigError("config: episodes must be >= 1");
  if (layers < 1) throw ConfigError("config: layers must be >= 1");
  if (cutoff < 2) throw ConfigError("config: cutoff must be >= 2");
  if (filter_checkpoint < 1) throw ConfigError("config: filter_checkpoint must be >= 1");
  if (window < 1) throw ConfigError("config: window must be >= 1");
  if (checkpoint_interval < 0) throw ConfigError("config: checkpoint_interval must be >= 0");
  if (threads < 0) throw ConfigError("config: threads must be >= 0");
  std::set<std::uint64_t> unique(seeds.begin(), seeds.end());
  if (unique.size() != seeds.size()) throw ConfigError("config: seeds must be distinct");
  hp.validate();
}

std::vector<double> AgentRecord::rewards() const {
  std::vector<double> out;
  out.reserve(episodes.size());
  for (const EpisodeStats& e : episodes) out.push_back(e.reward);
  return out;
}

std::vector<double> moving_average(std::span<const double> values, int window) {
  if (window < 1) throw ConfigError("moving_average: window must be >= 1");
  std::vector<double> out(values.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    acc += values[i];
    if (i >= static_cast<std::size_t>(window)) acc -= values[i - window];
    const std::size_t count = std::min<std::size_t>(i + 1, window);
    out[i] = acc / static_cast<double>(count);
  }
  return out;
}

namespace {

std::unique_ptr<Policy> make_policy(const ExperimentConfig& cfg, std::mt19937_64& init_rng) {
  if (cfg.policy_kind == PolicyKind::Classical) {
    return std::make_unique<ClassicalPolicy>(baseline::init_classical(init_rng));
  }
  fock::SimConfig sim;
  sim.modes = 2;
  sim.cutoff = cfg.cutoff;
  const circuit::EncodingVariant variant = cfg.policy_kind == PolicyKind::SingleEncode
                                               ? circuit::EncodingVariant::SingleEncode
                                               : circuit::EncodingVariant::Reupload;
  return std::make_unique<QuantumPolicy>(circuit::init_params(init_rng, cfg.layers, variant), sim);
}

std::string policy_checkpoint_text(const Policy& policy) {
  if (const auto* q = dynamic_cast<const QuantumPolicy*>(&policy)) {
    return circuit::checkpoint_string(q->params());
  }
  const auto* c = dynamic_cast<const ClassicalPolicy*>(&policy);
  std::ostringstream os;
  baseline::write_checkpoint(os, c->params());
  return os.str();
}

std::string value_checkpoint_text(const baseline::ValueNetParams& vparams) {
  std::ostringstream os;
  baseline::write_checkpoint(os, vparams);
  return os.str();
}

}  // namespace

AgentRecord run_agent(const ExperimentConfig& cfg, std::uint64_t seed) {
  cfg.hp.validate();
  AgentRecord rec;
  rec.seed = seed;

  std::mt19937_64 init_rng = make_rng(seed, RngStream::PolicyInit);
  std::mt19937_64 value_rng = make_rng(seed, RngStream::ValueInit);
  std::mt19937_64 env_rng = make_rng(seed, RngStream::EnvReset);
  std::mt19937_64 action_rng = make_rng(seed, RngStream::ActionSample);
  std::mt19937_64 shuffle_rng = make_rng(seed, RngStream::MinibatchShuffle);

  std::unique_ptr<Policy> policy = make_policy(cfg, init_rng);
  baseline::ValueNetParams vparams = baseline::init_value(value_rng);
  ppo::AdamState policy_adam(policy->param_count());
  ppo::AdamState value_adam(baseline::ValueNetParams::kCount);
  ppo::RolloutBuffer buffer(static_cast<std::size_t>(cfg.hp.memory));
  env::CartPoleEnv environment(cfg.hp.horizon);
  std::uniform_real_distribution<double> uni(0.0, 1.0);

  try {
    for (int ep = 0; ep < cfg.episodes; ++ep) {
      environment.reset(env_rng);
      double total_reward = 0.0;
      double min_norm = 1.0;
      while (!environment.done()) {
        const ObservationPair obs = env::restrict(environment.state());
        const Scores sc = policy->scores(obs);
        min_norm = std::min(min_norm, sc.squared_norm);
        const circuit::ActionDistribution dist =
            circuit::policy_distribution(sc.z1, sc.z2, cfg.hp.tau);
        const int action = uni(action_rng) < dist.p0 ? 0 : 1;
        const double value = baseline::value_forward(obs, vparams);
        const env::StepResult res = environment.step(action);
        total_reward += res.reward;
        buffer.push({obs, action, res.reward, action == 0 ? dist.log_p0 : dist.log_p1, value,
                     res.done});
      }
      double bootstrap = 0.0;
      if (environment.done_reason() == env::DoneReason::Horizon) {
        bootstrap = baseline::value_forward(env::restrict(environment.state()), vparams);
      }
      buffer.end_episode(bootstrap);
      const ppo::UpdateDiagnostics diag =
          ppo::update(buffer, *policy, vparams, policy_adam, value_adam, cfg.hp, shuffle_rng);

      EpisodeStats st;
      st.reward = total_reward;
      st.policy_loss = diag.loss.total;
      st.clip_term = diag.loss.clip_term;
      st.kl_term = diag.loss.kl_term;
      st.entropy_term = diag.loss.entropy_term;
      st.l2_term = diag.loss.l2_term;
      st.value_loss = diag.value_loss;
      st.min_state_norm = min_norm;
      rec.episodes.push_back(st);

      if (cfg.checkpoint_interval > 0 && (ep + 1) % cfg.checkpoint_interval == 0) {
        rec.checkpoints.push_back(
            {ep + 1, policy_checkpoint_text(*policy), value_checkpoint_text(vparams)});
      }
    }
    rec.status = AgentStatus::Active;
  } catch (const GateDomainError& e) {
    rec.error = std::string("numerical-domain abort: ") + e.what();
  } catch (const NumericalError& e) {
    rec.error = std::string("numerical-domain abort: ") + e.what();
  }
  return rec;
}

void apply_filters(std::vector<AgentRecord>& records, int checkpoint_episode, int window,
                   double threshold) {
  for (AgentRecord& rec : records) {
    if (rec.episodes.empty()) continue;
    const std::vector<double> rewards = rec.rewards();
    const std::vector<double> ma = moving_average(rewards, window);
    // Rule 2: the first full moving-average window (prefix-limited) > threshold.
    const std::size_t first_idx = std::min<std::size_t>(rewards.size(), window) - 1;
    if (ma[first_idx] > threshold) {
      rec.status = AgentStatus::FilteredHighStart;
      continue;
    }
    // Rule 1: moving average below threshold at the checkpoint episode.
    if (rewards.size() >= static_cast<std::size_t>(checkpoint_episode) &&
        ma[checkpoint_episode - 1] < threshold) {
      rec.status = AgentStatus::FilteredLow;
      continue;
    }
    if (rec.error.empty()) rec.status = AgentStatus::Completed;
  }
}

AggregateCurves aggregate(const std::vector<AgentRecord>& records, int window) {
  std::vector<const AgentRecord*> survivors;
  for (const AgentRecord& rec : records) {
    if (rec.surviving() && !rec.episodes.empty()) survivors.push_back(&rec);
  }
  if (survivors.empty()) throw NumericalError("aggregate: no surviving agents");

  std::size_t max_ep = 0;
  std::vector<std::vector<double>> rewards, movings;
  for (const AgentRecord* rec : survivors) {
    rewards.push_back(rec->rewards());
    movings.push_back(moving_average(rewards.back(), window));
    max_ep = std::max(max_ep, rewards.back().size());
  }

  AggregateCurves out;
  for (std::size_t i = 0; i < max_ep; ++i) {
    double r_sum = 0.0, m_sum = 0.0;
    int n = 0;
    for (std::size_t a = 0; a < rewards.size(); ++a) {
      if (rewards[a].size() <= i) continue;
      r_sum += rewards[a][i];
      m_sum += movings[a][i];
      ++n;
    }
    const double r_mean = r_sum / n;
    const double m_mean = m_sum / n;
    double r_var = 0.0, m_var = 0.0;
    for (std::size_t a = 0; a < rewards.size(); ++a) {
      if (rewards[a].size() <= i) continue;
      r_var += (rewards[a][i] - r_mean) * (rewards[a][i] - r_mean);
      m_var += (movings[a][i] - m_mean) * (movings[a][i] - m_mean);
    }
    out.n_surviving.push_back(n);
    out.mean_reward.push_back(r_mean);
    out.std_reward.push_back(std::sqrt(r_var / n));
    out.mean_moving_avg.push_back(m_mean);
    out.std_moving_avg.push_back(std::sqrt(m_var / n));
  }
  return out;
}

std::string per_agent_csv(const AgentRecord& record, int window) {
  std::ostringstream os;
  os << "episode,seed,reward,moving_avg,policy_loss,clip_term,kl_term,entropy_term,l2_term,"
        "value_loss,min_state_norm\n";
  const std::vector<double> ma = moving_average(record.rewards(), window);
  for (std::size_t i = 0; i < record.episodes.size(); ++i) {
    const EpisodeStats& e = record.episodes[i];
    os << (i + 1) << ',' << record.seed << ',' << io::format_csv(e.reward) << ','
       << io::format_csv(ma[i]) << ',' << io::format_csv(e.policy_loss) << ','
       << io::format_csv(e.clip_term) << ',' << io::format_csv(e.kl_term) << ','
       << io::format_csv(e.entropy_term) << ',' << io::format_csv(e.l2_term) << ','
       << io::format_csv(e.value_loss) << ',' << io::format_csv(e.min_state_norm) << '\n';
  }
  return os.str();
}

std::string aggregate_csv(const AggregateCurves& curves) {
  std::ostringstream os;
  os << "episode,n_surviving,mean_reward,std_reward,mean_moving_avg,std_moving_avg\n";
  for (std::size_t i = 0; i < curves.mean_reward.size(); ++i) {
    os << (i + 1) << ',' << curves.n_surviving[i] << ',' << io::format_csv(curves.mean_reward[i])
       << ',' << io::format_csv(curves.std_reward[i]) << ','
       << io::format_csv(curves.mean_moving_avg[i]) << ','
       << io::format_csv(curves.std_moving_avg[i]) << '\n';
  }
  return os.str();
}

namespace {

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw ConfigError("cannot write " + path.string());
  os << content;
}

const char* kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                          "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

std::string aggregate_svg(const AggregateCurves& curves) {
  svg::LinePlot plot("Mean reward across surviving agents", "episode", "reward");
  std::vector<double> x(curves.mean_reward.size());
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = static_cast<double>(i + 1);
  std::vector<double> lo(x.size()), hi(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    lo[i] = curves.mean_reward[i] - curves.std_reward[i];
    hi[i] = curves.mean_reward[i] + curves.std_reward[i];
  }
  plot.add_band({x, lo, hi, "#1f77b4", 0.2});
  plot.add_line({x, curves.mean_reward, "#1f77b4", 1.2, "mean reward"});
  plot.add_line({x, curves.mean_moving_avg, "#d62728", 2.0, "mean moving average"});
  std::ostringstream os;
  plot.write(os);
  return os.str();
}

std::string agents_svg(const std::vector<AgentRecord>& records, int window) {
  svg::LinePlot plot("Per-agent moving-average reward", "episode", "reward (moving average)");
  int color = 0;
  for (const AgentRecord& rec : records) {
    if (!rec.surviving() || rec.episodes.empty()) continue;
    const std::vector<double> ma = moving_average(rec.rewards(), window);
    std::vector<double> x(ma.size());
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = static_cast<double>(i + 1);
    std::ostringstream label;
    label << "seed " << rec.seed;
    plot.add_line({x, ma, kPalette[color % 10], 1.4, label.str()});
    ++color;
  }
  std::ostringstream os;
  plot.write(os);
  return os.str();
}

io::KvPairs hp_pairs(const ppo::Hyperparameters& hp) {
  io::KvPairs p;
  p.emplace_back("hp.gamma", io::format_full(hp.gamma));
  p.emplace_back("hp.lambda", io::format_full(hp.lambda));
  p.emplace_back("hp.epsilon", io::format_full(hp.epsilon));
  p.emplace_back("hp.beta", io::format_full(hp.beta));
  p.emplace_back("hp.c2", io::format_full(hp.c2));
  p.emplace_back("hp.alpha", io::format_full(hp.alpha));
  p.emplace_back("hp.tau", io::format_full(hp.tau));
  p.emplace_back("hp.lr_policy", io::format_full(hp.lr_policy));
  p.emplace_back("hp.lr_value", io::format_full(hp.lr_value));
  p.emplace_back("hp.minibatch", std::to_string(hp.minibatch));
  p.emplace_back("hp.epochs", std::to_string(hp.epochs));
  p.emplace_back("hp.horizon", std::to_string(hp.horizon));
  p.emplace_back("hp.memory", std::to_string(hp.memory));
  p.emplace_back("hp.advantage_norm", hp.advantage_norm ? "true" : "false");
  return p;
}

}  // namespace

void apply_config_entry(ExperimentConfig& cfg, const std::string& key, const std::string& value) {
  if (key == "policy") {
    cfg.policy_kind = parse_policy_kind(value);
  } else if (key == "layers") {
    cfg.layers = static_cast<int>(io::parse_long(value));
  } else if (key == "cutoff") {
    cfg.cutoff = static_cast<int>(io::parse_long(value));
  } else if (key == "episodes") {
    cfg.episodes = static_cast<int>(io::parse_long(value));
  } else if (key == "seeds") {
    cfg.seeds.clear();
    for (const std::string& s : io::split(value, ',')) {
      cfg.seeds.push_back(static_cast<std::uint64_t>(io::parse_long(io::trim(s))));
    }
  } else if (key == "filter") {
    cfg.filter_enabled = io::parse_bool(value);
  } else if (key == "filter_checkpoint") {
    cfg.filter_checkpoint = static_cast<int>(io::parse_long(value));
  } else if (key == "window") {
    cfg.window = static_cast<int>(io::parse_long(value));
  } else if (key == "out") {
    cfg.output_dir = value;
  } else if (key == "checkpoint_interval") {
    cfg.checkpoint_interval = static_cast<int>(io::parse_long(value));
  } else if (key == "threads") {
    cfg.threads = static_cast<int>(io::parse_long(value));
  } else if (key == "hp.gamma") {
    cfg.hp.gamma = io::parse_double(value);
  } else if (key == "hp.lambda") {
    cfg.hp.lambda = io::parse_double(value);
  } else if (key == "hp.epsilon") {
    cfg.hp.epsilon = io::parse_double(value);
  } else if (key == "hp.beta") {
    cfg.hp.beta = io::parse_double(value);
  } else if (key == "hp.c2") {
    cfg.hp.c2 = io::parse_double(value);
  } else if (key == "hp.alpha") {
    cfg.hp.alpha = io::parse_double(value);
  } else if (key == "hp.tau") {
    cfg.hp.tau = io::parse_double(value);
  } else if (key == "hp.lr_policy") {
    cfg.hp.lr_policy = io::parse_double(value);
  } else if (key == "hp.lr_value") {
    cfg.hp.lr_value = io::parse_double(value);
  } else if (key == "hp.minibatch") {
    cfg.hp.minibatch = static_cast<int>(io::parse_long(value));
  } else if (key == "hp.epochs") {
    cfg.hp.epochs = static_cast<int>(io::parse_long(value));
  } else if (key == "hp.horizon") {
    cfg.hp.horizon = static_cast<int>(io::parse_long(value));
  } else if (key == "hp.memory") {
    cfg.hp.memory = static_cast<int>(io::parse_long(value));
  } else if (key == "hp.advantage_norm") {
    cfg.hp.advantage_norm = io::parse_bool(value);
  } else {
    throw ConfigError("unknown config key '" + key + "'");
  }
}

ExperimentConfig parse_config_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open config file " + path);
  ExperimentConfig cfg;
  std::uint64_t seed_base = 1;
  long agents = 20;
  bool explicit_seeds = false;
  for (const auto& [key, value] : io::read_kv_stream(is)) {
    if (key == "agents") {
      agents = io::parse_long(value);
    } else if (key == "seed_base") {
      seed_base = static_cast<std::uint64_t>(io::parse_long(value));
    } else if (key == "seeds") {
      explicit_seeds = true;
      apply_config_entry(cfg, key, value);
    } else {
      apply_config_entry(cfg, key, value);
    }
  }
  if (!explicit_seeds) {
    if (agents < 1) throw ConfigError("config: agents must be >= 1");
    cfg.seeds.clear();
    for (long i = 0; i < agents; ++i) cfg.seeds.push_back(seed_base + static_cast<std::uint64_t>(i));
  }
  return cfg;
}

void write_manifest(std::ostream& os, const ExperimentConfig& cfg, const std::string& status) {
  io::KvPairs p;
  p.emplace_back("manifest_version", "1");
  p.emplace_back("code_version", kCodeVersion);
  p.emplace_back("status", status);
  p.emplace_back("policy", policy_kind_name(cfg.policy_kind));
  p.emplace_back("layers", std::to_string(cfg.layers));
  p.emplace_back("cutoff", std::to_string(cfg.cutoff));
  p.emplace_back("episodes", std::to_string(cfg.episodes));
  std::ostringstream seeds;
  for (std::size_t i = 0; i < cfg.seeds.size(); ++i) seeds << (i ? "," : "") << cfg.seeds[i];
  p.emplace_back("seeds", seeds.str());
  p.emplace_back("filter", cfg.filter_enabled ? "true" : "false");
  p.emplace_back("filter_checkpoint", std::to_string(cfg.filter_checkpoint));
  p.emplace_back("window", std::to_string(cfg.window));
  p.emplace_back("checkpoint_interval", std::to_string(cfg.checkpoint_interval));
  p.emplace_back("threads", std::to_string(cfg.threads));
  for (auto& kv : hp_pairs(cfg.hp)) p.push_back(std::move(kv));
  io::write_kv_stream(os, p);
}

ExperimentConfig read_manifest(std::istream& is) {
  ExperimentConfig cfg;
  bool have_seeds = false;
  for (const auto& [key, value] : io::read_kv_stream(is)) {
    if (key == "manifest_version" || key == "code_version" || key == "status" ||
        key.rfind("run.", 0) == 0) {
      continue;
    }
    if (key == "seeds") have_seeds = true;
    apply_config_entry(cfg, key, value);
  }
  if (!have_seeds) throw ConfigError("manifest: missing seeds");
  return cfg;
}

void emit_outputs(const ExperimentResult& result, const ExperimentConfig& cfg) {
  if (cfg.output_dir.empty()) throw ConfigError("emit_outputs: output_dir is empty");
  const fs::path out(cfg.output_dir);
  std::error_code ec;
  fs::create_directories(out, ec);
  if (ec) throw ConfigError("cannot create output directory " + out.string());

  std::string status = "completed";
  if (result.records.empty()) {
    status = "empty";
  } else if (!result.aggregates.has_value()) {
    status = "no_survivors";
  }
  for (const AgentRecord& rec : result.records) {
    if (!rec.error.empty()) status = "aborted";
  }

  {
    std::ostringstream os;
    write_manifest(os, cfg, status);
    if (result.wall_seconds > 0.0 && result.total_episodes > 0) {
      os << "run.wall_seconds = " << io::format_csv(result.wall_seconds) << '\n';
      os << "run.seconds_per_episode = "
         << io::format_csv(result.wall_seconds / static_cast<double>(result.total_episodes))
         << '\n';
    }
    write_file(out / "manifest.txt", os.str());
  }

  if (result.records.empty()) return;

  {
    std::ostringstream os;
    for (const AgentRecord& rec : result.records) {
      os << "agent." << rec.seed << ".status = " << agent_status_name(rec.status) << '\n';
      if (!rec.error.empty()) os << "agent." << rec.seed << ".error = " << rec.error << '\n';
    }
    write_file(out / "summary.txt", os.str());
  }

  for (const AgentRecord& rec : result.records) {
    std::ostringstream name;
    name << "agent_" << rec.seed << ".csv";
    write_file(out / name.str(), per_agent_csv(rec, cfg.window));
  }

  if (result.aggregates.has_value()) {
    write_file(out / "aggregate.csv", aggregate_csv(*result.aggregates));
    write_file(out / "aggregate.svg", aggregate_svg(*result.aggregates));
    write_file(out / "agents.svg", agents_svg(result.records, cfg.window));
  }

  bool any_checkpoint = false;
  for (const AgentRecord& rec : result.records) any_checkpoint |= !rec.checkpoints.empty();
  if (any_checkpoint) {
    fs::create_directories(out / "checkpoints", ec);
    for (const AgentRecord& rec : result.records) {
      for (const CheckpointSnapshot& cp : rec.checkpoints) {
        std::ostringstream base;
        base << "agent_" << rec.seed << "_ep" << cp.episode;
        write_file(out / "checkpoints" / (base.str() + ".policy.txt"), cp.policy_text);
        write_file(out / "checkpoints" / (base.str() + ".value.txt"), cp.value_text);
      }
    }
  }
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  const auto t0 = std::chrono::steady_clock::now();

  ExperimentResult result;
  result.records.resize(cfg.seeds.size());
  const int hw = static_cast<int>(std::thread::hardware_concurrency());
  const int n_threads = std::max(
      1, std::min<int>(cfg.threads > 0 ? cfg.threads : std::max(hw, 1), cfg.num_agents()));

  if (n_threads == 1) {
    for (std::size_t i = 0; i < cfg.seeds.size(); ++i) {
      result.records[i] = run_agent(cfg, cfg.seeds[i]);
    }
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> workers;
    workers.reserve(n_threads);
    for (int t = 0; t < n_threads; ++t) {
      workers.emplace_back([&]() {
        while (true) {
          const std::size_t i = next.fetch_add(1);
          if (i >= cfg.seeds.size()) return;
          result.records[i] = run_agent(cfg, cfg.seeds[i]);
        }
      });
    }
    for (std::thread& w : workers) w.join();
  }

  if (cfg.filter_enabled) {
    apply_filters(result.records, cfg.filter_checkpoint, cfg.window);
  } else {
    for (AgentRecord& rec : result.records) {
      if (rec.error.empty() && !rec.episodes.empty()) rec.status = AgentStatus::Completed;
    }
  }

  try {
    result.aggregates = aggregate(result.records, cfg.window);
  } catch (const NumericalError&) {
    result.aggregates.reset();
  }

  result.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  for (const AgentRecord& rec : result.records) {
    result.total_episodes += static_cast<long>(rec.episodes.size());
  }

  if (!cfg.output_dir.empty()) emit_outputs(result, cfg);
  return result;
}

}  // namespace pppo::harness
