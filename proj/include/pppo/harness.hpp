#pragma once

// Experiment orchestration: seeded multi-agent training runs, the
// agent-filtering protocol, moving-average aggregation, and CSV / SVG /
// manifest emission. Full runs are deterministic functions of (config, seeds).

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "pppo/ppo.hpp"

namespace pppo::harness {

extern const char* const kCodeVersion;

enum class PolicyKind { Classical, SingleEncode, Reupload };

const char* policy_kind_name(PolicyKind kind);
PolicyKind parse_policy_kind(const std::string& name);

struct ExperimentConfig {
  PolicyKind policy_kind = PolicyKind::Classical;
  int layers = 3;
  int cutoff = 16;
  int episodes = 1000;
  std::vector<std::uint64_t> seeds;  // one agent per seed
  ppo::Hyperparameters hp;
  bool filter_enabled = true;
  int filter_checkpoint = 500;       // rule-1 episode checkpoint
  int window = 20;                   // moving-average window
  std::string output_dir;
  int checkpoint_interval = 0;       // 0 disables parameter checkpoints
  int threads = 0;                   // 0 = hardware concurrency

  int num_agents() const { return static_cast<int>(seeds.size()); }
  void validate() const;
};

enum class AgentStatus { Active, FilteredLow, FilteredHighStart, Completed };

const char* agent_status_name(AgentStatus status);

struct EpisodeStats {
  double reward = 0.0;
  double policy_loss = 0.0;
  double clip_term = 0.0;
  double kl_term = 0.0;
  double entropy_term = 0.0;
  double l2_term = 0.0;
  double value_loss = 0.0;
  double min_state_norm = 1.0;
};

struct CheckpointSnapshot {
  int episode = 0;           // 1-based episode after which it was taken
  std::string policy_text;   // flat named-parameter checkpoint
  std::string value_text;
};

struct AgentRecord {
  std::uint64_t seed = 0;
  std::vector<EpisodeStats> episodes;
  AgentStatus status = AgentStatus::Active;
  std::vector<CheckpointSnapshot> checkpoints;
  std::string error;  // nonempty when a numerical-domain abort cut the run short

  std::vector<double> rewards() const;
  bool surviving() const {
    return status == AgentStatus::Active || status == AgentStatus::Completed;
  }
};

// Prefix-averaged moving average: out[i] = mean(x[max(0, i-window+1) .. i]).
std::vector<double> moving_average(std::span<const double> values, int window);

// Trains one agent for cfg.episodes episodes; deterministic given the seed.
AgentRecord run_agent(const ExperimentConfig& cfg, std::uint64_t seed);

// Rule 1: moving average < 100 at the checkpoint episode -> FilteredLow.
// Rule 2: mean of the first window episodes > 100 -> FilteredHighStart.
void apply_filters(std::vector<AgentRecord>& records, int checkpoint_episode = 500,
                   int window = 20, double threshold = 100.0);

struct AggregateCurves {
  std::vector<int> n_surviving;
  std::vector<double> mean_reward;
  std::vector<double> std_reward;       // population standard deviation
  std::vector<double> mean_moving_avg;
  std::vector<double> std_moving_avg;
};

// Curves across surviving agents; throws NumericalError when none survive.
AggregateCurves aggregate(const std::vector<AgentRecord>& records, int window = 20);

struct ExperimentResult {
  std::vector<AgentRecord> records;
  std::optional<AggregateCurves> aggregates;  // absent when no agent survives
  double wall_seconds = 0.0;                  // informational, reported in the manifest
  long total_episodes = 0;
};

// Writes per-agent CSVs, aggregate CSV, SVG plots, parameter checkpoints and
// the run manifest into cfg.output_dir.
void emit_outputs(const ExperimentResult& result, const ExperimentConfig& cfg);

// Runs all agents (in parallel), applies filters, aggregates and emits.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

// Flat key/value config file mirroring ExperimentConfig; unknown keys error.
ExperimentConfig parse_config_file(const std::string& path);
void apply_config_entry(ExperimentConfig& cfg, const std::string& key, const std::string& value);

void write_manifest(std::ostream& os, const ExperimentConfig& cfg, const std::string& status);
ExperimentConfig read_manifest(std::istream& is);

std::string per_agent_csv(const AgentRecord& record, int window);
std::string aggregate_csv(const AggregateCurves& curves);

}  // namespace pppo::harness
