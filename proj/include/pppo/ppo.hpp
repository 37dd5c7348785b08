#pragma once

// PPO machinery: discounted returns, GAE, the clipped surrogate with KL
// penalty, entropy bonus and active-gate L2 regularization, the MSE value
// loss, Adam, and the per-episode update loop. Gradients are analytic
// (adjoint / backprop via Policy::score_jacobian) and are contracted against
// central finite differences in the test suites.

#include <functional>
#include <random>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "pppo/baseline.hpp"
#include "pppo/circuit.hpp"
#include "pppo/observation.hpp"
#include "pppo/policy.hpp"

namespace pppo::ppo {

struct Hyperparameters {
  double gamma = 0.99;    // discount
  double lambda = 0.95;   // GAE factor
  double epsilon = 0.2;   // clip radius
  double beta = 0.1;      // KL coefficient
  double c2 = 0.01;       // entropy coefficient
  double alpha = 0.075;   // active-gate L2 coefficient
  double tau = 1.0;       // softmax temperature
  double lr_policy = 0.01;
  double lr_value = 0.005;
  int minibatch = 8;
  int epochs = 4;
  int horizon = 200;
  int memory = 10000;
  bool advantage_norm = true;

  void validate() const;
};

struct TrajectoryStep {
  ObservationPair obs;
  int action = 0;             // in {0, 1}
  double reward = 0.0;
  double log_prob_old = 0.0;  // log pi_old(a|s) recorded at collection time
  double value = 0.0;         // critic estimate at collection time
  bool done = false;
};

// Transitions plus the per-episode-segment bootstrap values. Capacity acts as
// a drop-oldest sliding window; an update consumes (and clears) the content.
class RolloutBuffer {
 public:
  explicit RolloutBuffer(std::size_t capacity);

  void push(const TrajectoryStep& step);
  // Closes the currently open episode segment. bootstrap_value is V(s_T) for
  // horizon-truncated episodes and 0 for genuinely terminal ones.
  void end_episode(double bootstrap_value);
  void clear();

  std::size_t size() const { return steps_.size(); }
  bool empty() const { return steps_.empty(); }
  std::size_t capacity() const { return capacity_; }
  bool has_open_episode() const { return open_; }

  struct Segment {
    std::size_t begin = 0;
    std::size_t end = 0;
    double bootstrap_value = 0.0;
  };
  const std::vector<TrajectoryStep>& steps() const { return steps_; }
  const std::vector<Segment>& segments() const { return segments_; }

 private:
  void trim_to_capacity();

  std::size_t capacity_;
  std::vector<TrajectoryStep> steps_;
  std::vector<Segment> segments_;
  bool open_ = false;
};

// out[t] = sum_{l=0}^{T-t} gamma^l r_{t+l}, computed right to left.
std::vector<double> discounted_returns(std::span<const double> rewards, double gamma);

// A_t = delta_t + gamma*lambda*A_{t+1}, delta_t = r_t + gamma V(s_{t+1}) - V(s_t).
std::vector<double> gae_advantages(std::span<const double> rewards, std::span<const double> values,
                                   double bootstrap_value, double gamma, double lambda);

// min(ratio * advantage, clip(ratio, 1-eps, 1+eps) * advantage)
double clip_objective(double ratio, double advantage, double epsilon);

// D_KL(p_new || p_old) for the binary action distribution; >= 0.
double kl_categorical(const circuit::ActionDistribution& p_new,
                      const circuit::ActionDistribution& p_old);

// -sum_a p(a) log p(a); at most ln 2.
double entropy_categorical(const circuit::ActionDistribution& p);

// One minibatch element with its precomputed targets.
struct Sample {
  ObservationPair obs;
  int action = 0;
  double log_prob_old = 0.0;
  double advantage = 0.0;
  double target_return = 0.0;
};

struct LossBreakdown {
  double total = 0.0;         // -(clip - beta*KL + c2*S) + alpha*L2, minimized
  double clip_term = 0.0;     // batch mean of the clipped surrogate
  double kl_term = 0.0;       // batch mean KL(new || old)
  double entropy_term = 0.0;  // batch mean entropy
  double l2_term = 0.0;       // active-gate L2 of the current parameters
};

LossBreakdown ppo_loss(std::span<const Sample> batch, const Policy& policy,
                       const Hyperparameters& hp);
// Loss plus its analytic gradient w.r.t. the flat policy parameters.
std::pair<LossBreakdown, Eigen::VectorXd> ppo_loss_gradient(std::span<const Sample> batch,
                                                            const Policy& policy,
                                                            const Hyperparameters& hp);

double value_loss(std::span<const Sample> batch, const baseline::ValueNetParams& vparams);
Eigen::VectorXd value_loss_gradient(std::span<const Sample> batch,
                                    const baseline::ValueNetParams& vparams);

// Central finite differences (step h), the independent gradient oracle and a
// generic fallback engine for arbitrary scalar objectives.
Eigen::VectorXd finite_difference_gradient(const std::function<double(const Eigen::VectorXd&)>& f,
                                           const Eigen::VectorXd& x, double h = 1e-4);

struct AdamState {
  Eigen::VectorXd m;
  Eigen::VectorXd v;
  long step = 0;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double delta = 1e-8;

  explicit AdamState(long n) : m(Eigen::VectorXd::Zero(n)), v(Eigen::VectorXd::Zero(n)) {}
};

// Standard bias-corrected Adam update, in place.
void adam_step(Eigen::VectorXd& params, const Eigen::VectorXd& grad, AdamState& state, double lr);

struct UpdateDiagnostics {
  LossBreakdown loss;          // means over all minibatch steps of the update
  double value_loss = 0.0;     // mean over all minibatch steps
  double mean_kl_after = 0.0;  // KL(new || old) over the full batch after the update
  int transitions = 0;
  int minibatch_steps = 0;
};

// One PPO update over the buffered episodes: computes returns and GAE per
// segment, optionally normalizes advantages across the batch, then runs
// `epochs` passes of shuffled minibatches applying Adam to the policy and the
// value net. Consumes (clears) the buffer.
UpdateDiagnostics update(RolloutBuffer& buffer, Policy& policy,
                         baseline::ValueNetParams& vparams, AdamState& policy_adam,
                         AdamState& value_adam, const Hyperparameters& hp, std::mt19937_64& rng);

}  // namespace pppo::ppo
