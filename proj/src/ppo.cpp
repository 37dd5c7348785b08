#include "pppo/ppo.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "pppo/errors.hpp"

namespace pppo::ppo {

void Hyperparameters::validate() const {
  if (!(gamma > 0.0 && gamma <= 1.0)) throw ConfigError("hp.gamma must be in (0, 1]");
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw ConfigError("hp.lambda must be in [0, 1]");
  if (epsilon < 0.0) throw ConfigError("hp.epsilon must be nonnegative");
  if (beta < 0.0) throw ConfigError("hp.beta must be nonnegative");
  if (c2 < 0.0) throw ConfigError("hp.c2 must be nonnegative");
  if (alpha < 0.0) throw ConfigError("hp.alpha must be nonnegative");
  if (!(tau > 0.0)) throw ConfigError("hp.tau must be positive");
  if (!(lr_policy > 0.0) || !(lr_value > 0.0)) throw ConfigError("learning rates must be positive");
  if (minibatch < 1) throw ConfigError("hp.minibatch must be >= 1");
  if (epochs < 1) throw ConfigError("hp.epochs must be >= 1");
  if (horizon < 1) throw ConfigError("hp.horizon must be >= 1");
  if (memory < 1) throw ConfigError("hp.memory must be >= 1");
}

RolloutBuffer::RolloutBuffer(std::size_t capacity) : capacity_(capacity) {
  if (capacity == 0) throw ConfigError("RolloutBuffer: capacity must be positive");
}

void RolloutBuffer::push(const TrajectoryStep& step) {
  steps_.push_back(step);
  open_ = true;
  trim_to_capacity();
}

void RolloutBuffer::end_episode(double bootstrap_value) {
  if (!open_) throw ConfigError("RolloutBuffer: no open episode to close");
  const std::size_t begin = segments_.empty() ? 0 : segments_.back().end;
  segments_.push_back({begin, steps_.size(), bootstrap_value});
  open_ = false;
}

void RolloutBuffer::clear() {
  steps_.clear();
  segments_.clear();
  open_ = false;
}

void RolloutBuffer::trim_to_capacity() {
  while (steps_.size() > capacity_) {
    steps_.erase(steps_.begin());
    for (Segment& seg : segments_) {
      if (seg.begin > 0) --seg.begin;
      --seg.end;
    }
    while (!segments_.empty() && segments_.front().end <= segments_.front().begin) {
      segments_.erase(segments_.begin());
    }
  }
}

std::vector<double> discounted_returns(std::span<const double> rewards, double gamma) {
  std::vector<double> out(rewards.size());
  double acc = 0.0;
  for (std::size_t i = rewards.size(); i-- > 0;) {
    acc = rewards[i] + gamma * acc;
    out[i] = acc;
  }
  return out;
}

std::vector<double> gae_advantages(std::span<const double> rewards, std::span<const double> values,
                                   double bootstrap_value, double gamma, double lambda) {
  if (rewards.size() != values.size()) {
    throw ShapeError("gae_advantages: rewards and values must have equal length");
  }
  std::vector<double> out(rewards.size());
  double acc = 0.0;
  for (std::size_t i = rewards.size(); i-- > 0;) {
    const double next_value = (i + 1 < rewards.size()) ? values[i + 1] : bootstrap_value;
    const double delta = rewards[i] + gamma * next_value - values[i];
    acc = delta + gamma * lambda * acc;
    out[i] = acc;
  }
  return out;
}

double clip_objective(double ratio, double advantage, double epsilon) {
  const double clipped = std::clamp(ratio, 1.0 - epsilon, 1.0 + epsilon);
  return std::min(ratio * advantage, clipped * advantage);
}

double kl_categorical(const circuit::ActionDistribution& p_new,
                      const circuit::ActionDistribution& p_old) {
  const double kl = p_new.p0 * (p_new.log_p0 - p_old.log_p0) +
                    p_new.p1 * (p_new.log_p1 - p_old.log_p1);
  return std::max(kl, 0.0);
}

double entropy_categorical(const circuit::ActionDistribution& p) {
  return -(p.p0 * p.log_p0 + p.p1 * p.log_p1);
}

namespace {

// Rebuild the full old distribution from the stored log-prob of the taken
// action; the two-action case makes this exact.
circuit::ActionDistribution old_distribution(int action, double log_prob_old) {
  const double p_taken = std::min(std::exp(log_prob_old), 1.0 - 1e-15);
  const double log_other = std::log1p(-p_taken);
  circuit::ActionDistribution d;
  if (action == 0) {
    d.p0 = p_taken;
    d.log_p0 = log_prob_old;
    d.p1 = 1.0 - p_taken;
    d.log_p1 = log_other;
  } else {
    d.p1 = p_taken;
    d.log_p1 = log_prob_old;
    d.p0 = 1.0 - p_taken;
    d.log_p0 = log_other;
  }
  return d;
}

struct SampleEval {
  double clip = 0.0;
  double kl = 0.0;
  double entropy = 0.0;
  // d(-clip + beta*KL - c2*S)/dDelta with Delta = (z1 - z2)/tau
  double dloss_ddelta = 0.0;
};

SampleEval eval_sample(const Scores& sc, const Sample& s, const Hyperparameters& hp,
                       bool with_derivative) {
  const circuit::ActionDistribution dist = circuit::policy_distribution(sc.z1, sc.z2, hp.tau);
  const circuit::ActionDistribution old = old_distribution(s.action, s.log_prob_old);

  const double log_new = s.action == 0 ? dist.log_p0 : dist.log_p1;
  const double ratio = std::exp(log_new - s.log_prob_old);
  const double unclipped = ratio * s.advantage;
  const double clipped = std::clamp(ratio, 1.0 - hp.epsilon, 1.0 + hp.epsilon) * s.advantage;

  SampleEval ev;
  ev.clip = std::min(unclipped, clipped);
  ev.kl = kl_categorical(dist, old);
  ev.entropy = entropy_categorical(dist);

  if (with_derivative) {
    const double p0p1 = dist.p0 * dist.p1;
    const double dlog_ddelta = s.action == 0 ? dist.p1 : -dist.p0;
    const double dratio = ratio * dlog_ddelta;
    double dclip = 0.0;
    if (unclipped <= clipped) {
      dclip = s.advantage * dratio;
    } else if (ratio > 1.0 - hp.epsilon && ratio < 1.0 + hp.epsilon) {
      dclip = s.advantage * dratio;
    }
    const double dkl =
        p0p1 * ((dist.log_p0 - old.log_p0) - (dist.log_p1 - old.log_p1));
    const double dentropy = -p0p1 * (dist.log_p0 - dist.log_p1);
    ev.dloss_ddelta = -dclip + hp.beta * dkl - hp.c2 * dentropy;
  }
  return ev;
}

}  // namespace

LossBreakdown ppo_loss(std::span<const Sample> batch, const Policy& policy,
                       const Hyperparameters& hp) {
  if (batch.empty()) throw ConfigError("ppo_loss: empty minibatch");
  LossBreakdown bd;
  for (const Sample& s : batch) {
    const SampleEval ev = eval_sample(policy.scores(s.obs), s, hp, false);
    bd.clip_term += ev.clip;
    bd.kl_term += ev.kl;
    bd.entropy_term += ev.entropy;
  }
  const double n = static_cast<double>(batch.size());
  bd.clip_term /= n;
  bd.kl_term /= n;
  bd.entropy_term /= n;
  bd.l2_term = policy.l2_active();
  bd.total = -bd.clip_term + hp.beta * bd.kl_term - hp.c2 * bd.entropy_term + hp.alpha * bd.l2_term;
  return bd;
}

std::pair<LossBreakdown, Eigen::VectorXd> ppo_loss_gradient(std::span<const Sample> batch,
                                                            const Policy& policy,
                                                            const Hyperparameters& hp) {
  if (batch.empty()) throw ConfigError("ppo_loss_gradient: empty minibatch");
  LossBreakdown bd;
  Eigen::VectorXd grad = Eigen::VectorXd::Zero(policy.param_count());
  for (const Sample& s : batch) {
    Scores sc;
    const Eigen::MatrixXd jac = policy.score_jacobian(s.obs, &sc);
    const SampleEval ev = eval_sample(sc, s, hp, true);
    bd.clip_term += ev.clip;
    bd.kl_term += ev.kl;
    bd.entropy_term += ev.entropy;
    // dDelta/dparams = (J_row0 - J_row1)/tau
    grad += (ev.dloss_ddelta / hp.tau) * (jac.row(0) - jac.row(1)).transpose();
  }
  const double n = static_cast<double>(batch.size());
  bd.clip_term /= n;
  bd.kl_term /= n;
  bd.entropy_term /= n;
  bd.l2_term = policy.l2_active();
  bd.total = -bd.clip_term + hp.beta * bd.kl_term - hp.c2 * bd.entropy_term + hp.alpha * bd.l2_term;
  grad /= n;
  grad += hp.alpha * policy.l2_active_gradient();
  return {bd, grad};
}

double value_loss(std::span<const Sample> batch, const baseline::ValueNetParams& vparams) {
  if (batch.empty()) throw ConfigError("value_loss: empty batch");
  double acc = 0.0;
  for (const Sample& s : batch) {
    const double diff = baseline::value_forward(s.obs, vparams) - s.target_return;
    acc += diff * diff;
  }
  return acc / static_cast<double>(batch.size());
}

Eigen::VectorXd value_loss_gradient(std::span<const Sample> batch,
                                    const baseline::ValueNetParams& vparams) {
  if (batch.empty()) throw ConfigError("value_loss_gradient: empty batch");
  Eigen::VectorXd grad = Eigen::VectorXd::Zero(baseline::ValueNetParams::kCount);
  for (const Sample& s : batch) {
    const double diff = baseline::value_forward(s.obs, vparams) - s.target_return;
    grad += 2.0 * diff * baseline::value_backward(s.obs, vparams);
  }
  return grad / static_cast<double>(batch.size());
}

Eigen::VectorXd finite_difference_gradient(const std::function<double(const Eigen::VectorXd&)>& f,
                                           const Eigen::VectorXd& x, double h) {
  Eigen::VectorXd grad(x.size());
  Eigen::VectorXd probe = x;
  for (long j = 0; j < x.size(); ++j) {
    probe[j] = x[j] + h;
    const double fp = f(probe);
    probe[j] = x[j] - h;
    const double fm = f(probe);
    probe[j] = x[j];
    if (!std::isfinite(fp) || !std::isfinite(fm)) {
      throw NumericalError("finite_difference_gradient: objective is not finite");
    }
    grad[j] = (fp - fm) / (2.0 * h);
  }
  return grad;
}

void adam_step(Eigen::VectorXd& params, const Eigen::VectorXd& grad, AdamState& state, double lr) {
  if (params.size() != grad.size() || params.size() != state.m.size()) {
    throw ShapeError("adam_step: parameter/gradient/state sizes differ");
  }
  ++state.step;
  state.m = state.beta1 * state.m + (1.0 - state.beta1) * grad;
  state.v = state.beta2 * state.v + (1.0 - state.beta2) * grad.cwiseProduct(grad);
  const double bc1 = 1.0 - std::pow(state.beta1, static_cast<double>(state.step));
  const double bc2 = 1.0 - std::pow(state.beta2, static_cast<double>(state.step));
  const Eigen::VectorXd mhat = state.m / bc1;
  const Eigen::VectorXd vhat = state.v / bc2;
  params.array() -= lr * mhat.array() / (vhat.array().sqrt() + state.delta);
}

UpdateDiagnostics update(RolloutBuffer& buffer, Policy& policy,
                         baseline::ValueNetParams& vparams, AdamState& policy_adam,
                         AdamState& value_adam, const Hyperparameters& hp, std::mt19937_64& rng) {
  hp.validate();
  if (buffer.empty() || buffer.segments().empty()) {
    throw ConfigError("update: buffer holds no completed episode");
  }
  if (buffer.has_open_episode()) {
    throw ConfigError("update: buffer has an unterminated episode");
  }

  // Per-segment Eq.-(1) returns and Eq.-(2) advantages.
  std::vector<Sample> samples;
  samples.reserve(buffer.size());
  const std::vector<TrajectoryStep>& steps = buffer.steps();
  for (const RolloutBuffer::Segment& seg : buffer.segments()) {
    const std::size_t t_len = seg.end - seg.begin;
    std::vector<double> rewards(t_len), values(t_len);
    for (std::size_t t = 0; t < t_len; ++t) {
      rewards[t] = steps[seg.begin + t].reward;
      values[t] = steps[seg.begin + t].value;
    }
    const std::vector<double> rets = discounted_returns(rewards, hp.gamma);
    const std::vector<double> advs =
        gae_advantages(rewards, values, seg.bootstrap_value, hp.gamma, hp.lambda);
    for (std::size_t t = 0; t < t_len; ++t) {
      const TrajectoryStep& st = steps[seg.begin + t];
      samples.push_back({st.obs, st.action, st.log_prob_old, advs[t], rets[t]});
    }
  }

  if (hp.advantage_norm && samples.size() > 1) {
    double mean = 0.0;
    for (const Sample& s : samples) mean += s.advantage;
    mean /= static_cast<double>(samples.size());
    double var = 0.0;
    for (const Sample& s : samples) var += (s.advantage - mean) * (s.advantage - mean);
    const double std_dev = std::sqrt(var / static_cast<double>(samples.size()));
    for (Sample& s : samples) s.advantage = (s.advantage - mean) / (std_dev + 1e-8);
  }

  std::vector<std::size_t> order(samples.size());
  std::iota(order.begin(), order.end(), 0);

  UpdateDiagnostics diag;
  diag.transitions = static_cast<int>(samples.size());
  double vloss_acc = 0.0;
  LossBreakdown acc;

  std::vector<Sample> minibatch;
  for (int epoch = 0; epoch < hp.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    for (std::size_t start = 0; start < order.size(); start += hp.minibatch) {
      const std::size_t stop = std::min(order.size(), start + hp.minibatch);
      minibatch.clear();
      for (std::size_t i = start; i < stop; ++i) minibatch.push_back(samples[order[i]]);

      auto [bd, grad] = ppo_loss_gradient(minibatch, policy, hp);
      Eigen::VectorXd theta = policy.flat_params();
      adam_step(theta, grad, policy_adam, hp.lr_policy);
      policy.set_flat_params(theta);

      vloss_acc += value_loss(minibatch, vparams);
      const Eigen::VectorXd vgrad = value_loss_gradient(minibatch, vparams);
      Eigen::VectorXd vtheta = vparams.to_flat();
      adam_step(vtheta, vgrad, value_adam, hp.lr_value);
      vparams = baseline::ValueNetParams::from_flat(vtheta);

      acc.total += bd.total;
      acc.clip_term += bd.clip_term;
      acc.kl_term += bd.kl_term;
      acc.entropy_term += bd.entropy_term;
      acc.l2_term += bd.l2_term;
      ++diag.minibatch_steps;
    }
  }

  const double n_steps = static_cast<double>(std::max(diag.minibatch_steps, 1));
  diag.loss.total = acc.total / n_steps;
  diag.loss.clip_term = acc.clip_term / n_steps;
  diag.loss.kl_term = acc.kl_term / n_steps;
  diag.loss.entropy_term = acc.entropy_term / n_steps;
  diag.loss.l2_term = acc.l2_term / n_steps;
  diag.value_loss = vloss_acc / n_steps;

  double kl_after = 0.0;
  for (const Sample& s : samples) {
    const Scores sc = policy.scores(s.obs);
    const circuit::ActionDistribution dist = circuit::policy_distribution(sc.z1, sc.z2, hp.tau);
    kl_after += kl_categorical(dist, old_distribution(s.action, s.log_prob_old));
  }
  diag.mean_kl_after = kl_after / static_cast<double>(samples.size());

  buffer.clear();
  return diag;
}

}  // namespace pppo::ppo
