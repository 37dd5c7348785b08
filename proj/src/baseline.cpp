#include "pppo/baseline.hpp"

#include <cmath>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "pppo/errors.hpp"
#include "pppo/text_io.hpp"

namespace pppo::baseline {

namespace {

Eigen::Vector2d obs_vector(const ObservationPair& obs) {
  return {obs.pole_angle, obs.angular_velocity};
}

void write_matrix(std::ostream& os, const char* name, const Eigen::MatrixXd& m) {
  for (long r = 0; r < m.rows(); ++r) {
    for (long c = 0; c < m.cols(); ++c) {
      os << name << '.' << r;
      if (m.cols() > 1) os << '.' << c;
      os << " = " << io::format_full(m(r, c)) << '\n';
    }
  }
}

class KvReader {
 public:
  explicit KvReader(std::istream& is) {
    for (const auto& [k, v] : io::read_kv_stream(is)) {
      if (!values_.emplace(k, io::parse_double(v)).second) {
        throw ConfigError("checkpoint: duplicate key " + k);
      }
    }
  }

  double get(const std::string& key) const {
    const auto it = values_.find(key);
    if (it == values_.end()) throw ConfigError("checkpoint: missing key " + key);
    return it->second;
  }

  void read_matrix(const char* name, Eigen::Ref<Eigen::MatrixXd> m) const {
    for (long r = 0; r < m.rows(); ++r) {
      for (long c = 0; c < m.cols(); ++c) {
        std::ostringstream key;
        key << name << '.' << r;
        if (m.cols() > 1) key << '.' << c;
        m(r, c) = get(key.str());
      }
    }
  }

  std::size_t size() const { return values_.size(); }

 private:
  std::map<std::string, double> values_;
};

}  // namespace

Eigen::VectorXd ClassicalPolicyParams::to_flat() const {
  Eigen::VectorXd flat(kCount);
  long i = 0;
  for (int r = 0; r < 8; ++r)
    for (int c = 0; c < 2; ++c) flat[i++] = w_in(r, c);
  for (int r = 0; r < 8; ++r) flat[i++] = b_hidden(r);
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 8; ++c) flat[i++] = w_out(r, c);
  for (int r = 0; r < 2; ++r) flat[i++] = b_out(r);
  return flat;
}

ClassicalPolicyParams ClassicalPolicyParams::from_flat(const Eigen::VectorXd& flat) {
  if (flat.size() != kCount) throw ShapeError("ClassicalPolicyParams: expected 42 values");
  ClassicalPolicyParams p;
  long i = 0;
  for (int r = 0; r < 8; ++r)
    for (int c = 0; c < 2; ++c) p.w_in(r, c) = flat[i++];
  for (int r = 0; r < 8; ++r) p.b_hidden(r) = flat[i++];
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 8; ++c) p.w_out(r, c) = flat[i++];
  for (int r = 0; r < 2; ++r) p.b_out(r) = flat[i++];
  return p;
}

Eigen::VectorXd ValueNetParams::to_flat() const {
  Eigen::VectorXd flat(kCount);
  long i = 0;
  for (int r = 0; r < 8; ++r)
    for (int c = 0; c < 2; ++c) flat[i++] = w_in(r, c);
  for (int r = 0; r < 8; ++r) flat[i++] = b_hidden(r);
  for (int c = 0; c < 8; ++c) flat[i++] = w_out(0, c);
  return flat;
}

ValueNetParams ValueNetParams::from_flat(const Eigen::VectorXd& flat) {
  if (flat.size() != kCount) throw ShapeError("ValueNetParams: expected 32 values");
  ValueNetParams p;
  long i = 0;
  for (int r = 0; r < 8; ++r)
    for (int c = 0; c < 2; ++c) p.w_in(r, c) = flat[i++];
  for (int r = 0; r < 8; ++r) p.b_hidden(r) = flat[i++];
  for (int c = 0; c < 8; ++c) p.w_out(0, c) = flat[i++];
  return p;
}

Eigen::Vector2d classical_logits(const ObservationPair& obs, const ClassicalPolicyParams& params) {
  const Eigen::Matrix<double, 8, 1> hidden =
      (params.w_in * obs_vector(obs) + params.b_hidden).array().tanh();
  return params.w_out * hidden + params.b_out;
}

circuit::ActionDistribution classical_forward(const ObservationPair& obs,
                                              const ClassicalPolicyParams& params, double tau) {
  const Eigen::Vector2d logits = classical_logits(obs, params);
  return circuit::policy_distribution(logits[0], logits[1], tau);
}

Eigen::VectorXd classical_logits_backward(const ObservationPair& obs,
                                          const ClassicalPolicyParams& params,
                                          const Eigen::Vector2d& dlogits) {
  const Eigen::Vector2d x = obs_vector(obs);
  const Eigen::Matrix<double, 8, 1> pre = params.w_in * x + params.b_hidden;
  const Eigen::Matrix<double, 8, 1> hidden = pre.array().tanh();
  const Eigen::Matrix<double, 8, 1> dhidden = params.w_out.transpose() * dlogits;
  const Eigen::Matrix<double, 8, 1> dpre =
      dhidden.array() * (1.0 - hidden.array().square());

  ClassicalPolicyParams g;
  g.w_in = dpre * x.transpose();
  g.b_hidden = dpre;
  g.w_out = dlogits * hidden.transpose();
  g.b_out = dlogits;
  return g.to_flat();
}

double value_forward(const ObservationPair& obs, const ValueNetParams& params) {
  const Eigen::Matrix<double, 8, 1> hidden =
      (params.w_in * obs_vector(obs) + params.b_hidden).array().tanh();
  return (params.w_out * hidden)(0, 0);
}

Eigen::VectorXd value_backward(const ObservationPair& obs, const ValueNetParams& params) {
  const Eigen::Vector2d x = obs_vector(obs);
  const Eigen::Matrix<double, 8, 1> pre = params.w_in * x + params.b_hidden;
  const Eigen::Matrix<double, 8, 1> hidden = pre.array().tanh();
  const Eigen::Matrix<double, 8, 1> dpre =
      params.w_out.transpose().array() * (1.0 - hidden.array().square());

  ValueNetParams g;
  g.w_in = dpre * x.transpose();
  g.b_hidden = dpre;
  g.w_out = hidden.transpose();
  return g.to_flat();
}

ClassicalPolicyParams init_classical(std::mt19937_64& rng) {
  std::normal_distribution<double> in_dist(0.0, 1.0 / std::sqrt(2.0));
  std::normal_distribution<double> out_dist(0.0, 1.0 / std::sqrt(8.0));
  ClassicalPolicyParams p;
  for (int r = 0; r < 8; ++r)
    for (int c = 0; c < 2; ++c) p.w_in(r, c) = in_dist(rng);
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 8; ++c) p.w_out(r, c) = out_dist(rng);
  return p;
}

ValueNetParams init_value(std::mt19937_64& rng) {
  std::normal_distribution<double> in_dist(0.0, 1.0 / std::sqrt(2.0));
  std::normal_distribution<double> out_dist(0.0, 1.0 / std::sqrt(8.0));
  ValueNetParams p;
  for (int r = 0; r < 8; ++r)
    for (int c = 0; c < 2; ++c) p.w_in(r, c) = in_dist(rng);
  for (int c = 0; c < 8; ++c) p.w_out(0, c) = out_dist(rng);
  return p;
}

void write_checkpoint(std::ostream& os, const ClassicalPolicyParams& params) {
  write_matrix(os, "w_in", params.w_in);
  write_matrix(os, "b_hidden", params.b_hidden);
  write_matrix(os, "w_out", params.w_out);
  write_matrix(os, "b_out", params.b_out);
}

ClassicalPolicyParams read_classical_checkpoint(std::istream& is) {
  const KvReader reader(is);
  if (reader.size() != ClassicalPolicyParams::kCount) {
    throw ConfigError("classical checkpoint: expected exactly 42 parameters");
  }
  ClassicalPolicyParams p;
  Eigen::MatrixXd w_in(8, 2), b_hidden(8, 1), w_out(2, 8), b_out(2, 1);
  reader.read_matrix("w_in", w_in);
  reader.read_matrix("b_hidden", b_hidden);
  reader.read_matrix("w_out", w_out);
  reader.read_matrix("b_out", b_out);
  p.w_in = w_in;
  p.b_hidden = b_hidden;
  p.w_out = w_out;
  p.b_out = b_out;
  return p;
}

void write_checkpoint(std::ostream& os, const ValueNetParams& params) {
  write_matrix(os, "w_in", params.w_in);
  write_matrix(os, "b_hidden", params.b_hidden);
  write_matrix(os, "w_out", params.w_out);
}

ValueNetParams read_value_checkpoint(std::istream& is) {
  const KvReader reader(is);
  if (reader.size() != ValueNetParams::kCount) {
    throw ConfigError("value checkpoint: expected exactly 32 parameters");
  }
  ValueNetParams p;
  Eigen::MatrixXd w_in(8, 2), b_hidden(8, 1), w_out(1, 8);
  reader.read_matrix("w_in", w_in);
  reader.read_matrix("b_hidden", b_hidden);
  reader.read_matrix("w_out", w_out);
  p.w_in = w_in;
  p.b_hidden = b_hidden;
  p.w_out = w_out;
  return p;
}

}  // namespace pppo::baseline
