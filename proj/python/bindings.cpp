// Python bindings for the photonic PPO core: simulator gates, policy
// circuits, the CartPole environment, PPO primitives and the harness.

#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <random>
#include <sstream>

#include "pppo/baseline.hpp"
#include "pppo/circuit.hpp"
#include "pppo/env.hpp"
#include "pppo/errors.hpp"
#include "pppo/fock.hpp"
#include "pppo/harness.hpp"
#include "pppo/observation.hpp"
#include "pppo/policy.hpp"
#include "pppo/ppo.hpp"

namespace py = pybind11;
using namespace pppo;

PYBIND11_MODULE(_core, m) {
  m.doc() = "Photonic PPO core: Fock-space policy circuits trained with PPO";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<ShapeError>(m, "ShapeError", PyExc_ValueError);
  py::register_exception<GateDomainError>(m, "GateDomainError", PyExc_ValueError);
  py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);

  // ---- common types ----
  py::class_<ObservationPair>(m, "ObservationPair")
      .def(py::init<>())
      .def(py::init<double, double>(), py::arg("pole_angle"), py::arg("angular_velocity"))
      .def_readwrite("pole_angle", &ObservationPair::pole_angle)
      .def_readwrite("angular_velocity", &ObservationPair::angular_velocity)
      .def("__repr__", [](const ObservationPair& o) {
        std::ostringstream os;
        os << "ObservationPair(" << o.pole_angle << ", " << o.angular_velocity << ")";
        return os.str();
      });

  // ---- fock ----
  py::class_<fock::SimConfig>(m, "SimConfig")
      .def(py::init<>())
      .def(py::init([](int modes, int cutoff) {
             fock::SimConfig cfg;
             cfg.modes = modes;
             cfg.cutoff = cutoff;
             cfg.validate();
             return cfg;
           }),
           py::arg("modes"), py::arg("cutoff"))
      .def_readwrite("modes", &fock::SimConfig::modes)
      .def_readwrite("cutoff", &fock::SimConfig::cutoff)
      .def_readwrite("hbar", &fock::SimConfig::hbar)
      .def_readwrite("max_displacement", &fock::SimConfig::max_displacement)
      .def_readwrite("max_squeezing", &fock::SimConfig::max_squeezing)
      .def("dim", &fock::SimConfig::dim);

  py::enum_<fock::GateArity>(m, "GateArity")
      .value("One", fock::GateArity::One)
      .value("Two", fock::GateArity::Two);

  py::class_<fock::GateMatrix>(m, "GateMatrix")
      .def_readonly("entries", &fock::GateMatrix::entries)
      .def_readonly("arity", &fock::GateMatrix::arity);

  py::class_<fock::FockState>(m, "FockState")
      .def_static("vacuum", &fock::FockState::vacuum, py::arg("config"))
      .def_readwrite("amplitudes", &fock::FockState::amplitudes)
      .def_readonly("config", &fock::FockState::config)
      .def("squared_norm", &fock::FockState::squared_norm);

  m.def("annihilation_matrix", &fock::annihilation_matrix, py::arg("cutoff"));
  m.def("matrix_exponential", &fock::matrix_exponential, py::arg("generator"));
  m.def("displacement_gate", &fock::displacement_gate, py::arg("r"), py::arg("phi"),
        py::arg("config"));
  m.def("squeezing_gate", &fock::squeezing_gate, py::arg("r"), py::arg("phi"), py::arg("config"));
  m.def("rotation_gate", &fock::rotation_gate, py::arg("phi"), py::arg("config"));
  m.def("kerr_gate", &fock::kerr_gate, py::arg("kappa"), py::arg("config"));
  m.def("beamsplitter_gate", &fock::beamsplitter_gate, py::arg("theta"), py::arg("phi"),
        py::arg("config"));
  m.def("apply_gate",
        py::overload_cast<const fock::FockState&, const fock::GateMatrix&, int>(&fock::apply_gate),
        py::arg("state"), py::arg("gate"), py::arg("mode"));
  m.def("apply_gate",
        py::overload_cast<const fock::FockState&, const fock::GateMatrix&, int, int>(
            &fock::apply_gate),
        py::arg("state"), py::arg("gate"), py::arg("mode_a"), py::arg("mode_b"));
  m.def("quadrature_expectation", &fock::quadrature_expectation, py::arg("state"), py::arg("mode"),
        py::arg("phi"));
  m.def("mean_photon_number", &fock::mean_photon_number, py::arg("state"), py::arg("mode"));
  m.def("fock_selftest", []() {
    std::ostringstream os;
    const bool ok = fock::selftest(os);
    return py::make_tuple(ok, os.str());
  });

  // ---- circuit ----
  py::enum_<circuit::EncodingVariant>(m, "EncodingVariant")
      .value("SingleEncode", circuit::EncodingVariant::SingleEncode)
      .value("Reupload", circuit::EncodingVariant::Reupload);

  py::class_<circuit::PolicyParams>(m, "PolicyParams")
      .def(py::init<>())
      .def_readwrite("variant", &circuit::PolicyParams::variant)
      .def("to_flat", &circuit::PolicyParams::to_flat)
      .def_static("from_flat", &circuit::PolicyParams::from_flat, py::arg("flat"),
                  py::arg("variant"))
      .def("param_count", [](const circuit::PolicyParams& p) { return circuit::param_count(p); });

  py::class_<circuit::ActionDistribution>(m, "ActionDistribution")
      .def_readonly("p0", &circuit::ActionDistribution::p0)
      .def_readonly("p1", &circuit::ActionDistribution::p1)
      .def_readonly("log_p0", &circuit::ActionDistribution::log_p0)
      .def_readonly("log_p1", &circuit::ActionDistribution::log_p1);

  py::class_<circuit::CircuitOutputs>(m, "CircuitOutputs")
      .def_readonly("p1", &circuit::CircuitOutputs::p1)
      .def_readonly("p2", &circuit::CircuitOutputs::p2)
      .def_readonly("squared_norm", &circuit::CircuitOutputs::squared_norm);

  m.def("feature_transform", &circuit::feature_transform, py::arg("s"));
  m.def("prepare_input", &circuit::prepare_input, py::arg("obs"), py::arg("config"));
  m.def("forward", &circuit::forward, py::arg("obs"), py::arg("params"), py::arg("config"));
  m.def("forward_outputs", &circuit::forward_outputs, py::arg("obs"), py::arg("params"),
        py::arg("config"));
  m.def("policy_distribution", &circuit::policy_distribution, py::arg("p1"), py::arg("p2"),
        py::arg("tau"));
  m.def(
      "init_params",
      [](std::uint64_t seed, int layers, circuit::EncodingVariant variant, double sigma) {
        std::mt19937_64 rng(seed);
        return circuit::init_params(rng, layers, variant, sigma);
      },
      py::arg("seed"), py::arg("layers") = 3,
      py::arg("variant") = circuit::EncodingVariant::SingleEncode, py::arg("sigma") = 0.05);
  m.def("policy_checkpoint", &circuit::checkpoint_string, py::arg("params"));

  // ---- env ----
  py::class_<env::CartPoleState>(m, "CartPoleState")
      .def(py::init<>())
      .def_readwrite("cart_position", &env::CartPoleState::cart_position)
      .def_readwrite("cart_velocity", &env::CartPoleState::cart_velocity)
      .def_readwrite("pole_angle", &env::CartPoleState::pole_angle)
      .def_readwrite("pole_angular_velocity", &env::CartPoleState::pole_angular_velocity)
      .def_readwrite("step_count", &env::CartPoleState::step_count);

  py::enum_<env::DoneReason>(m, "DoneReason")
      .value("NoneYet", env::DoneReason::None)
      .value("Angle", env::DoneReason::Angle)
      .value("Position", env::DoneReason::Position)
      .value("Horizon", env::DoneReason::Horizon);

  py::class_<env::StepResult>(m, "StepResult")
      .def_readonly("state", &env::StepResult::state)
      .def_readonly("observation", &env::StepResult::observation)
      .def_readonly("reward", &env::StepResult::reward)
      .def_readonly("done", &env::StepResult::done)
      .def_readonly("done_reason", &env::StepResult::done_reason);

  m.def(
      "env_reset",
      [](std::uint64_t seed) {
        std::mt19937_64 rng(seed);
        return env::reset_state(rng);
      },
      py::arg("seed"));
  m.def("env_step", &env::step, py::arg("state"), py::arg("action"),
        py::arg("horizon") = env::kDefaultHorizon);
  m.def("restrict", &env::restrict, py::arg("state"));

  // ---- ppo ----
  py::class_<ppo::Hyperparameters>(m, "Hyperparameters")
      .def(py::init<>())
      .def_readwrite("gamma", &ppo::Hyperparameters::gamma)
      .def_readwrite("lambda_", &ppo::Hyperparameters::lambda)
      .def_readwrite("epsilon", &ppo::Hyperparameters::epsilon)
      .def_readwrite("beta", &ppo::Hyperparameters::beta)
      .def_readwrite("c2", &ppo::Hyperparameters::c2)
      .def_readwrite("alpha", &ppo::Hyperparameters::alpha)
      .def_readwrite("tau", &ppo::Hyperparameters::tau)
      .def_readwrite("lr_policy", &ppo::Hyperparameters::lr_policy)
      .def_readwrite("lr_value", &ppo::Hyperparameters::lr_value)
      .def_readwrite("minibatch", &ppo::Hyperparameters::minibatch)
      .def_readwrite("epochs", &ppo::Hyperparameters::epochs)
      .def_readwrite("horizon", &ppo::Hyperparameters::horizon)
      .def_readwrite("memory", &ppo::Hyperparameters::memory)
      .def_readwrite("advantage_norm", &ppo::Hyperparameters::advantage_norm);

  m.def(
      "discounted_returns",
      [](const std::vector<double>& rewards, double gamma) {
        return ppo::discounted_returns(rewards, gamma);
      },
      py::arg("rewards"), py::arg("gamma"));
  m.def(
      "gae_advantages",
      [](const std::vector<double>& rewards, const std::vector<double>& values, double bootstrap,
         double gamma, double lambda) {
        return ppo::gae_advantages(rewards, values, bootstrap, gamma, lambda);
      },
      py::arg("rewards"), py::arg("values"), py::arg("bootstrap_value"), py::arg("gamma"),
      py::arg("lambda_"));
  m.def("clip_objective", &ppo::clip_objective, py::arg("ratio"), py::arg("advantage"),
        py::arg("epsilon"));
  m.def("kl_categorical", &ppo::kl_categorical, py::arg("p_new"), py::arg("p_old"));
  m.def("entropy_categorical", &ppo::entropy_categorical, py::arg("p"));
  m.def("finite_difference_gradient", &ppo::finite_difference_gradient, py::arg("f"), py::arg("x"),
        py::arg("h") = 1e-4);

  // ---- baseline ----
  m.def(
      "init_classical_flat",
      [](std::uint64_t seed) {
        std::mt19937_64 rng(seed);
        return baseline::init_classical(rng).to_flat();
      },
      py::arg("seed"));
  m.def(
      "init_value_flat",
      [](std::uint64_t seed) {
        std::mt19937_64 rng(seed);
        return baseline::init_value(rng).to_flat();
      },
      py::arg("seed"));
  m.def(
      "classical_forward",
      [](const ObservationPair& obs, const Eigen::VectorXd& flat, double tau) {
        return baseline::classical_forward(obs, baseline::ClassicalPolicyParams::from_flat(flat),
                                           tau);
      },
      py::arg("obs"), py::arg("flat_params"), py::arg("tau") = 1.0);
  m.def(
      "value_forward",
      [](const ObservationPair& obs, const Eigen::VectorXd& flat) {
        return baseline::value_forward(obs, baseline::ValueNetParams::from_flat(flat));
      },
      py::arg("obs"), py::arg("flat_params"));
  m.attr("CLASSICAL_PARAM_COUNT") = baseline::ClassicalPolicyParams::kCount;
  m.attr("VALUE_PARAM_COUNT") = baseline::ValueNetParams::kCount;

  // ---- harness ----
  py::enum_<harness::PolicyKind>(m, "PolicyKind")
      .value("Classical", harness::PolicyKind::Classical)
      .value("SingleEncode", harness::PolicyKind::SingleEncode)
      .value("Reupload", harness::PolicyKind::Reupload);

  py::enum_<harness::AgentStatus>(m, "AgentStatus")
      .value("Active", harness::AgentStatus::Active)
      .value("FilteredLow", harness::AgentStatus::FilteredLow)
      .value("FilteredHighStart", harness::AgentStatus::FilteredHighStart)
      .value("Completed", harness::AgentStatus::Completed);

  py::class_<harness::ExperimentConfig>(m, "ExperimentConfig")
      .def(py::init<>())
      .def_readwrite("policy_kind", &harness::ExperimentConfig::policy_kind)
      .def_readwrite("layers", &harness::ExperimentConfig::layers)
      .def_readwrite("cutoff", &harness::ExperimentConfig::cutoff)
      .def_readwrite("episodes", &harness::ExperimentConfig::episodes)
      .def_readwrite("seeds", &harness::ExperimentConfig::seeds)
      .def_readwrite("hp", &harness::ExperimentConfig::hp)
      .def_readwrite("filter_enabled", &harness::ExperimentConfig::filter_enabled)
      .def_readwrite("filter_checkpoint", &harness::ExperimentConfig::filter_checkpoint)
      .def_readwrite("window", &harness::ExperimentConfig::window)
      .def_readwrite("output_dir", &harness::ExperimentConfig::output_dir)
      .def_readwrite("checkpoint_interval", &harness::ExperimentConfig::checkpoint_interval)
      .def_readwrite("threads", &harness::ExperimentConfig::threads);

  py::class_<harness::EpisodeStats>(m, "EpisodeStats")
      .def_readonly("reward", &harness::EpisodeStats::reward)
      .def_readonly("policy_loss", &harness::EpisodeStats::policy_loss)
      .def_readonly("clip_term", &harness::EpisodeStats::clip_term)
      .def_readonly("kl_term", &harness::EpisodeStats::kl_term)
      .def_readonly("entropy_term", &harness::EpisodeStats::entropy_term)
      .def_readonly("l2_term", &harness::EpisodeStats::l2_term)
      .def_readonly("value_loss", &harness::EpisodeStats::value_loss)
      .def_readonly("min_state_norm", &harness::EpisodeStats::min_state_norm);

  py::class_<harness::AgentRecord>(m, "AgentRecord")
      .def_readonly("seed", &harness::AgentRecord::seed)
      .def_readonly("episodes", &harness::AgentRecord::episodes)
      .def_readonly("status", &harness::AgentRecord::status)
      .def_readonly("error", &harness::AgentRecord::error)
      .def("rewards", &harness::AgentRecord::rewards)
      .def("surviving", &harness::AgentRecord::surviving);

  py::class_<harness::AggregateCurves>(m, "AggregateCurves")
      .def_readonly("n_surviving", &harness::AggregateCurves::n_surviving)
      .def_readonly("mean_reward", &harness::AggregateCurves::mean_reward)
      .def_readonly("std_reward", &harness::AggregateCurves::std_reward)
      .def_readonly("mean_moving_avg", &harness::AggregateCurves::mean_moving_avg)
      .def_readonly("std_moving_avg", &harness::AggregateCurves::std_moving_avg);

  py::class_<harness::ExperimentResult>(m, "ExperimentResult")
      .def_readonly("records", &harness::ExperimentResult::records)
      .def_property_readonly("aggregates",
                             [](const harness::ExperimentResult& r) -> py::object {
                               if (!r.aggregates.has_value()) return py::none();
                               return py::cast(*r.aggregates);
                             })
      .def_readonly("wall_seconds", &harness::ExperimentResult::wall_seconds);

  m.def("run_agent", &harness::run_agent, py::arg("config"), py::arg("seed"),
        py::call_guard<py::gil_scoped_release>());
  m.def("run_experiment", &harness::run_experiment, py::arg("config"),
        py::call_guard<py::gil_scoped_release>());
  m.def(
      "moving_average",
      [](const std::vector<double>& values, int window) {
        return harness::moving_average(values, window);
      },
      py::arg("values"), py::arg("window") = 20);
  m.def("apply_filters", &harness::apply_filters, py::arg("records"),
        py::arg("checkpoint_episode") = 500, py::arg("window") = 20, py::arg("threshold") = 100.0);
  m.def("aggregate", &harness::aggregate, py::arg("records"), py::arg("window") = 20);

  m.attr("__all__") = py::make_tuple(
      "ObservationPair", "SimConfig", "GateArity", "GateMatrix", "FockState",
      "annihilation_matrix", "matrix_exponential", "displacement_gate", "squeezing_gate",
      "rotation_gate", "kerr_gate", "beamsplitter_gate", "apply_gate", "quadrature_expectation",
      "mean_photon_number", "fock_selftest", "EncodingVariant", "PolicyParams",
      "ActionDistribution", "CircuitOutputs", "feature_transform", "prepare_input", "forward",
      "forward_outputs", "policy_distribution", "init_params", "policy_checkpoint",
      "CartPoleState", "DoneReason", "StepResult", "env_reset", "env_step", "restrict",
      "Hyperparameters", "discounted_returns", "gae_advantages", "clip_objective",
      "kl_categorical", "entropy_categorical", "finite_difference_gradient",
      "init_classical_flat", "init_value_flat", "classical_forward", "value_forward",
      "CLASSICAL_PARAM_COUNT", "VALUE_PARAM_COUNT", "PolicyKind", "AgentStatus",
      "ExperimentConfig", "EpisodeStats", "AgentRecord", "AggregateCurves", "ExperimentResult",
      "run_agent", "run_experiment", "moving_average", "apply_filters", "aggregate",
      "ConfigError", "ShapeError", "GateDomainError", "NumericalError");
}
