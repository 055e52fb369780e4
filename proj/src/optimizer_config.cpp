#include "entroframe/optimizer_config.hpp"

#include <nlohmann/json.hpp>

#include "entroframe/core.hpp"

namespace entroframe {

void OptimizerConfig::validate() const {
  if (restarts < 1) throw InvalidArgument("optimizer: restarts must be >= 1");
  if (max_iters < 1) throw InvalidArgument("optimizer: max_iters must be >= 1");
  if (!(step_tol > 0.0) || !(grad_tol > 0.0) || !(barrier_eps > 0.0))
    throw InvalidArgument("optimizer: tolerances must be positive");
}

std::string OptimizerConfig::hash() const {
  nlohmann::json j = *this;
  return fnv1a_hex(j.dump());
}

void to_json(nlohmann::json& j, const OptimizerConfig& c) {
  j = nlohmann::json{{"restarts", c.restarts},   {"max_iters", c.max_iters},
                     {"step_tol", c.step_tol},   {"grad_tol", c.grad_tol},
                     {"seed", c.seed},           {"barrier_eps", c.barrier_eps}};
}

void from_json(const nlohmann::json& j, OptimizerConfig& c) {
  OptimizerConfig d;
  c.restarts = j.value("restarts", d.restarts);
  c.max_iters = j.value("max_iters", d.max_iters);
  c.step_tol = j.value("step_tol", d.step_tol);
  c.grad_tol = j.value("grad_tol", d.grad_tol);
  c.seed = j.value("seed", d.seed);
  c.barrier_eps = j.value("barrier_eps", d.barrier_eps);
}

}  // namespace entroframe
