#include "tvbo/harness.hpp"

#include "tvbo/errors.hpp"

#include <map>

namespace tvbo::presets {

namespace {

const std::map<std::string, std::string>& table() {
    static const std::map<std::string, std::string> presets = {
        {"stationary", R"({
  "T": 300,
  "seeds": [0, 1, 2, 3, 4, 5, 6, 7, 8, 9],
  "output_dir": "out/stationary",
  "environment": {
    "kind": "synthetic_bilevel",
    "regime": "stationary",
    "sigma2": 0.001,
    "alpha": 1.0,
    "input_dim": 1,
    "output_dim": 2
  },
  "grid": {"low": 0.0, "high": 1.0, "resolution": 256, "inner_resolution": 64},
  "algorithms": [
    {
      "kind": "wsparq_bl",
      "kernel": {"family": "matern", "nu": 1.5, "lengthscale": 0.2, "output_scale": 1.0},
      "B": 2.0,
      "delta": 0.1,
      "alpha_tilde": 0.08,
      "beta_denominator": "sigma",
      "query_budget_scale": 1.0,
      "dpp_ground_set": "window"
    },
    {
      "kind": "gp_ucbl",
      "kernel": {"family": "matern", "nu": 1.5, "lengthscale": 0.2, "output_scale": 1.0},
      "B": 2.0,
      "delta": 0.1,
      "beta_denominator": "sigma"
    }
  ]
}
)"},
        {"moderate", R"({
  "T": 300,
  "seeds": [0, 1, 2, 3, 4, 5, 6, 7, 8, 9],
  "output_dir": "out/moderate",
  "environment": {
    "kind": "synthetic_bilevel",
    "regime": "moderate",
    "sigma2": 0.09,
    "alpha": 1.0,
    "input_dim": 1,
    "output_dim": 2
  },
  "grid": {"low": 0.0, "high": 1.0, "resolution": 256, "inner_resolution": 64},
  "algorithms": [
    {
      "kind": "wsparq_bl",
      "kernel": {"family": "matern", "nu": 1.5, "lengthscale": 0.2, "output_scale": 1.0},
      "B": 2.0,
      "delta": 0.1,
      "alpha_tilde": 0.08,
      "beta_denominator": "sigma",
      "query_budget_scale": 1.0,
      "dpp_ground_set": "window"
    },
    {
      "kind": "gp_ucbl",
      "kernel": {"family": "matern", "nu": 1.5, "lengthscale": 0.2, "output_scale": 1.0},
      "B": 2.0,
      "delta": 0.1,
      "beta_denominator": "sigma"
    }
  ]
}
)"},
        {"fast", R"({
  "T": 300,
  "seeds": [0, 1, 2, 3, 4, 5, 6, 7, 8, 9],
  "output_dir": "out/fast",
  "environment": {
    "kind": "synthetic_bilevel",
    "regime": "fast",
    "sigma2": 0.001,
    "alpha": 1.0,
    "input_dim": 1,
    "output_dim": 2
  },
  "grid": {"low": 0.0, "high": 1.0, "resolution": 256, "inner_resolution": 64},
  "algorithms": [
    {
      "kind": "wsparq_bl",
      "kernel": {"family": "matern", "nu": 1.5, "lengthscale": 0.2, "output_scale": 1.0},
      "B": 2.0,
      "delta": 0.1,
      "alpha_tilde": 0.08,
      "beta_denominator": "sigma",
      "query_budget_scale": 1.0,
      "dpp_ground_set": "window"
    },
    {
      "kind": "gp_ucbl",
      "kernel": {"family": "matern", "nu": 1.5, "lengthscale": 0.2, "output_scale": 1.0},
      "B": 2.0,
      "delta": 0.1,
      "beta_denominator": "sigma"
    }
  ]
}
)"},
        {"seqgame", R"({
  "T": 300,
  "seeds": [0, 1, 2, 3, 4, 5, 6, 7, 8, 9],
  "output_dir": "out/seqgame",
  "environment": {
    "kind": "opponent_drift",
    "sigma2": 0.01,
    "alpha": 1.0,
    "input_dim": 1,
    "output_dim": 1,
    "theta0": [1.0, 0.0],
    "lipschitz_g": 1.0,
    "drift_sigma2": 0.01
  },
  "grid": {"low": 0.0, "high": 1.0, "resolution": 64, "inner_resolution": 64},
  "algorithms": [
    {
      "kind": "wsparq_seqgame",
      "kernel": {"family": "squared_exponential", "lengthscale": 0.2, "output_scale": 1.0},
      "B": 2.0,
      "delta": 0.1,
      "alpha_tilde": 0.25,
      "beta_denominator": "sigma",
      "query_budget_scale": 1.0,
      "dpp_ground_set": "window"
    },
    {
      "kind": "gp_ucb",
      "kernel": {"family": "squared_exponential", "lengthscale": 0.2, "output_scale": 1.0},
      "B": 2.0,
      "delta": 0.1,
      "beta_denominator": "sigma"
    },
    {"kind": "hedge", "eta": 0.5},
    {"kind": "exp3", "eta": 0.1, "reward_lo": -3.0, "reward_hi": 0.0}
  ]
}
)"}};
    return presets;
}

} // namespace

std::vector<std::string> names() {
    std::vector<std::string> out;
    for (const auto& [name, text] : table())
        out.push_back(name);
    return out;
}

const std::string& json_text(const std::string& name) {
    const auto& presets = table();
    const auto it = presets.find(name);
    if (it == presets.end())
        throw ConfigError("unknown preset '" + name + "'");
    return it->second;
}

} // namespace tvbo::presets
