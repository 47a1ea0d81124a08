#pragma once

#include "causalmix/bayesnet.hpp"
#include "causalmix/random.hpp"

#include <json.hpp>

#include <iosfwd>
#include <string>
#include <vector>

namespace causalmix {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;

/// Runs the `causalmix` command line. `args` excludes the program name. Returns 0 on success,
/// 1 on a usage error and 2 on a data, parse or I/O error; messages go to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Intervention file accepted by `sample --intervene`. Either explicit mechanisms:
///   {"interventions": [{"target": "X", "retained_parents": ["A"], "cpt": [[0.3, 0.7], [0.5, 0.5]]}]}
/// with one CPT row per configuration of the retained parents (last parent fastest), or random ones:
///   {"random_targets": ["X", "Y"], "cut_prob": 0.5, "dirichlet_alpha": 1.0}
/// Throws ParseError on schema violations.
InterventionSpec parse_intervention_json(const nlohmann::json& j, const DiscreteBayesNet& net, Rng& rng);

}  // namespace causalmix
