#pragma once

// JSON instance files. Every kind is checked against its schema before any
// computation, and unknown fields are rejected with SchemaError.
//
//   {"kind": "tower", "p": 3, "exponents": [2], "sigma": [[4]],
//    "c_bar": [[3]], "d": null}
//   {"kind": "elementary", "p": 3, "summands": [{"mu": 1}, {"poly": [-3, 1], "power": 1}]}
//   {"kind": "descent", "p": 3, "d": 1, "delta": "Z2", "u": [1, 2],
//    "exponents": [1], "sigma": [[1]], "tau": [[[1]], [[2]]],
//    "sections": [{"delta_subgroup": [0, 1], "a": [0], "b": [[0], [0]]}]}
//   {"kind": "observed", "p": 37, "ramhyp_asserted": true,
//    "levels": [{"n": 0, "type": [1]}, {"n": 1, "e": 1}]}

#include <string>
#include <string_view>
#include <variant>

#include "ptower/descent.hpp"
#include "ptower/inference.hpp"
#include "ptower/tower.hpp"

namespace ptower {

using InstanceFile = std::variant<TowerInstance, ElementaryModule, DescentInstance, ObservedTower>;

/// Throws SchemaError for malformed documents; mathematical validation
/// errors (NotAutomorphism, InvalidGroupTable, ...) propagate unchanged.
/// budget caps |𝒢| for descent instances.
InstanceFile parse_instance(std::string_view text, std::uint64_t budget = kDefaultBudget);
InstanceFile load_instance(const std::string& path, std::uint64_t budget = kDefaultBudget);

/// Deterministic, pretty-printed, accepted by parse_instance.
std::string to_json(const InstanceFile& inst);

std::string kind_name(const InstanceFile& inst);

}  // namespace ptower
