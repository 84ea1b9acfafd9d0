#pragma once

// JSON forms of the core types (nlohmann::json, found by ADL).

#include <nlohmann/json.hpp>

#include "hwil/geometry.hpp"
#include "hwil/operators.hpp"
#include "hwil/seq_space.hpp"
#include "hwil/weights.hpp"

namespace hwil {

using Json = nlohmann::json;

/// {n_max, k_max, entries: [[n, k, value], ...]}
void to_json(Json& j, const KoetheMatrix& m);

/// {values: [...], witnesses: [...]}
void to_json(Json& j, const SeqWeight& w);
SeqWeight seq_weight_from_json(const Json& j);

/// [[theta, value], ...]
void to_json(Json& j, const AngularWeight& w);
AngularWeight angular_weight_from_json(const Json& j);

/// {kind, n}
void to_json(Json& j, const Region& r);
Region region_from_json(const Json& j);

/// {dim, entries: [[n, j, re, im, err], ...], certificate?}
void to_json(Json& j, const OperatorMatrix& m);
Json operator_json(const OperatorMatrix& m, const SeqWeight* lam);

}  // namespace hwil
