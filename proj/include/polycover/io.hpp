#pragma once

#include "polycover/bodies.hpp"
#include "polycover/construct.hpp"

#include <json.hpp>

#include <string>

namespace polycover::io {

using Json = nlohmann::ordered_json;

/// Parses {"dim": n, "vertices": [[x, ...], ...]}. Malformed JSON reports the
/// line and column; ragged or non-numeric rows are rejected. All failures
/// throw PreconditionError.
Polytope parse_body(const std::string& text, const std::string& source = "<input>");
Polytope read_body(const std::string& path);

Json to_json(const Vec& v);
/// Columns of m as a list of rows.
Json columns_to_json(const Matrix& m);
Json body_to_json(const Polytope& p);
void write_json(const std::string& path, const Json& j);

Json selection_to_json(const NormalSelection& sel);
/// Bodies, epsilon, seed, sample count, per-check flags; the direction log is
/// included when `with_log` is set.
Json counterexample_to_json(const Counterexample& ce, bool with_log);

}  // namespace polycover::io
