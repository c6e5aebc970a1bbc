#pragma once

#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "pmds/code.hpp"
#include "pmds/matroid.hpp"
#include "pmds/randpmds.hpp"

namespace pmds {

/// Key order is insertion order, so dumps are byte-stable.
using Json = nlohmann::ordered_json;

// Every *_from_json throws ParseError on malformed input.

/// {"p", "e", "modulus"}; only the canonical modulus is accepted back.
Json to_json(const Field& f);
Field field_from_json(const Json& j);

/// Integer when e = 1, coefficient list (low to high) otherwise.
Json felt_to_json(const Field& f, Felt a);
Felt felt_from_json(const Field& f, const Json& j);

Json to_json(const ProjPoint& x);
ProjPoint point_from_json(const Field& f, const Json& j);

/// {"field", "rows", "cols", "entries": [[...], ...]}
Json to_json(const Mat& m);
Mat mat_from_json(const Json& j);

/// One row per line, entries separated by spaces, in Field::format syntax.
std::string mat_to_text(const Mat& m);
Mat mat_from_text(const Field& f, std::string_view text);

/// {"field", "k", "s", "localities", "blocks": [[[coords], ...], ...]}
Json to_json(const BlockedPointSet& g);
BlockedPointSet blocked_point_set_from_json(const Json& j);

/// Matrix fields plus "blocks" (block sizes), "localities", "s".
Json to_json(const BlockedMatrix& m);
BlockedMatrix blocked_matrix_from_json(const Json& j);

Json to_json(const RncParam& c);
Json to_json(const Line& l);
Json to_json(const CrossingCircuit& c);
Json to_json(const CircuitLists& lists);

Json to_json(const AdmissibilityVerdict& v);
Json to_json(const PmdsVerdict& v);
Json to_json(const CriterionVerdict& v);

Json to_json(const TrialParams& p);
/// Aggregates and checks; per-trial records when `records` is set.
Json to_json(const TrialReport& r, bool records = true);

/// Throws ParseError with the position on malformed text.
Json parse_json(std::string_view text);

}  // namespace pmds
