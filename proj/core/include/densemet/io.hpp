#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "densemet/build.hpp"
#include "densemet/cantor.hpp"
#include "densemet/moduli.hpp"
#include "densemet/range_set.hpp"
#include "densemet/space.hpp"

namespace densemet::io {

using Json = nlohmann::ordered_json;

Json read_json(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, const std::string& text);

// {"labels": [...], "matrix": [[...]], "flavor": "metric" | "ultrametric"}
Json to_json(const FiniteMetricSpace& space);
FiniteMetricSpace space_from_json(const Json& j, double tolerance = kDefaultTolerance);

// {"pieces": [[...]], "basepoints": [...]}
Json to_json(const ClopenPartition& partition);
ClopenPartition partition_from_json(const Json& j);

// {"dimension": k, "coordinates": [[...]]}
Json to_json(const Embedding& embedding);
Embedding embedding_from_json(const Json& j);

// {"kind": "explicit", "values": [...]}
// {"kind": "geometric", "scale": s, "ratio": a}
// {"kind": "double_exponential", "base": b}
Json to_json(const RangeSet& range);
RangeSet range_set_from_json(const Json& j);

// {"values": [...], "envelope": {"a": .., "M": ..} | null}
Json to_json(const ShrinkingSequence& s);
ShrinkingSequence sequence_from_json(const Json& j);

Json to_json(const Thresholds& t);
Thresholds thresholds_from_json(const Json& j);

Json to_json(const DoublingReport& r);
Json to_json(const UDReport& r, bool with_matrix = true);
Json to_json(const UPReport& r);
Json to_json(const Classification& c, bool with_matrix = false);
Json to_json(const MetricDistance& m);

/// Doubles that JSON cannot hold (infinity) are written as the string "inf".
Json number(double v);
double number_from(const Json& j);

}  // namespace densemet::io
