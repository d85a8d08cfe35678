#include "densemet/io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace densemet::io {

namespace {

template <typename T>
T field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw Error(ErrorCode::BadInput, std::string("missing field \"") + key + "\"");
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::BadInput, std::string("field \"") + key + "\": " + e.what());
  }
}

}  // namespace

Json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::BadInput, "cannot open " + path.string());
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::BadInput, path.string() + ": " + e.what());
  }
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::BadInput, "cannot write " + path.string());
  out << text;
}

Json number(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

double number_from(const Json& j) {
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return kInfinity;
    if (s == "-inf") return -kInfinity;
    throw Error(ErrorCode::BadInput, "expected a number, got \"" + s + "\"");
  }
  if (!j.is_number()) throw Error(ErrorCode::BadInput, "expected a number");
  return j.get<double>();
}

Json to_json(const FiniteMetricSpace& space) {
  return Json{{"labels", space.labels()}, {"matrix", space.matrix().to_rows()}, {"flavor", to_string(space.flavor())}};
}

FiniteMetricSpace space_from_json(const Json& j, double tolerance) {
  auto labels = field<std::vector<std::string>>(j, "labels");
  const auto rows = field<std::vector<std::vector<double>>>(j, "matrix");
  const auto flavor_name = j.value("flavor", std::string("metric"));
  Flavor flavor;
  if (flavor_name == "metric") {
    flavor = Flavor::metric;
  } else if (flavor_name == "ultrametric") {
    flavor = Flavor::ultrametric;
  } else {
    throw Error(ErrorCode::BadInput, "flavor must be \"metric\" or \"ultrametric\"");
  }
  auto matrix = DistanceMatrix::from_rows(rows);
  if (matrix.size() != labels.size()) throw Error(ErrorCode::LabelMismatch, "label count differs from matrix side");
  return validate(std::move(labels), std::move(matrix), flavor, tolerance);
}

Json to_json(const ClopenPartition& partition) {
  return Json{{"pieces", partition.pieces}, {"basepoints", partition.basepoints}};
}

ClopenPartition partition_from_json(const Json& j) {
  return {field<std::vector<IndexSet>>(j, "pieces"), field<IndexSet>(j, "basepoints")};
}

Json to_json(const Embedding& embedding) {
  return Json{{"dimension", embedding.dimension}, {"coordinates", embedding.coordinates}};
}

Embedding embedding_from_json(const Json& j) {
  Embedding e{field<std::size_t>(j, "dimension"), field<std::vector<std::vector<double>>>(j, "coordinates")};
  for (const auto& c : e.coordinates) {
    if (c.size() != e.dimension) throw Error(ErrorCode::BadInput, "coordinate vector has the wrong dimension");
  }
  return e;
}

Json to_json(const RangeSet& range) {
  switch (range.kind()) {
    case RangeSet::Kind::explicit_list:
      return Json{{"kind", "explicit"}, {"values", range.values()}};
    case RangeSet::Kind::geometric:
      return Json{{"kind", "geometric"}, {"scale", range.scale()}, {"ratio", range.ratio()}};
    case RangeSet::Kind::double_exponential:
      return Json{{"kind", "double_exponential"}, {"base", range.base()}};
  }
  return {};
}

RangeSet range_set_from_json(const Json& j) {
  const auto kind = field<std::string>(j, "kind");
  if (kind == "explicit") return RangeSet::explicit_values(field<std::vector<double>>(j, "values"));
  if (kind == "geometric") return RangeSet::geometric(j.value("scale", 1.0), field<double>(j, "ratio"));
  if (kind == "double_exponential") return RangeSet::double_exponential(field<double>(j, "base"));
  throw Error(ErrorCode::BadRangeSet, "unknown range set kind \"" + kind + "\"");
}

Json to_json(const ShrinkingSequence& s) {
  Json j{{"values", s.values()}, {"envelope", nullptr}};
  if (s.envelope()) j["envelope"] = Json{{"a", s.envelope()->a}, {"M", s.envelope()->M}};
  return j;
}

ShrinkingSequence sequence_from_json(const Json& j) {
  auto values = field<std::vector<double>>(j, "values");
  std::optional<Envelope> env;
  if (j.contains("envelope") && !j.at("envelope").is_null()) {
    const auto& e = j.at("envelope");
    env = Envelope{field<double>(e, "a"), field<double>(e, "M")};
  }
  return ShrinkingSequence(std::move(values), env);
}

Json to_json(const Thresholds& t) {
  return Json{{"beta0", t.beta0},
              {"c_max", t.c_max},
              {"delta_min", t.delta_min},
              {"c_min", t.c_min},
              {"doubling_budget", t.doubling.budget},
              {"doubling_seed", t.doubling.seed},
              {"exhaustive_limit", t.doubling.exhaustive_limit}};
}

Thresholds thresholds_from_json(const Json& j) {
  if (!j.is_object()) throw Error(ErrorCode::BadConfig, "thresholds must be an object");
  Thresholds t;
  t.beta0 = j.value("beta0", t.beta0);
  t.c_max = j.value("c_max", t.c_max);
  t.delta_min = j.value("delta_min", t.delta_min);
  t.c_min = j.value("c_min", t.c_min);
  t.doubling.budget = j.value("doubling_budget", t.doubling.budget);
  t.doubling.seed = j.value("doubling_seed", t.doubling.seed);
  t.doubling.exhaustive_limit = j.value("exhaustive_limit", t.doubling.exhaustive_limit);
  if (!(t.beta0 > 0.0) || !(t.c_max > 0.0) || !(t.delta_min > 0.0) || !(t.c_min > 0.0)) {
    throw Error(ErrorCode::BadConfig, "thresholds must be positive");
  }
  return t;
}

Json to_json(const DoublingReport& r) {
  return Json{{"beta", r.beta}, {"constant", r.constant}, {"witness", r.witness}, {"mode", to_string(r.mode)}};
}

Json to_json(const UDReport& r, bool with_matrix) {
  Json j{{"delta_star", r.delta_star}, {"witness_pair", {r.witness_pair.first, r.witness_pair.second}}};
  if (with_matrix) j["bottleneck_matrix"] = r.bottleneck.to_rows();
  return j;
}

Json to_json(const UPReport& r) {
  return Json{{"c_star", r.c_star},
              {"r_min", r.r_min},
              {"witness", {{"point", r.witness_point}, {"radius", r.witness_radius}}}};
}

Json to_json(const Classification& c, bool with_matrix) {
  return Json{{"type", c.type.bits()},
              {"u1", c.type.u1},
              {"u2", c.type.u2},
              {"u3", c.type.u3},
              {"thresholds", to_json(c.type.thresholds)},
              {"doubling", to_json(c.doubling)},
              {"ud", to_json(c.ud, with_matrix)},
              {"up", to_json(c.up)}};
}

Json to_json(const MetricDistance& m) {
  return Json{{"value", number(m.value)},
              {"kind", m.kind == DistanceKind::sup_metric ? "sup_metric" : "ultra_metric_over_range"}};
}

}  // namespace densemet::io
