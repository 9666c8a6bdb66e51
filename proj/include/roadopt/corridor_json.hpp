#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "roadopt/bilevel.hpp"
#include "roadopt/geometry.hpp"
#include "roadopt/terrain.hpp"

namespace roadopt {

/// Malformed input file; message carries the line or field at fault.
class ParseError : public std::runtime_error {
 public:
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

namespace jsondetail {

using nlohmann::json;
using ordered_json = nlohmann::ordered_json;

inline void reject_unknown_keys(const json& obj, const std::string& path,
                                std::initializer_list<const char*> allowed) {
  for (const auto& item : obj.items()) {
    bool known = false;
    for (const char* key : allowed) {
      if (item.key() == key) {
        known = true;
        break;
      }
    }
    if (!known) {
      throw ParseError(path + ": unknown key \"" + item.key() + "\"");
    }
  }
}

inline const json& require(const json& obj, const std::string& path, const char* key) {
  const auto it = obj.find(key);
  if (it == obj.end()) {
    throw ParseError(path + ": missing key \"" + key + "\"");
  }
  return *it;
}

inline double number(const json& j, const std::string& path) {
  if (!j.is_number()) {
    throw ParseError(path + ": expected a number");
  }
  const double v = j.get<double>();
  if (!std::isfinite(v)) {
    throw ParseError(path + ": non-finite number");
  }
  return v;
}

inline Vec2 point(const json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 2) {
    throw ParseError(path + ": expected [x, y]");
  }
  return {number(j[0], path + "[0]"), number(j[1], path + "[1]")};
}

inline std::size_t index(const json& j, const std::string& path) {
  if (!j.is_number_unsigned()) {
    throw ParseError(path + ": expected a nonnegative integer");
  }
  return j.get<std::size_t>();
}

inline VAlignConfig parse_valign(const json& j, const std::string& path) {
  if (!j.is_object()) {
    throw ParseError(path + ": expected an object");
  }
  reject_unknown_keys(j, path, {"segments", "knots", "g_lo", "g_hi", "p", "q", "haul", "width",
                                "borrow", "waste", "fix_ends"});
  VAlignConfig cfg;
  if (j.contains("segments")) {
    cfg.segments = index(j["segments"], path + ".segments");
  }
  if (j.contains("knots")) {
    std::vector<std::size_t> knots;
    for (std::size_t k = 0; k < j["knots"].size(); ++k) {
      knots.push_back(index(j["knots"][k], path + ".knots[" + std::to_string(k) + "]"));
    }
    cfg.knots = std::move(knots);
  }
  cfg.grade_lo = number(require(j, path, "g_lo"), path + ".g_lo");
  cfg.grade_hi = number(require(j, path, "g_hi"), path + ".g_hi");
  cfg.cut_cost = number(require(j, path, "p"), path + ".p");
  cfg.fill_cost = number(require(j, path, "q"), path + ".q");
  cfg.haul_cost = number(require(j, path, "haul"), path + ".haul");
  cfg.road_width = number(require(j, path, "width"), path + ".width");
  const auto parse_pits = [&](const char* key, std::vector<Pit>& pits) {
    if (!j.contains(key)) return;
    const json& arr = j[key];
    if (!arr.is_array()) {
      throw ParseError(path + "." + key + ": expected an array");
    }
    for (std::size_t k = 0; k < arr.size(); ++k) {
      const std::string p = path + "." + key + "[" + std::to_string(k) + "]";
      reject_unknown_keys(arr[k], p, {"at", "cost", "cap"});
      Pit pit;
      pit.access_section = index(require(arr[k], p, "at"), p + ".at");
      pit.unit_cost = number(require(arr[k], p, "cost"), p + ".cost");
      pit.capacity = number(require(arr[k], p, "cap"), p + ".cap");
      pits.push_back(pit);
    }
  };
  parse_pits("borrow", cfg.borrow);
  parse_pits("waste", cfg.waste);
  if (j.contains("fix_ends")) {
    if (!j["fix_ends"].is_boolean()) {
      throw ParseError(path + ".fix_ends: expected a boolean");
    }
    cfg.fix_ends = j["fix_ends"].get<bool>();
  }
  return cfg;
}

inline std::size_t line_of_offset(const std::string& text, std::size_t byte) {
  std::size_t line = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') ++line;
  }
  return line;
}

}  // namespace jsondetail

/// Parses and validates a corridor file. Unknown keys are rejected.
inline Corridor load_corridor(const std::string& text) {
  using jsondetail::json;
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError("line " + std::to_string(jsondetail::line_of_offset(text, e.byte)) + ": " +
                     e.what());
  }
  if (!j.is_object()) {
    throw ParseError("corridor: expected a JSON object");
  }
  jsondetail::reject_unknown_keys(
      j, "corridor", {"start", "end", "r_min", "boxes", "valign", "stations", "initial"});

  Corridor c;
  c.start_point = jsondetail::point(jsondetail::require(j, "corridor", "start"), "start");
  c.end_point = jsondetail::point(jsondetail::require(j, "corridor", "end"), "end");
  c.r_min = jsondetail::number(jsondetail::require(j, "corridor", "r_min"), "r_min");

  const json& boxes = jsondetail::require(j, "corridor", "boxes");
  if (!boxes.is_array()) {
    throw ParseError("boxes: expected an array");
  }
  for (std::size_t b = 0; b < boxes.size(); ++b) {
    const std::string path = "boxes[" + std::to_string(b) + "]";
    jsondetail::reject_unknown_keys(boxes[b], path, {"lo", "hi"});
    Box box;
    box.lo = jsondetail::point(jsondetail::require(boxes[b], path, "lo"), path + ".lo");
    box.hi = jsondetail::point(jsondetail::require(boxes[b], path, "hi"), path + ".hi");
    c.boxes.push_back(box);
  }

  c.design = jsondetail::parse_valign(jsondetail::require(j, "corridor", "valign"), "valign");

  const json& stations = jsondetail::require(j, "corridor", "stations");
  if (!stations.is_array()) {
    throw ParseError("stations: expected an array");
  }
  for (std::size_t s = 0; s < stations.size(); ++s) {
    const std::string path = "stations[" + std::to_string(s) + "]";
    jsondetail::reject_unknown_keys(stations[s], path, {"base", "left", "right", "samples"});
    Station st;
    st.index = s;
    st.base_point = jsondetail::point(jsondetail::require(stations[s], path, "base"), path + ".base");
    st.left_end = jsondetail::point(jsondetail::require(stations[s], path, "left"), path + ".left");
    st.right_end =
        jsondetail::point(jsondetail::require(stations[s], path, "right"), path + ".right");
    const json& samples = jsondetail::require(stations[s], path, "samples");
    if (!samples.is_array()) {
      throw ParseError(path + ".samples: expected an array");
    }
    for (std::size_t k = 0; k < samples.size(); ++k) {
      const std::string sp = path + ".samples[" + std::to_string(k) + "]";
      jsondetail::reject_unknown_keys(samples[k], sp, {"offset", "elev"});
      GroundSample sample;
      sample.lateral_offset =
          jsondetail::number(jsondetail::require(samples[k], sp, "offset"), sp + ".offset");
      sample.elevation = jsondetail::number(jsondetail::require(samples[k], sp, "elev"), sp + ".elev");
      st.samples.push_back(sample);
    }
    c.stations.push_back(std::move(st));
  }

  if (j.contains("initial")) {
    const json& init = j["initial"];
    jsondetail::reject_unknown_keys(init, "initial", {"points", "radii"});
    InitialAlignment ia;
    const json& pts = jsondetail::require(init, "initial", "points");
    for (std::size_t k = 0; k < pts.size(); ++k) {
      ia.points.push_back(jsondetail::point(pts[k], "initial.points[" + std::to_string(k) + "]"));
    }
    const json& radii = jsondetail::require(init, "initial", "radii");
    for (std::size_t k = 0; k < radii.size(); ++k) {
      ia.radii.push_back(
          jsondetail::number(radii[k], "initial.radii[" + std::to_string(k) + "]"));
    }
    c.initial = std::move(ia);
  }

  validate_corridor(c);
  return c;
}

/// Serializes a corridor with stable key order, so save(load(x)) == x for
/// files this library wrote.
inline std::string save_corridor(const Corridor& c) {
  using jsondetail::ordered_json;
  ordered_json j;
  j["start"] = {c.start_point.x, c.start_point.y};
  j["end"] = {c.end_point.x, c.end_point.y};
  j["r_min"] = c.r_min;
  j["boxes"] = ordered_json::array();
  for (const Box& b : c.boxes) {
    ordered_json jb;
    jb["lo"] = {b.lo.x, b.lo.y};
    jb["hi"] = {b.hi.x, b.hi.y};
    j["boxes"].push_back(jb);
  }
  ordered_json va;
  if (c.design.segments) va["segments"] = *c.design.segments;
  if (c.design.knots) va["knots"] = *c.design.knots;
  va["g_lo"] = c.design.grade_lo;
  va["g_hi"] = c.design.grade_hi;
  va["p"] = c.design.cut_cost;
  va["q"] = c.design.fill_cost;
  va["haul"] = c.design.haul_cost;
  va["width"] = c.design.road_width;
  const auto pit_array = [](const std::vector<Pit>& pits) {
    ordered_json arr = ordered_json::array();
    for (const Pit& p : pits) {
      ordered_json jp;
      jp["at"] = p.access_section;
      jp["cost"] = p.unit_cost;
      jp["cap"] = p.capacity;
      arr.push_back(jp);
    }
    return arr;
  };
  va["borrow"] = pit_array(c.design.borrow);
  va["waste"] = pit_array(c.design.waste);
  va["fix_ends"] = c.design.fix_ends;
  j["valign"] = va;
  j["stations"] = ordered_json::array();
  for (const Station& st : c.stations) {
    ordered_json js;
    js["base"] = {st.base_point.x, st.base_point.y};
    js["left"] = {st.left_end.x, st.left_end.y};
    js["right"] = {st.right_end.x, st.right_end.y};
    js["samples"] = ordered_json::array();
    for (const GroundSample& s : st.samples) {
      ordered_json jsample;
      jsample["offset"] = s.lateral_offset;
      jsample["elev"] = s.elevation;
      js["samples"].push_back(jsample);
    }
    j["stations"].push_back(js);
  }
  if (c.initial) {
    ordered_json init;
    init["points"] = ordered_json::array();
    for (const Vec2& p : c.initial->points) {
      init["points"].push_back({p.x, p.y});
    }
    init["radii"] = c.initial->radii;
    j["initial"] = init;
  }
  return j.dump(2) + "\n";
}

/// Alignment file: {"points": [[x,y],...], "radii": [r_1,...]} where points
/// include the endpoints and radii cover interior points only.
inline Alignment load_alignment(const std::string& text) {
  using jsondetail::json;
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError("line " + std::to_string(jsondetail::line_of_offset(text, e.byte)) + ": " +
                     e.what());
  }
  jsondetail::reject_unknown_keys(j, "alignment", {"points", "radii"});
  const json& pts = jsondetail::require(j, "alignment", "points");
  const json& radii = jsondetail::require(j, "alignment", "radii");
  if (!pts.is_array() || !radii.is_array()) {
    throw ParseError("alignment: points and radii must be arrays");
  }
  if (pts.size() < 2 || radii.size() + 2 != pts.size()) {
    throw ParseError("alignment: need n >= 2 points and n-2 radii");
  }
  Alignment a;
  for (std::size_t k = 0; k < pts.size(); ++k) {
    AlignmentPoint ap;
    ap.point = jsondetail::point(pts[k], "points[" + std::to_string(k) + "]");
    ap.radius = (k == 0 || k + 1 == pts.size())
                    ? 0.0
                    : jsondetail::number(radii[k - 1], "radii[" + std::to_string(k - 1) + "]");
    a.points.push_back(ap);
  }
  validate_alignment(a);
  return a;
}

inline std::string save_alignment(const Alignment& a) {
  using jsondetail::ordered_json;
  ordered_json j;
  j["points"] = ordered_json::array();
  for (const AlignmentPoint& p : a.points) {
    j["points"].push_back({p.point.x, p.point.y});
  }
  j["radii"] = ordered_json::array();
  for (std::size_t i = 1; i + 1 < a.points.size(); ++i) {
    j["radii"].push_back(a.points[i].radius);
  }
  return j.dump(2) + "\n";
}

/// Solver block: {"solver":"det"|"stoch","delta0":..,"gamma":..,"min_step":..,
/// "max_evals":..,"seed":..} plus optional "seeds" for multi-seed comparisons.
struct SolverFileConfig {
  OptimizeConfig optimize;
  std::vector<std::uint64_t> seeds;  // empty = single run
};

inline SolverFileConfig parse_solver_config(const std::string& text) {
  using jsondetail::json;
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError("line " + std::to_string(jsondetail::line_of_offset(text, e.byte)) + ": " +
                     e.what());
  }
  jsondetail::reject_unknown_keys(
      j, "config", {"solver", "delta0", "gamma", "min_step", "max_evals", "seed", "seeds"});
  SolverFileConfig out;
  if (j.contains("solver")) {
    const std::string s = j["solver"].get<std::string>();
    if (s == "det") {
      out.optimize.solver = SolverKind::Deterministic;
    } else if (s == "stoch") {
      out.optimize.solver = SolverKind::Stochastic;
    } else {
      throw ParseError("config.solver: expected \"det\" or \"stoch\"");
    }
  }
  if (j.contains("delta0")) out.optimize.search.delta0 = jsondetail::number(j["delta0"], "config.delta0");
  if (j.contains("gamma")) out.optimize.search.gamma = jsondetail::number(j["gamma"], "config.gamma");
  if (j.contains("min_step"))
    out.optimize.search.min_step = jsondetail::number(j["min_step"], "config.min_step");
  if (j.contains("max_evals"))
    out.optimize.search.max_evals = jsondetail::index(j["max_evals"], "config.max_evals");
  if (j.contains("seed")) {
    out.optimize.seed = j["seed"].get<std::uint64_t>();
    out.optimize.search.seed = out.optimize.seed;
  }
  if (j.contains("seeds")) {
    for (const auto& s : j["seeds"]) {
      out.seeds.push_back(s.get<std::uint64_t>());
    }
  }
  return out;
}

}  // namespace roadopt
