#include "schedule_json.hpp"

#include <json.hpp>

#include "errors.hpp"

namespace hypsurf::sequence {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& message) {
  throw DomainError(path + ": " + message);
}

const json& member(const json& obj, const std::string& path, const char* key) {
  if (!obj.is_object()) fail(path, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) fail(path + "." + key, "missing required field");
  return *it;
}

std::int64_t as_integer(const json& v, const std::string& path) {
  if (!v.is_number_integer()) fail(path, "expected an integer");
  return v.get<std::int64_t>();
}

double as_number(const json& v, const std::string& path) {
  if (!v.is_number()) fail(path, "expected a number");
  return v.get<double>();
}

void reject_unknown(const json& obj, const std::string& path, std::initializer_list<const char*> allowed) {
  for (const auto& [key, value] : obj.items()) {
    bool known = false;
    for (const char* a : allowed) known = known || key == a;
    if (!known) fail(path + "." + key, "unknown field");
  }
}

std::vector<std::int64_t> parse_levels(const json& levels) {
  const std::string path = "schedule.levels";
  const json& kind = member(levels, path, "kind");
  if (!kind.is_string()) fail(path + ".kind", "expected a string");
  std::vector<std::int64_t> out;
  if (kind == "explicit") {
    reject_unknown(levels, path, {"kind", "values"});
    const json& values = member(levels, path, "values");
    if (!values.is_array()) fail(path + ".values", "expected an array");
    for (std::size_t i = 0; i < values.size(); ++i) {
      out.push_back(as_integer(values[i], path + ".values[" + std::to_string(i) + "]"));
    }
  } else if (kind == "range") {
    reject_unknown(levels, path, {"kind", "start", "stop", "step"});
    const auto start = as_integer(member(levels, path, "start"), path + ".start");
    const auto stop = as_integer(member(levels, path, "stop"), path + ".stop");
    std::int64_t step = 1;
    if (levels.contains("step")) step = as_integer(levels["step"], path + ".step");
    if (step < 1) fail(path + ".step", "must be >= 1");
    if (stop < start) fail(path + ".stop", "must be >= start");
    if ((stop - start) / step > 10'000'000) fail(path, "range too long");
    for (std::int64_t n = start; n <= stop; n += step) out.push_back(n);
  } else {
    fail(path + ".kind", "expected one of explicit, range");
  }
  if (out.empty()) fail(path, "no levels given");
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (out[i] < 3) fail(path, "levels must be >= 3");
    if (i > 0 && out[i] <= out[i - 1]) fail(path, "levels must be strictly increasing");
  }
  return out;
}

}  // namespace

Schedule parse_schedule_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    fail("schedule", std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) fail("schedule", "expected an object");
  reject_unknown(doc, "schedule", {"name", "levels", "pinch"});

  const json& name = member(doc, "schedule", "name");
  if (!name.is_string()) fail("schedule.name", "expected a string");
  auto levels = parse_levels(member(doc, "schedule", "levels"));

  const std::string path = "schedule.pinch";
  const json& pinch = member(doc, "schedule", "pinch");
  const json& rule_name = member(pinch, path, "rule");
  if (!rule_name.is_string()) fail(path + ".rule", "expected a string");
  const auto rule = pinch_rule_from_string(rule_name.get<std::string>());
  if (!rule) fail(path + ".rule", "expected one of reciprocal, exponential, superexponential, explicit");

  double scale = 1.0;
  std::vector<double> values;
  if (*rule == PinchRule::kExplicit) {
    reject_unknown(pinch, path, {"rule", "values"});
    const json& list = member(pinch, path, "values");
    if (!list.is_array()) fail(path + ".values", "expected an array");
    for (std::size_t i = 0; i < list.size(); ++i) {
      values.push_back(as_number(list[i], path + ".values[" + std::to_string(i) + "]"));
    }
  } else {
    reject_unknown(pinch, path, {"rule", "scale"});
    if (pinch.contains("scale")) scale = as_number(pinch["scale"], path + ".scale");
    if (!(scale > 0.0)) fail(path + ".scale", "must be positive");
  }

  try {
    return Schedule(name.get<std::string>(), std::move(levels), *rule, scale, std::move(values));
  } catch (const DomainError& e) {
    fail(*rule == PinchRule::kExplicit ? path + ".values" : path, e.what());
  }
}

}  // namespace hypsurf::sequence
