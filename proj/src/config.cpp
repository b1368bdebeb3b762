#include "liouville/config.hpp"

#include <fstream>
#include <json.hpp>
#include <sstream>

#include "liouville/errors.hpp"

namespace liouville {

namespace {

using nlohmann::json;

void reject_unknown(const json& object, std::initializer_list<const char*> allowed,
                    const std::string& where) {
  for (auto it = object.begin(); it != object.end(); ++it) {
    bool known = false;
    for (const char* key : allowed) known = known || it.key() == key;
    if (!known) fail(ErrorCode::InvalidConfig, "unknown key '" + it.key() + "' in " + where);
  }
}

double number(const json& value, const std::string& where) {
  if (!value.is_number()) fail(ErrorCode::InvalidConfig, where + " must be a number");
  return value.get<double>();
}

PotentialSpec parse_potential(const json& node, const std::string& where) {
  if (!node.is_object()) fail(ErrorCode::InvalidConfig, where + " must be an object");
  reject_unknown(node, {"mean", "harmonics"}, where);
  PotentialSpec p;
  if (node.contains("mean")) p.mean = number(node.at("mean"), where + ".mean");
  if (node.contains("harmonics")) {
    const json& hs = node.at("harmonics");
    if (!hs.is_array()) fail(ErrorCode::InvalidConfig, where + ".harmonics must be an array");
    for (const auto& h : hs) {
      if (!h.is_array() || h.size() != 2)
        fail(ErrorCode::InvalidConfig, where + ".harmonics entries must be [cos, sin] pairs");
      p.harmonics.push_back({number(h[0], where + ".harmonics"), number(h[1], where + ".harmonics")});
    }
  }
  return p;
}

json dump_potential(const PotentialSpec& p) {
  json hs = json::array();
  for (const auto& h : p.harmonics) hs.push_back({h.cos_coeff, h.sin_coeff});
  return {{"mean", p.mean}, {"harmonics", hs}};
}

}  // namespace

MetricSpec parse_metric(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    fail(ErrorCode::InvalidConfig, e.what());
  }
  if (!root.is_object()) fail(ErrorCode::InvalidConfig, "metric config must be an object");
  reject_unknown(root, {"kind", "u1", "u2"}, "metric");
  MetricSpec m;
  if (!root.contains("kind") || !root.at("kind").is_string())
    fail(ErrorCode::InvalidConfig, "metric.kind must be a string");
  const std::string kind = root.at("kind").get<std::string>();
  if (kind == "liouville") m.kind = MetricKind::liouville;
  else if (kind == "revolution") m.kind = MetricKind::revolution;
  else if (kind == "unchecked-test") m.kind = MetricKind::unchecked_test;
  else fail(ErrorCode::InvalidConfig, "unknown metric kind '" + kind + "'");
  if (!root.contains("u1")) fail(ErrorCode::InvalidConfig, "metric.u1 is required");
  m.u1 = parse_potential(root.at("u1"), "u1");
  if (root.contains("u2")) m.u2 = parse_potential(root.at("u2"), "u2");
  return m;
}

MetricSpec load_metric(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::InvalidConfig, "cannot open metric file " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_metric(buffer.str());
}

std::string dump_metric(const MetricSpec& m) {
  json root = {{"kind", to_string(m.kind)}, {"u1", dump_potential(m.u1)}, {"u2", dump_potential(m.u2)}};
  return root.dump(2) + "\n";
}

}  // namespace liouville
