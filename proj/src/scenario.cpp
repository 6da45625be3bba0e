// SPDX-License-Identifier: Apache-2.0
#include "foliage_link/scenario.hpp"

#include <cmath>
#include <initializer_list>
#include <limits>
#include <set>

#include "json.hpp"

namespace foliage_link {

using Json = nlohmann::ordered_json;

namespace {

[[noreturn]] void schema_error(const std::string& where, const std::string& what) {
  throw Error(ErrorCode::SchemaError, where + ": " + what);
}

[[noreturn]] void domain_error(const std::string& where, const std::string& what,
                               double value) {
  throw Error(ErrorCode::DomainError,
              where + ": " + what + " (got " + format_number(value) + ")");
}

void reject_unknown_keys(const Json& object, std::initializer_list<std::string_view> allowed,
                         const std::string& where) {
  for (const auto& [key, _] : object.items()) {
    bool known = false;
    for (auto a : allowed) known = known || key == a;
    if (!known) schema_error(where, "unknown field '" + key + "'");
  }
}

const Json& require_object(const Json& parent, const char* key, const std::string& where) {
  if (!parent.contains(key)) schema_error(where, std::string("missing field '") + key + "'");
  const Json& v = parent.at(key);
  if (!v.is_object()) schema_error(where, std::string("field '") + key + "' must be an object");
  return v;
}

double require_number(const Json& parent, const char* key, const std::string& where) {
  if (!parent.contains(key)) schema_error(where, std::string("missing field '") + key + "'");
  const Json& v = parent.at(key);
  if (!v.is_number()) schema_error(where, std::string("field '") + key + "' must be a number");
  return v.get<double>();
}

std::optional<double> optional_number(const Json& parent, const char* key,
                                      const std::string& where) {
  if (!parent.contains(key)) return std::nullopt;
  return require_number(parent, key, where);
}

std::string require_string(const Json& parent, const char* key, const std::string& where) {
  if (!parent.contains(key)) schema_error(where, std::string("missing field '") + key + "'");
  const Json& v = parent.at(key);
  if (!v.is_string()) schema_error(where, std::string("field '") + key + "' must be a string");
  return v.get<std::string>();
}

RadioConfig parse_radio(const Json& j) {
  const std::string where = "radio";
  reject_unknown_keys(j, {"tx_power_dbm", "tx_gain_dbi", "rx_gain_dbi", "rx_sensitivity_dbm",
                          "required_margin_db"},
                      where);
  RadioConfig radio;
  radio.tx_power_dbm = require_number(j, "tx_power_dbm", where);
  radio.tx_gain_dbi = require_number(j, "tx_gain_dbi", where);
  radio.rx_gain_dbi = require_number(j, "rx_gain_dbi", where);
  radio.rx_sensitivity_dbm = require_number(j, "rx_sensitivity_dbm", where);
  radio.required_margin_db = optional_number(j, "required_margin_db", where).value_or(0.0);
  if (radio.required_margin_db < 0.0)
    domain_error(where, "required_margin_db must be >= 0", radio.required_margin_db);
  return radio;
}

ScenarioNode parse_node(const Json& j, std::size_t index, double base_height_m) {
  std::string where = "nodes[" + std::to_string(index) + "]";
  if (!j.is_object()) schema_error(where, "must be an object");
  const std::string id = require_string(j, "id", where);
  where = "node '" + id + "'";
  reject_unknown_keys(j, {"id", "d_km", "h_f_m", "delta"}, where);

  ScenarioNode node;
  node.id = id;
  node.d_km = require_number(j, "d_km", where);
  node.h_f_m = optional_number(j, "h_f_m", where);
  node.delta = optional_number(j, "delta", where);
  if (node.h_f_m && node.delta)
    schema_error(where, "give exactly one of 'h_f_m' or 'delta', not both");
  if (!node.h_f_m && !node.delta) schema_error(where, "missing field 'h_f_m' or 'delta'");

  if (!(node.d_km > 0.0)) domain_error(where, "d_km must be > 0", node.d_km);
  if (node.delta && !(*node.delta >= 0.0 && *node.delta <= 1.0))
    domain_error(where, "delta out of [0,1]", *node.delta);
  if (node.h_f_m && !(*node.h_f_m >= 0.0 && *node.h_f_m <= base_height_m))
    domain_error(where, "h_f_m out of [0, base_height_m]", *node.h_f_m);
  return node;
}

Json scenario_json(const Scenario& s) {
  Json radio = {{"tx_power_dbm", s.radio.tx_power_dbm},
                {"tx_gain_dbi", s.radio.tx_gain_dbi},
                {"rx_gain_dbi", s.radio.rx_gain_dbi},
                {"rx_sensitivity_dbm", s.radio.rx_sensitivity_dbm},
                {"required_margin_db", s.radio.required_margin_db}};
  Json nodes = Json::array();
  for (const auto& n : s.nodes) {
    Json node = {{"id", n.id}, {"d_km", n.d_km}};
    if (n.h_f_m) node["h_f_m"] = *n.h_f_m;
    if (n.delta) node["delta"] = *n.delta;
    nodes.push_back(std::move(node));
  }
  return {{"name", s.name},
          {"frequency_mhz", s.frequency_mhz},
          {"base_height_m", s.base_height_m},
          {"radio", std::move(radio)},
          {"nodes", std::move(nodes)}};
}

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void append_csv_field(std::string& out, std::string_view field) {
  if (field.find_first_of(",\"\r\n") == std::string_view::npos) {
    out += field;
    return;
  }
  out += '"';
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
}

// NaN renders as an empty field.
std::string csv_number(double v) { return std::isnan(v) ? std::string() : format_number(v); }

}  // namespace

Scenario parse_scenario(std::string_view text) {
  Json doc;
  try {
    doc = Json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::ParseError,
                "malformed JSON at byte " + std::to_string(e.byte) + ": " + e.what());
  }
  const std::string where = "scenario";
  if (!doc.is_object()) schema_error(where, "top level must be an object");
  reject_unknown_keys(doc, {"name", "frequency_mhz", "base_height_m", "radio", "nodes"}, where);

  Scenario s;
  s.name = require_string(doc, "name", where);
  s.frequency_mhz = require_number(doc, "frequency_mhz", where);
  s.base_height_m = require_number(doc, "base_height_m", where);
  s.radio = parse_radio(require_object(doc, "radio", where));
  if (!doc.contains("nodes")) schema_error(where, "missing field 'nodes'");
  const Json& nodes = doc.at("nodes");
  if (!nodes.is_array()) schema_error(where, "field 'nodes' must be an array");

  if (!(s.frequency_mhz > 0.0)) domain_error(where, "frequency_mhz must be > 0", s.frequency_mhz);
  if (!(s.base_height_m > 0.0)) domain_error(where, "base_height_m must be > 0", s.base_height_m);

  std::set<std::string> seen;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    ScenarioNode node = parse_node(nodes[i], i, s.base_height_m);
    if (!seen.insert(node.id).second)
      schema_error("node '" + node.id + "'", "duplicate node id");
    s.nodes.push_back(std::move(node));
  }
  return s;
}

std::string scenario_to_json(const Scenario& scenario) {
  return scenario_json(scenario).dump(2) + "\n";
}

std::vector<NodeReport> evaluate_scenario(const Scenario& scenario,
                                          const ModelParams<double>& model) {
  std::vector<NodeReport> reports;
  reports.reserve(scenario.nodes.size());
  for (const auto& node : scenario.nodes) {
    NodeReport r;
    r.id = node.id;
    const auto geometry =
        node.delta ? LinkGeometry<double>::with_delta(node.d_km, *node.delta)
                   : LinkGeometry<double>::with_heights(node.d_km, scenario.base_height_m,
                                                        *node.h_f_m);
    try {
      r.delta = geometry.resolve_delta();
      const auto loss = total_loss(geometry, scenario.frequency_mhz, model);
      r.d_f_m = loss.split.d_f_m;
      r.d_fsp_m = loss.split.d_fsp_m;
      r.l_foliage_db = loss.l_foliage_db;
      r.l_fsp_db = loss.l_fsp_db;
      r.l_total_db = loss.l_total_db;
      r.regime = loss.foliage.regime;
      r.validity = loss.foliage.validity;
      r.margin_db = link_margin(scenario.radio, loss.l_total_db);
      r.required_tx_dbm = required_tx_power(scenario.radio, loss.l_total_db);
      r.link_ok = r.margin_db >= scenario.radio.required_margin_db;
    } catch (const Error& e) {
      r.d_f_m = r.d_fsp_m = r.l_foliage_db = r.l_fsp_db = r.l_total_db = kNaN;
      r.margin_db = r.required_tx_dbm = kNaN;
      r.link_ok = false;
      r.error = std::string(to_string(e.code())) + ": " + e.what();
    }
    reports.push_back(std::move(r));
  }
  return reports;
}

std::string emit_csv(const SweepTable& table) {
  if (table.rows() == 0) throw Error(ErrorCode::EmptyInput, "sweep table has no rows");
  std::string out(kSweepCsvHeader);
  out += '\n';
  for (Eigen::Index i = 0; i < table.rows(); ++i) {
    const auto k = static_cast<std::size_t>(i);
    for (double v : {table.x(i), table.delta(i), table.d_f_m(i), table.d_fsp_m(i),
                     table.l_foliage_db(i), table.l_fsp_db(i), table.l_total_db(i)}) {
      out += csv_number(v);
      out += ',';
    }
    out += to_string(table.regime[k]);
    out += ',';
    out += to_string(table.validity[k]);
    out += '\n';
  }
  return out;
}

std::string emit_csv(std::span<const NodeReport> reports) {
  if (reports.empty()) throw Error(ErrorCode::EmptyInput, "no node reports to emit");
  std::string out(kReportCsvHeader);
  out += '\n';
  for (const auto& r : reports) {
    append_csv_field(out, r.id);
    out += ',';
    for (double v : {r.delta, r.d_f_m, r.d_fsp_m, r.l_foliage_db, r.l_fsp_db, r.l_total_db}) {
      out += csv_number(v);
      out += ',';
    }
    if (!r.error) {
      out += to_string(r.regime);
      out += ',';
      out += to_string(r.validity);
    } else {
      out += ',';
    }
    out += ',';
    out += csv_number(r.margin_db);
    out += ',';
    out += csv_number(r.required_tx_dbm);
    out += ',';
    out += r.link_ok ? "true" : "false";
    out += ',';
    if (r.error) append_csv_field(out, *r.error);
    out += '\n';
  }
  return out;
}

std::string emit_json(std::span<const NodeReport> reports) {
  Json out = Json::array();
  for (const auto& r : reports) {
    if (r.error) {
      out.push_back({{"id", r.id}, {"error", *r.error}});
      continue;
    }
    out.push_back({{"id", r.id},
                   {"delta", r.delta},
                   {"d_f_m", r.d_f_m},
                   {"d_fsp_m", r.d_fsp_m},
                   {"l_foliage_db", r.l_foliage_db},
                   {"l_fsp_db", r.l_fsp_db},
                   {"l_total_db", r.l_total_db},
                   {"regime", to_string(r.regime)},
                   {"validity", to_string(r.validity)},
                   {"margin_db", r.margin_db},
                   {"required_tx_dbm", r.required_tx_dbm},
                   {"link_ok", r.link_ok}});
  }
  return out.dump();
}

std::string emit_json(const SweepTable& table) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < table.rows(); ++i) {
    const auto k = static_cast<std::size_t>(i);
    rows.push_back({{"x", table.x(i)},
                    {"delta", table.delta(i)},
                    {"d_f_m", table.d_f_m(i)},
                    {"d_fsp_m", table.d_fsp_m(i)},
                    {"l_foliage_db", table.l_foliage_db(i)},
                    {"l_fsp_db", table.l_fsp_db(i)},
                    {"l_total_db", table.l_total_db(i)},
                    {"regime", to_string(table.regime[k])},
                    {"validity", to_string(table.validity[k])}});
  }
  return Json{{"variable", to_string(table.variable)}, {"rows", std::move(rows)}}.dump();
}

}  // namespace foliage_link
