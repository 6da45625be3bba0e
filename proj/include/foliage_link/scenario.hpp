// SPDX-License-Identifier: Apache-2.0
#ifndef FOLIAGE_LINK_SCENARIO_HPP
#define FOLIAGE_LINK_SCENARIO_HPP

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "foliage_link/link_budget.hpp"
#include "foliage_link/sweep.hpp"

namespace foliage_link {

struct ScenarioNode {
  std::string id;
  double d_km = 0.0;
  std::optional<double> h_f_m;
  std::optional<double> delta;
};

/// A deployment: one gateway at base_height_m above the sensor antennas,
/// a shared radio, and any number of sensor nodes.
struct Scenario {
  std::string name;
  double frequency_mhz = 0.0;
  double base_height_m = 0.0;
  RadioConfig radio;
  std::vector<ScenarioNode> nodes;
};

struct NodeReport {
  std::string id;
  double delta = 0.0;
  double d_f_m = 0.0;
  double d_fsp_m = 0.0;
  double l_foliage_db = 0.0;
  double l_fsp_db = 0.0;
  double l_total_db = 0.0;
  Regime regime = Regime::Zero;
  Validity validity = Validity::InDomain;
  double margin_db = 0.0;
  double required_tx_dbm = 0.0;
  bool link_ok = false;
  /// Set when the node could not be evaluated; the numeric fields are then
  /// NaN except delta, which is kept when it could be resolved.
  std::optional<std::string> error;
};

/// Strict parse: unknown keys, missing keys, wrong types and out-of-domain
/// values all throw (ParseError / SchemaError / DomainError).
Scenario parse_scenario(std::string_view text);

/// Canonical JSON text for a scenario; parse_scenario accepts it back.
std::string scenario_to_json(const Scenario& scenario);

/// One report per node in input order. Per-node failures are recorded in
/// NodeReport::error instead of aborting the run.
std::vector<NodeReport> evaluate_scenario(const Scenario& scenario,
                                          const ModelParams<double>& model = {});

/// Throws EmptyInput when the table has no rows.
std::string emit_csv(const SweepTable& table);
/// Throws EmptyInput when there are no reports.
std::string emit_csv(std::span<const NodeReport> reports);

std::string emit_json(std::span<const NodeReport> reports);
std::string emit_json(const SweepTable& table);

inline constexpr std::string_view kSweepCsvHeader =
    "x,delta,d_f_m,d_fsp_m,l_foliage_db,l_fsp_db,l_total_db,regime,validity";
inline constexpr std::string_view kReportCsvHeader =
    "id,delta,d_f_m,d_fsp_m,l_foliage_db,l_fsp_db,l_total_db,regime,validity,"
    "margin_db,required_tx_dbm,link_ok,error";

}  // namespace foliage_link

#endif  // FOLIAGE_LINK_SCENARIO_HPP
