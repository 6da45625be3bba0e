// SPDX-License-Identifier: Apache-2.0
#ifndef FOLIAGE_LINK_SWEEP_HPP
#define FOLIAGE_LINK_SWEEP_HPP

#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "foliage_link/propagation.hpp"

namespace foliage_link {

enum class SweepVariable { Delta, FoliageHeight, Distance, FrequencyMHz };

std::string_view to_string(SweepVariable v) noexcept;
/// Accepts "delta", "h_f_m" / "foliage-height", "d_km" / "distance",
/// "f_mhz" / "frequency". Throws InvalidSpec otherwise.
SweepVariable parse_sweep_variable(std::string_view name);

enum class Preset { Figure2, Figure3, Figure4 };

/// Accepts "figure2", "figure3", "figure4". Throws UnknownPreset otherwise.
Preset parse_preset(std::string_view name);

struct SweepSpec {
  SweepVariable variable = SweepVariable::Delta;
  double start = 0.0;
  double stop = 0.0;
  int steps = 2;
  /// Fixes every parameter that is not swept. The swept one is ignored.
  LinkGeometry<double> base{};
  double f_mhz = 0.0;
  /// Upper limit on the cover factor reached by Delta and FoliageHeight sweeps.
  double delta_cap = 0.95;
  ModelParams<double> model{};

  /// Throws InvalidSpec naming the violated rule.
  void validate() const;
};

/// Column-major sweep result: one entry per evaluation point, ascending x.
struct SweepTable {
  SweepVariable variable = SweepVariable::Delta;
  Eigen::ArrayXd x;
  Eigen::ArrayXd delta;
  Eigen::ArrayXd d_f_m;
  Eigen::ArrayXd d_fsp_m;
  Eigen::ArrayXd l_foliage_db;
  Eigen::ArrayXd l_fsp_db;
  Eigen::ArrayXd l_total_db;
  std::vector<Regime> regime;
  std::vector<Validity> validity;

  Eigen::Index rows() const noexcept { return x.size(); }
};

SweepTable run_sweep(const SweepSpec& spec);

SweepSpec preset(Preset name);

}  // namespace foliage_link

#endif  // FOLIAGE_LINK_SWEEP_HPP
