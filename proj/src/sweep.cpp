// SPDX-License-Identifier: Apache-2.0
#include "foliage_link/sweep.hpp"

#include <cmath>
#include <string>

namespace foliage_link {

std::string_view to_string(SweepVariable v) noexcept {
  switch (v) {
    case SweepVariable::Delta: return "delta";
    case SweepVariable::FoliageHeight: return "h_f_m";
    case SweepVariable::Distance: return "d_km";
    case SweepVariable::FrequencyMHz: return "f_mhz";
  }
  return "?";
}

SweepVariable parse_sweep_variable(std::string_view name) {
  if (name == "delta") return SweepVariable::Delta;
  if (name == "h_f_m" || name == "foliage-height") return SweepVariable::FoliageHeight;
  if (name == "d_km" || name == "distance") return SweepVariable::Distance;
  if (name == "f_mhz" || name == "frequency") return SweepVariable::FrequencyMHz;
  throw Error(ErrorCode::InvalidSpec, "unknown sweep variable '" + std::string(name) + "'");
}

Preset parse_preset(std::string_view name) {
  if (name == "figure2") return Preset::Figure2;
  if (name == "figure3") return Preset::Figure3;
  if (name == "figure4") return Preset::Figure4;
  throw Error(ErrorCode::UnknownPreset, "unknown preset '" + std::string(name) + "'");
}

namespace {

[[noreturn]] void invalid(const std::string& what) {
  throw Error(ErrorCode::InvalidSpec, "invalid sweep: " + what);
}

// Cover factor of the base geometry for sweeps that hold it fixed.
double fixed_delta(const LinkGeometry<double>& base) {
  LinkGeometry<double> probe = base;
  probe.d_km = 1.0;
  return probe.resolve_delta();
}

}  // namespace

void SweepSpec::validate() const {
  if (!std::isfinite(start) || !std::isfinite(stop)) invalid("start and stop must be finite");
  if (!(start < stop)) invalid("start must be < stop");
  if (steps < 2) invalid("steps must be >= 2");
  if (!(delta_cap > 0.0 && delta_cap < 1.0)) invalid("delta_cap must lie in (0,1)");
  if (variable != SweepVariable::FrequencyMHz && !(f_mhz > 0.0))
    invalid("base frequency f_mhz must be > 0");
  if (variable != SweepVariable::Distance && !(base.d_km > 0.0))
    invalid("base distance d_km must be > 0");

  try {
    switch (variable) {
      case SweepVariable::Delta:
        if (start < 0.0 || stop > delta_cap)
          invalid("delta range must lie in [0, " + format_number(delta_cap) + "]");
        break;
      case SweepVariable::FoliageHeight:
        if (!base.h_m || !(*base.h_m > 0.0)) invalid("foliage height sweep needs h_m > 0");
        if (start < 0.0 || stop > delta_cap * *base.h_m)
          invalid("h_f_m range must lie in [0, " + format_number(delta_cap * *base.h_m) +
                  "]");
        break;
      case SweepVariable::Distance:
      case SweepVariable::FrequencyMHz:
        if (!(start > 0.0)) invalid(std::string(to_string(variable)) + " must be > 0");
        if (!(fixed_delta(base) < 1.0))
          invalid("delta = 1 makes the free-space loss singular");
        break;
    }
  } catch (const Error& e) {
    if (e.code() == ErrorCode::InvalidSpec) throw;
    invalid(e.what());
  }
}

SweepTable run_sweep(const SweepSpec& spec) {
  spec.validate();

  const Eigen::Index n = spec.steps;
  SweepTable table;
  table.variable = spec.variable;
  table.x = Eigen::ArrayXd::LinSpaced(n, spec.start, spec.stop);
  table.x(0) = spec.start;
  table.x(n - 1) = spec.stop;
  for (auto* column : {&table.delta, &table.d_f_m, &table.d_fsp_m, &table.l_foliage_db,
                       &table.l_fsp_db, &table.l_total_db})
    column->resize(n);
  table.regime.resize(static_cast<std::size_t>(n));
  table.validity.resize(static_cast<std::size_t>(n));

  for (Eigen::Index i = 0; i < n; ++i) {
    const double x = table.x(i);
    LossBreakdown<double> row;
    try {
      switch (spec.variable) {
        case SweepVariable::Delta:
          row = total_loss(spec.base.d_km, x, spec.f_mhz, spec.model);
          break;
        case SweepVariable::FoliageHeight:
          row = total_loss(split_from_heights(spec.base.d_km, *spec.base.h_m, x),
                           spec.f_mhz, spec.model);
          break;
        case SweepVariable::Distance: {
          LinkGeometry<double> g = spec.base;
          g.d_km = x;
          row = total_loss(g, spec.f_mhz, spec.model);
          break;
        }
        case SweepVariable::FrequencyMHz:
          row = total_loss(spec.base, x, spec.model);
          break;
      }
    } catch (const Error& e) {
      throw Error(e.code(), std::string(e.what()) + " at " +
                                std::string(to_string(spec.variable)) + " = " +
                                format_number(x));
    }
    table.delta(i) = row.split.delta;
    table.d_f_m(i) = row.split.d_f_m;
    table.d_fsp_m(i) = row.split.d_fsp_m;
    table.l_foliage_db(i) = row.l_foliage_db;
    table.l_fsp_db(i) = row.l_fsp_db;
    table.l_total_db(i) = row.l_total_db;
    table.regime[static_cast<std::size_t>(i)] = row.foliage.regime;
    table.validity[static_cast<std::size_t>(i)] = row.foliage.validity;
  }
  return table;
}

SweepSpec preset(Preset name) {
  SweepSpec spec;
  spec.f_mhz = 2400.0;
  switch (name) {
    case Preset::Figure2:
    case Preset::Figure3:
      spec.variable = SweepVariable::Delta;
      spec.start = 0.0;
      spec.stop = 0.95;
      spec.steps = 96;
      spec.base = LinkGeometry<double>::with_delta(2.0, 0.0);
      break;
    case Preset::Figure4:
      spec.variable = SweepVariable::FoliageHeight;
      spec.start = 0.0;
      spec.stop = 15.0;
      spec.steps = 16;
      spec.base = LinkGeometry<double>::with_heights(2.0, 30.0, 0.0);
      break;
  }
  return spec;
}

}  // namespace foliage_link
