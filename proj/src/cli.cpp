// SPDX-License-Identifier: Apache-2.0
#include "foliage_link/cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iterator>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "foliage_link/link_budget.hpp"
#include "foliage_link/propagation.hpp"
#include "foliage_link/scenario.hpp"
#include "foliage_link/sweep.hpp"

namespace foliage_link::cli {

namespace {

constexpr int kDbDecimals = 7;
constexpr const char* kFsplEnv = "FOLIAGE_LINK_FSPL_CONST";

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Format { Table, Csv, Json };

// One flat output record: ordered (name, value) pairs. dB fields print with
// fixed decimals in table form and full precision elsewhere.
struct Field {
  std::string name;
  std::variant<double, std::string, bool> value;
  bool is_db = false;
};
using Record = std::vector<Field>;

std::string table_text(const Field& f) {
  return std::visit(
      [&](const auto& v) -> std::string {
        using V = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<V, double>)
          return f.is_db ? format_fixed(v, kDbDecimals) + " dB" : format_number(v);
        else if constexpr (std::is_same_v<V, bool>)
          return v ? "true" : "false";
        else
          return v;
      },
      f.value);
}

std::string render(const Record& record, Format format) {
  std::string out;
  switch (format) {
    case Format::Table: {
      std::size_t width = 0;
      for (const auto& f : record) width = std::max(width, f.name.size());
      for (const auto& f : record) {
        out += f.name;
        out.append(width + 2 - f.name.size(), ' ');
        out += table_text(f);
        out += '\n';
      }
      break;
    }
    case Format::Csv: {
      for (std::size_t i = 0; i < record.size(); ++i) out += (i ? "," : "") + record[i].name;
      out += '\n';
      for (std::size_t i = 0; i < record.size(); ++i) {
        if (i) out += ',';
        std::visit(
            [&](const auto& v) {
              using V = std::decay_t<decltype(v)>;
              if constexpr (std::is_same_v<V, double>)
                out += format_number(v);
              else if constexpr (std::is_same_v<V, bool>)
                out += v ? "true" : "false";
              else
                out += v;
            },
            record[i].value);
      }
      out += '\n';
      break;
    }
    case Format::Json: {
      nlohmann::ordered_json j = nlohmann::ordered_json::object();
      for (const auto& f : record) std::visit([&](const auto& v) { j[f.name] = v; }, f.value);
      out = j.dump() + "\n";
      break;
    }
  }
  return out;
}

std::string sweep_table_text(const SweepTable& t) {
  std::ostringstream os;
  const std::string x_name(to_string(t.variable));
  const auto pad = [&](const std::string& s, std::size_t w) {
    os << std::string(w > s.size() ? w - s.size() : 1, ' ') << s;
  };
  pad(x_name, 12);
  for (const char* h : {"delta", "d_f_m", "d_fsp_m", "l_foliage_db", "l_fsp_db", "l_total_db"})
    pad(h, 14);
  os << "  regime  validity\n";
  for (Eigen::Index i = 0; i < t.rows(); ++i) {
    const auto k = static_cast<std::size_t>(i);
    pad(format_fixed(t.x(i), 4), 12);
    pad(format_fixed(t.delta(i), 6), 14);
    pad(format_fixed(t.d_f_m(i), 3), 14);
    pad(format_fixed(t.d_fsp_m(i), 3), 14);
    pad(format_fixed(t.l_foliage_db(i), kDbDecimals), 14);
    pad(format_fixed(t.l_fsp_db(i), kDbDecimals), 14);
    pad(format_fixed(t.l_total_db(i), kDbDecimals), 14);
    os << "  " << to_string(t.regime[k]) << std::string(8 - to_string(t.regime[k]).size(), ' ')
       << to_string(t.validity[k]) << '\n';
  }
  return os.str();
}

std::string reports_table_text(const std::vector<NodeReport>& reports) {
  std::ostringstream os;
  std::size_t id_width = 2;
  for (const auto& r : reports) id_width = std::max(id_width, r.id.size());
  const auto left = [&](const std::string& s, std::size_t w) {
    os << s << std::string(w > s.size() ? w - s.size() : 0, ' ');
  };
  const auto right = [&](const std::string& s, std::size_t w) {
    os << std::string(w > s.size() ? w - s.size() : 0, ' ') << s;
  };
  left("id", id_width);
  for (const char* h : {"delta", "l_foliage_db", "l_fsp_db", "l_total_db", "margin_db",
                        "required_tx_dbm"})
    right(h, 16);
  os << "  link_ok\n";
  for (const auto& r : reports) {
    left(r.id, id_width);
    right(format_number(r.delta), 16);
    if (r.error) {
      os << "  error: " << *r.error << '\n';
      continue;
    }
    for (double v : {r.l_foliage_db, r.l_fsp_db, r.l_total_db, r.margin_db, r.required_tx_dbm})
      right(format_fixed(v, kDbDecimals), 16);
    os << "  " << (r.link_ok ? "yes" : "no") << '\n';
  }
  return os.str();
}

Record loss_record(double d_km, double f_mhz, const LossBreakdown<double>& b) {
  return {{"d_km", d_km},
          {"f_mhz", f_mhz},
          {"delta", b.split.delta},
          {"d_f_m", b.split.d_f_m},
          {"d_fsp_m", b.split.d_fsp_m},
          {"l_foliage_db", b.l_foliage_db, true},
          {"l_fsp_db", b.l_fsp_db, true},
          {"l_total_db", b.l_total_db, true},
          {"regime", std::string(to_string(b.foliage.regime))},
          {"validity", std::string(to_string(b.foliage.validity))}};
}

ModelParams<double> model_from_environment() {
  ModelParams<double> model;
  if (const char* raw = std::getenv(kFsplEnv); raw != nullptr && *raw != '\0') {
    try {
      model.fspl_const_db = parse_number(raw);
    } catch (const Error&) {
      throw UsageError(std::string(kFsplEnv) + " is not a number: '" + raw + "'");
    }
    if (!std::isfinite(model.fspl_const_db))
      throw UsageError(std::string(kFsplEnv) + " must be finite");
  }
  return model;
}

// Flags shared by subcommands that describe a link.
struct GeometryFlags {
  std::optional<double> d_km, f_mhz, delta, h_m, h_f_m;

  void add_to(CLI::App* app, bool with_distance = true) {
    if (with_distance) app->add_option("--d-km", d_km, "total path length (km)");
    app->add_option("--f-mhz", f_mhz, "carrier frequency (MHz)");
    app->add_option("--delta", delta, "foliage cover factor in [0,1]");
    app->add_option("--h-m", h_m, "base antenna height above the sensor antenna (m)");
    app->add_option("--h-f-m", h_f_m, "foliage height above the sensor antenna (m)");
  }

  double need(const std::optional<double>& v, const char* flag) const {
    if (!v) throw UsageError(std::string("missing required flag ") + flag);
    return *v;
  }

  /// Geometry with its cover factor from --delta or the --h-m/--h-f-m pair.
  LinkGeometry<double> geometry(double d) const {
    if (h_m.has_value() != h_f_m.has_value())
      throw UsageError("--h-m and --h-f-m must be given together");
    if (!delta && !h_m) throw UsageError("give --delta or both --h-m and --h-f-m");
    return {d, h_m, h_f_m, delta};
  }
};

struct RadioFlags {
  std::optional<double> tx_dbm, sensitivity_dbm;
  double tx_gain = 0.0, rx_gain = 0.0, margin_db = 0.0;

  void add_to(CLI::App* app) {
    app->add_option("--tx-dbm", tx_dbm, "transmit power (dBm)");
    app->add_option("--tx-gain", tx_gain, "transmit antenna gain (dBi)");
    app->add_option("--rx-gain", rx_gain, "receive antenna gain (dBi)");
    app->add_option("--sensitivity-dbm", sensitivity_dbm, "receiver sensitivity (dBm)");
    app->add_option("--margin-db", margin_db, "required fade margin (dB)");
  }

  RadioConfig radio() const {
    if (!tx_dbm) throw UsageError("missing required flag --tx-dbm");
    if (!sensitivity_dbm) throw UsageError("missing required flag --sensitivity-dbm");
    return {*tx_dbm, tx_gain, rx_gain, *sensitivity_dbm, margin_db};
  }
};

struct Output {
  std::string format_name = "table";
  std::optional<std::string> path;

  Format format() const {
    if (format_name == "csv") return Format::Csv;
    if (format_name == "json") return Format::Json;
    return Format::Table;
  }
};

void write_output(const Output& output, const std::string& text, std::ostream& out) {
  if (!output.path) {
    out << text;
    return;
  }
  std::ofstream file(*output.path, std::ios::binary);
  if (!file) throw Error(ErrorCode::IoError, "cannot open output file " + *output.path);
  file << text;
  if (!file) throw Error(ErrorCode::IoError, "failed writing output file " + *output.path);
}

std::string read_file(const std::string& path) {
  std::ifstream file(path, std::ios::binary);
  if (!file) throw Error(ErrorCode::IoError, "cannot read scenario file " + path);
  return {std::istreambuf_iterator<char>(file), std::istreambuf_iterator<char>()};
}

}  // namespace

int run(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Foliage-aware link budget planning for IoT sensor links", "foliage-link"};
  app.require_subcommand(1);
  app.fallthrough();

  Output output;
  app.add_option("--format", output.format_name, "output format")
      ->check(CLI::IsMember({"table", "csv", "json"}));
  app.add_option("--out", output.path, "write results to this file instead of stdout");

  // loss
  GeometryFlags loss_flags;
  auto* loss_cmd = app.add_subcommand("loss", "foliage, free-space and total loss of one link");
  loss_flags.add_to(loss_cmd);

  // sweep
  GeometryFlags sweep_flags;
  std::optional<std::string> sweep_preset, sweep_var;
  std::optional<double> sweep_start, sweep_stop, sweep_cap;
  std::optional<int> sweep_steps;
  auto* sweep_cmd = app.add_subcommand("sweep", "one-dimensional parameter sweep");
  sweep_cmd->add_option("--preset", sweep_preset, "figure2 | figure3 | figure4");
  sweep_cmd->add_option("--var", sweep_var, "delta | h_f_m | d_km | f_mhz");
  sweep_cmd->add_option("--start", sweep_start);
  sweep_cmd->add_option("--stop", sweep_stop);
  sweep_cmd->add_option("--steps", sweep_steps, "number of points, endpoints included");
  sweep_cmd->add_option("--delta-cap", sweep_cap, "largest cover factor reached (default 0.95)");
  sweep_flags.add_to(sweep_cmd);

  // budget
  GeometryFlags budget_flags;
  RadioFlags radio_flags;
  std::string solve;
  double budget_cap = 0.95;
  auto* budget_cmd = app.add_subcommand("budget", "solve for range, cover factor or foliage height");
  budget_cmd->add_option("--solve", solve, "range | delta | height")
      ->required()
      ->check(CLI::IsMember({"range", "delta", "height"}));
  budget_cmd->add_option("--delta-cap", budget_cap, "upper limit for --solve delta");
  budget_flags.add_to(budget_cmd);
  radio_flags.add_to(budget_cmd);

  // scenario
  std::string scenario_file;
  auto* scenario_cmd = app.add_subcommand("scenario", "evaluate every node of a deployment file");
  scenario_cmd->add_option("--file", scenario_file, "scenario JSON")->required();

  // bounds
  double delta_min = 0.0, delta_max = 0.0, sigma = 0.0;
  auto* bounds_cmd = app.add_subcommand("bounds", "admissible cover-factor band");
  bounds_cmd->add_option("--delta-min", delta_min)->required();
  bounds_cmd->add_option("--delta-max", delta_max)->required();
  bounds_cmd->add_option("--sigma", sigma, "fractional perturbation, e.g. 0.5")->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  }

  try {
    const ModelParams<double> model = model_from_environment();
    const Format format = output.format();
    std::string text;

    if (*loss_cmd) {
      const double d = loss_flags.need(loss_flags.d_km, "--d-km");
      const double f = loss_flags.need(loss_flags.f_mhz, "--f-mhz");
      const auto geometry = loss_flags.geometry(d);
      text = render(loss_record(d, f, total_loss(geometry, f, model)), format);
    } else if (*sweep_cmd) {
      SweepSpec spec;
      const bool manual = sweep_var || sweep_start || sweep_stop || sweep_steps;
      if (sweep_preset) {
        if (manual || sweep_flags.d_km || sweep_flags.f_mhz || sweep_flags.delta ||
            sweep_flags.h_m || sweep_flags.h_f_m || sweep_cap)
          throw UsageError("--preset cannot be combined with other sweep flags");
        try {
          spec = preset(parse_preset(*sweep_preset));
        } catch (const Error& e) {
          throw UsageError(e.what());
        }
      } else {
        if (!sweep_var || !sweep_start || !sweep_stop || !sweep_steps)
          throw UsageError("give --preset or all of --var --start --stop --steps");
        try {
          spec.variable = parse_sweep_variable(*sweep_var);
        } catch (const Error& e) {
          throw UsageError(e.what());
        }
        spec.start = *sweep_start;
        spec.stop = *sweep_stop;
        spec.steps = *sweep_steps;
        if (sweep_cap) spec.delta_cap = *sweep_cap;
        const auto& g = sweep_flags;
        switch (spec.variable) {
          case SweepVariable::Delta:
            spec.base = LinkGeometry<double>::with_delta(g.need(g.d_km, "--d-km"), 0.0);
            spec.f_mhz = g.need(g.f_mhz, "--f-mhz");
            break;
          case SweepVariable::FoliageHeight:
            spec.base = LinkGeometry<double>::with_heights(g.need(g.d_km, "--d-km"),
                                                           g.need(g.h_m, "--h-m"), 0.0);
            spec.f_mhz = g.need(g.f_mhz, "--f-mhz");
            break;
          case SweepVariable::Distance:
            spec.base = g.geometry(1.0);
            spec.f_mhz = g.need(g.f_mhz, "--f-mhz");
            break;
          case SweepVariable::FrequencyMHz:
            spec.base = g.geometry(g.need(g.d_km, "--d-km"));
            break;
        }
      }
      spec.model = model;
      const SweepTable table = run_sweep(spec);
      switch (format) {
        case Format::Table: text = sweep_table_text(table); break;
        case Format::Csv: text = emit_csv(table); break;
        case Format::Json: text = emit_json(table) + "\n"; break;
      }
    } else if (*budget_cmd) {
      const RadioConfig radio = radio_flags.radio();
      SolverOptions options;
      options.model = model;
      const auto& g = budget_flags;
      SolveResult result;
      std::string value_name;
      if (solve == "range") {
        if (g.d_km) throw UsageError("--d-km is the unknown for --solve range");
        const double delta = g.geometry(1.0).resolve_delta();
        result = max_range(radio, delta, g.need(g.f_mhz, "--f-mhz"), options);
        value_name = "d_km";
      } else if (solve == "delta") {
        if (g.delta || g.h_f_m) throw UsageError("the cover factor is the unknown for --solve delta");
        result = max_foliage_factor(radio, g.need(g.d_km, "--d-km"), g.need(g.f_mhz, "--f-mhz"),
                                    budget_cap, options);
        value_name = "delta";
      } else {
        if (g.delta || g.h_f_m) throw UsageError("the foliage height is the unknown for --solve height");
        result = max_foliage_height(radio, g.need(g.d_km, "--d-km"), g.need(g.h_m, "--h-m"),
                                    g.need(g.f_mhz, "--f-mhz"), options);
        value_name = "h_f_m";
      }
      const Record record{{"solve", solve},
                          {value_name, result.value},
                          {"budget_db", result.target_loss_db, true},
                          {"achieved_loss_db", result.achieved_loss_db, true},
                          {"iterations", static_cast<double>(result.iterations)},
                          {"converged", result.converged},
                          {"all_feasible", result.all_feasible}};
      text = render(record, format);
    } else if (*scenario_cmd) {
      const Scenario scenario = parse_scenario(read_file(scenario_file));
      const auto reports = evaluate_scenario(scenario, model);
      switch (format) {
        case Format::Table: text = reports_table_text(reports); break;
        case Format::Csv: text = emit_csv(reports); break;
        case Format::Json: text = emit_json(reports) + "\n"; break;
      }
    } else if (*bounds_cmd) {
      const auto b = delta_bounds(delta_min, delta_max, sigma);
      const Record record{{"delta_min", b.delta_min},
                          {"delta_max", b.delta_max},
                          {"sigma", b.sigma},
                          {"alpha_low_min", b.alpha_low_min},
                          {"alpha_high_max", b.alpha_high_max}};
      text = render(record, format);
    }

    write_output(output, text, out);
    return kExitOk;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << to_string(e.code()) << ": " << e.what() << "\n";
    return kExitFailure;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
}

}  // namespace foliage_link::cli
