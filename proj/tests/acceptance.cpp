// SPDX-License-Identifier: Apache-2.0
//
// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 when any
// criterion fails. Tolerances are fixed here and must not be tuned.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "csv_reader.hpp"
#include "foliage_link/cli.hpp"
#include "foliage_link/link_budget.hpp"
#include "foliage_link/propagation.hpp"
#include "foliage_link/scenario.hpp"
#include "foliage_link/sweep.hpp"

using namespace foliage_link;

namespace {

constexpr double kBaselineDb = 106.0748247;
constexpr double kHeavyFspDb = 80.05422483;
constexpr double kHeavyFoliageDb = 144.4570531;
constexpr double kHeavyTotalDb = 224.5112779;
constexpr double kHalfFoliageDb = 99.04479;
constexpr double kHalfTotalDb = 199.0990144;
constexpr double kHalfRatio = 1.876967649;

// Collects the failed checks of one criterion.
class Criterion {
 public:
  void check(bool ok, const std::string& what) {
    ++checks_;
    if (!ok && failures_.size() < 5) failures_.push_back(what);
    failed_ = failed_ || !ok;
  }
  void near(double actual, double expected, double tol, const std::string& what) {
    std::ostringstream os;
    os.precision(12);
    os << what << ": got " << actual << ", want " << expected << " +/- " << tol;
    check(std::abs(actual - expected) <= tol, os.str());
  }
  void note(const std::string& text) { notes_.push_back(text); }

  bool failed() const { return failed_; }
  int checks() const { return checks_; }
  const std::vector<std::string>& failures() const { return failures_; }
  const std::vector<std::string>& notes() const { return notes_; }

 private:
  bool failed_ = false;
  int checks_ = 0;
  std::vector<std::string> failures_;
  std::vector<std::string> notes_;
};

int g_failed = 0;

void run(const char* id, const char* title, const std::function<void(Criterion&)>& body) {
  Criterion c;
  try {
    body(c);
  } catch (const std::exception& e) {
    c.check(false, std::string("unexpected exception: ") + e.what());
  }
  std::cout << (c.failed() ? "[FAIL] " : "[PASS] ") << id << " " << title << " (" << c.checks()
            << " checks)\n";
  for (const auto& n : c.notes()) std::cout << "         " << n << "\n";
  for (const auto& f : c.failures()) std::cout << "         - " << f << "\n";
  if (c.failed()) ++g_failed;
}

std::string run_cli(std::vector<std::string> args, int& code) {
  std::ostringstream out, err;
  code = cli::run(args, out, err);
  return out.str();
}

RadioConfig radio_with_budget(double loss_db) {
  RadioConfig r;
  r.rx_sensitivity_dbm = -loss_db;
  return r;
}

double weissberger(double f_mhz, double d_f_m) { return weissberger_loss(f_mhz, d_f_m).loss_db; }

// End of the window past 14 m where the power branch is still below the
// linear branch's value at 14 m: (0.45 * 14 / 1.33)^(1 / 0.588).
constexpr double kBranchDipEndM = 14.0860965451465;

}  // namespace

int main() {
  std::cout.setf(std::ios::fixed);

  run("C1", "no-foliage baseline", [](Criterion& c) {
    const auto b = total_loss(LinkGeometry<double>::with_delta(2.0, 0.0), 2400.0);
    c.near(b.l_total_db, kBaselineDb, 1e-4, "total");
    c.check(b.l_foliage_db == 0.0, "foliage term is exactly 0 dB");
  });

  run("C2", "heavy foliage, delta = 0.95", [](Criterion& c) {
    const auto b = total_loss(LinkGeometry<double>::with_delta(2.0, 0.95), 2400.0);
    c.near(b.split.d_fsp_m, 100.0, 1e-9, "d_fsp_m");
    c.near(b.split.d_f_m, 1900.0, 1e-9, "d_f_m");
    c.near(b.l_fsp_db, kHeavyFspDb, 1e-4, "free-space loss");
    c.near(b.l_foliage_db, kHeavyFoliageDb, 1e-2, "foliage loss");
    c.near(b.l_total_db, kHeavyTotalDb, 1e-2, "total");
  });

  run("C3", "heavy/baseline ratio", [](Criterion& c) {
    const double heavy = total_loss(2.0, 0.95, 2400.0).l_total_db;
    const double base = total_loss(2.0, 0.0, 2400.0).l_total_db;
    const double ratio = heavy / base;
    c.check(ratio >= 2.10 && ratio <= 2.13, "ratio " + format_number(ratio) + " in [2.10, 2.13]");
    c.note("ratio = " + format_number(ratio));
  });

  run("C4", "foliage height 15 m of 30 m", [](Criterion& c) {
    const auto g = LinkGeometry<double>::with_heights(2.0, 30.0, 15.0);
    c.check(g.resolve_delta() == 0.5, "delta is exactly 0.5");
    const auto b = total_loss(g, 2400.0);
    c.near(b.l_foliage_db, kHalfFoliageDb, 1e-2, "foliage loss");
    c.near(b.l_total_db, kHalfTotalDb, 1e-2, "total");
    const double base = total_loss(2.0, 0.0, 2400.0).l_total_db;
    c.near(b.l_total_db / base, kHalfRatio, 1e-4, "ratio to baseline");
  });

  run("C5", "delta bounds arithmetic", [](Criterion& c) {
    const auto b = delta_bounds(0.01, 1.0, 0.5);
    c.check(b.alpha_low_min == 0.02, "alpha_low_min == 0.02 exactly");
    c.near(b.alpha_high_max, 2.0 / 3.0, 1e-12, "alpha_high_max");
    c.note("alpha_high_max = " + format_number(b.alpha_high_max) + " (printed as 0.66)");
  });

  run("C6", "property suite", [](Criterion& c) {
    std::mt19937_64 rng(6);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    // (a) split conservation
    bool conserved = true;
    for (int i = 0; i < 100000; ++i) {
      const double d = 1e-3 + 100.0 * unit(rng);
      const double delta = unit(rng);
      const auto s = foliage_split(d, delta);
      conserved = conserved && std::abs(s.d_f_m + s.d_fsp_m - 1000.0 * d) <= 1e-9 * 1000.0 * d;
    }
    c.check(conserved, "(a) d_f + d_fsp = d over 1e5 random inputs");

    // (b) monotone in depth within each branch and across it outside the
    // documented dip window; monotone in frequency everywhere.
    bool within = true, across = true, in_freq = true, dip_bounded = true;
    int dip_pairs = 0;
    for (int i = 0; i < 20000; ++i) {
      const double f = 100.0 + 5900.0 * unit(rng);
      const double a = 1e-6 + (14.0 - 1e-6) * unit(rng);
      const double b = 1e-6 + (14.0 - 1e-6) * unit(rng);
      if (a != b) within = within && ((weissberger(f, a) < weissberger(f, b)) == (a < b));
      const double p = 14.0 + 1e-6 + 2000.0 * unit(rng);
      const double q = 14.0 + 1e-6 + 2000.0 * unit(rng);
      if (p != q) within = within && ((weissberger(f, p) < weissberger(f, q)) == (p < q));
      // a < 14 < p
      if (p > kBranchDipEndM) across = across && weissberger(f, a) < weissberger(f, p);
      // Just past the boundary the power branch sits below linear(14 m)
      // exactly when the depth is inside the dip window.
      const double near = 14.0 + 1e-9 + 0.2 * unit(rng);
      const bool below = weissberger(f, near) < weissberger(f, 14.0);
      if (std::abs(near - kBranchDipEndM) > 1e-9) {
        dip_bounded = dip_bounded && below == (near < kBranchDipEndM);
        dip_pairs += below ? 1 : 0;
      }
      const double f2 = 100.0 + 5900.0 * unit(rng);
      for (double depth : {a, p})
        if (f != f2)
          in_freq = in_freq && ((weissberger(f, depth) < weissberger(f2, depth)) == (f < f2));
    }
    c.check(within, "(b) strictly increasing in d_f within each branch");
    c.check(across, "(b) increasing in d_f across the 14 m boundary beyond the dip window");
    c.check(dip_bounded, "(b) non-monotone pairs confined to (14, 14.0861] m");
    c.check(in_freq, "(b) strictly increasing in f");
    c.note("branch dip: power branch below linear(14 m) only for 14 < d_f <= 14.0861 m (" +
           std::to_string(dip_pairs) + " sampled pairs)");

    // (c) bounded jump at the boundary
    for (double f : {433.0, 868.0, 2400.0, 5800.0}) {
      const double linear = weissberger(f, 14.0);
      const double power = weissberger(f, std::nextafter(14.0, 15.0));
      const double jump = std::abs(power - linear) / linear;
      c.check(weissberger_loss(f, 14.0).regime == Regime::Linear, "(c) 14 m uses linear branch");
      c.check(jump < 0.005, "(c) relative jump " + format_number(jump) + " < 0.5% at f = " +
                                format_number(f));
      if (f == 2400.0) c.note("relative jump at 14 m = " + format_number(jump));
    }

    // (d) zero depth
    bool zero = true;
    for (int i = 0; i < 10000; ++i) zero = zero && weissberger(1e-3 + 1e5 * unit(rng), 0.0) == 0.0;
    c.check(zero, "(d) weissberger_loss(f, 0) == 0");
  });

  run("C7", "solver/oracle equivalence", [](Criterion& c) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    constexpr double kCap = 0.95;
    constexpr int kDeltaGrid = 9500;  // 1e-4 resolution over [0, 0.95]
    int range_checked = 0, delta_round_trips = 0, delta_grid_checked = 0;
    double worst_range = 0.0, worst_delta = 0.0;

    for (int trial = 0; trial < 100; ++trial) {
      const double d0 = 0.2 + 4.8 * unit(rng);
      const double delta0 = 0.02 + 0.88 * unit(rng);
      const double f = 400.0 + 5600.0 * unit(rng);
      const double budget = total_loss(d0, delta0, f).l_total_db;
      const RadioConfig radio = radio_with_budget(budget);
      const std::string tag = "trial " + std::to_string(trial);

      // Range: round trip, then a 1e-4 km scan for the largest feasible d.
      const auto range = max_range(radio, delta0, f);
      c.check(range.converged, tag + ": max_range converged");
      worst_range = std::max(worst_range, std::abs(range.value - d0));
      c.check(std::abs(range.value - d0) <= 1e-6, tag + ": max_range within 1e-6 km");
      double grid_last = 0.0;
      for (int i = 1; i <= 100000; ++i) {
        const double d = 1e-4 * i;
        if (total_loss(d, delta0, f).l_total_db <= budget) grid_last = d;
      }
      c.check(std::abs(range.value - grid_last) <= 1e-4 + 1e-12,
              tag + ": max_range within one grid cell of the scan");
      ++range_checked;

      // Cover factor: the scan oracle locates the first grid point over budget.
      const auto res = max_foliage_factor(radio, d0, f, kCap);
      int first_over = -1;
      for (int i = 0; i <= kDeltaGrid; ++i) {
        const double delta = kCap * i / kDeltaGrid;
        if (total_loss(d0, delta, f).l_total_db > budget) {
          first_over = i;
          break;
        }
      }
      c.check(res.converged, tag + ": max_foliage_factor converged");
      if (first_over < 0) {
        c.check(res.value == kCap, tag + ": all-feasible returns the cap");
      } else {
        const double oracle_lo = kCap * (first_over - 1) / kDeltaGrid;
        const double oracle_hi = kCap * first_over / kDeltaGrid;
        c.check(res.value >= oracle_lo - 1e-12 && res.value <= oracle_hi + 1e-12,
                tag + ": max_foliage_factor inside the oracle's bracketing cell");
      }
      ++delta_grid_checked;

      // Round trip only where delta0 is the first frontier on the grid.
      const bool unique = first_over >= 0 && kCap * first_over / kDeltaGrid >= delta0 &&
                          kCap * (first_over - 1) / kDeltaGrid <= delta0;
      if (unique) {
        worst_delta = std::max(worst_delta, std::abs(res.value - delta0));
        c.check(std::abs(res.value - delta0) <= 1e-6,
                tag + ": max_foliage_factor within 1e-6 of delta");
        ++delta_round_trips;
      }
    }
    c.check(delta_round_trips >= 50, "at least half the triples have a unique delta frontier");
    c.note("range round trips: " + std::to_string(range_checked) + ", worst error " +
           format_number(worst_range) + " km");
    c.note("delta grid checks: " + std::to_string(delta_grid_checked) + ", round trips: " +
           std::to_string(delta_round_trips) + ", worst error " + format_number(worst_delta));
  });

  run("C8", "figure reproduction through the CLI", [](Criterion& c) {
    int code = -1;
    const auto fig3 = test::read_csv(run_cli({"sweep", "--preset", "figure3", "--format", "csv"}, code));
    c.check(code == 0, "figure3 exit code 0");
    c.check(fig3.size() == 97, "figure3 has header + 96 rows");
    if (fig3.size() < 3) return;
    const auto col = [&](std::size_t row, std::size_t column) {
      return parse_number(fig3[row][column]);
    };
    c.check(fig3[0][0] == "x" && fig3[0][6] == "l_total_db", "figure3 header");
    c.check(col(1, 0) == 0.0, "first row at delta = 0");
    c.near(col(1, 6), kBaselineDb, 1e-4, "delta = 0 total");
    c.check(col(1, 4) == 0.0, "delta = 0 foliage 0 dB");
    const std::size_t last = fig3.size() - 1;
    c.check(col(last, 0) == 0.95, "last row at delta = 0.95");
    c.near(col(last, 3), 100.0, 1e-9, "delta = 0.95 d_fsp_m");
    c.near(col(last, 2), 1900.0, 1e-9, "delta = 0.95 d_f_m");
    c.near(col(last, 5), kHeavyFspDb, 1e-4, "delta = 0.95 free-space loss");
    c.near(col(last, 4), kHeavyFoliageDb, 1e-2, "delta = 0.95 foliage loss");
    c.near(col(last, 6), kHeavyTotalDb, 1e-2, "delta = 0.95 total");
    bool total_up = true, fsp_down = true;
    for (std::size_t i = 2; i <= last; ++i) {
      total_up = total_up && col(i, 6) > col(i - 1, 6);
      fsp_down = fsp_down && col(i, 5) < col(i - 1, 5);
    }
    c.check(total_up, "l_total strictly increasing");
    c.check(fsp_down, "l_fsp strictly decreasing");

    const auto fig4 = test::read_csv(run_cli({"sweep", "--preset", "figure4", "--format", "csv"}, code));
    c.check(code == 0, "figure4 exit code 0");
    c.check(fig4.size() == 17, "figure4 has header + 16 rows");
    if (fig4.size() < 2) return;
    const auto& end = fig4.back();
    c.check(parse_number(end[0]) == 15.0, "figure4 ends at h_f = 15 m");
    c.check(parse_number(end[1]) == 0.5, "figure4 end delta = 0.5");
    c.near(parse_number(end[4]), kHalfFoliageDb, 1e-2, "figure4 end foliage loss");
    c.near(parse_number(end[6]), kHalfTotalDb, 1e-2, "figure4 end total");
    c.near(parse_number(end[6]) / col(1, 6), kHalfRatio, 1e-4, "figure4 end ratio");
  });

  run("C9", "I/O round trips and invalid documents", [](Criterion& c) {
    const std::string data_dir = FOLIAGE_LINK_TEST_DATA_DIR;
    std::ifstream in(data_dir + "/farm.json");
    const std::string farm{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
    const std::string once = scenario_to_json(parse_scenario(farm));
    c.check(scenario_to_json(parse_scenario(once)) == once, "scenario parse/emit fixed point");

    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    bool exact = true;
    for (int trial = 0; trial < 100; ++trial) {
      SweepSpec spec;
      spec.variable = SweepVariable::Delta;
      spec.start = 0.5 * unit(rng);
      spec.stop = spec.start + 0.01 + (0.94 - spec.start) * unit(rng);
      spec.steps = 2 + static_cast<int>(60 * unit(rng));
      spec.base = LinkGeometry<double>::with_delta(0.01 + 30 * unit(rng), 0.0);
      spec.f_mhz = 30 + 6000 * unit(rng);
      const auto table = run_sweep(spec);
      const auto rows = test::read_csv(emit_csv(table));
      for (Eigen::Index i = 0; i < table.rows(); ++i) {
        const auto& r = rows[static_cast<std::size_t>(i) + 1];
        const double values[] = {table.x(i),        table.delta(i),        table.d_f_m(i),
                                 table.d_fsp_m(i),  table.l_foliage_db(i), table.l_fsp_db(i),
                                 table.l_total_db(i)};
        for (std::size_t k = 0; k < 7; ++k) exact = exact && parse_number(r[k]) == values[k];
      }
    }
    c.check(exact, "CSV numeric fields re-parse bit-exactly (100 random tables)");

    int cases = 0;
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(data_dir + "/invalid"))
      files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    for (const auto& path : files) {
      const std::string stem = path.stem().string();  // <case>.<ErrorCode>
      const std::string expected = stem.substr(stem.rfind('.') + 1);
      std::ifstream file(path);
      const std::string text{std::istreambuf_iterator<char>(file), std::istreambuf_iterator<char>()};
      std::string got = "accepted";
      try {
        parse_scenario(text);
      } catch (const Error& e) {
        got = std::string(to_string(e.code()));
      }
      c.check(got == expected, path.filename().string() + ": want " + expected + ", got " + got);
      ++cases;
    }
    c.check(cases >= 10, "at least 10 canned invalid documents");
    c.note(std::to_string(cases) + " invalid documents checked");
  });

  std::cout << (g_failed == 0 ? "all acceptance criteria passed\n"
                              : std::to_string(g_failed) + " acceptance criteria failed\n");
  return g_failed == 0 ? 0 : 1;
}
