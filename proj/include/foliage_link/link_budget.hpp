// SPDX-License-Identifier: Apache-2.0
#ifndef FOLIAGE_LINK_LINK_BUDGET_HPP
#define FOLIAGE_LINK_LINK_BUDGET_HPP

#include "foliage_link/propagation.hpp"

namespace foliage_link {

struct RadioConfig {
  double tx_power_dbm = 0.0;
  double tx_gain_dbi = 0.0;
  double rx_gain_dbi = 0.0;
  double rx_sensitivity_dbm = 0.0;
  double required_margin_db = 0.0;

  /// Throws DomainError when a field is non-finite or the margin is negative.
  void validate() const;
};

struct SolveResult {
  double value = 0.0;
  double achieved_loss_db = 0.0;
  double target_loss_db = 0.0;
  int iterations = 0;
  bool converged = false;
  /// Set by the cover-factor solvers when the cap itself fits the budget.
  bool all_feasible = false;
};

struct SolverOptions {
  double loss_tol_db = 1e-6;
  double distance_tol_km = 1e-7;
  double delta_tol = 1e-9;
  double d_lo_km = 1e-4;
  double d_hi_km = 1000.0;
  int max_iterations = 200;
  int grid_points = 10000;
  ModelParams<double> model{};
};

inline double link_margin(const RadioConfig& radio, double loss_db) {
  return radio.tx_power_dbm + radio.tx_gain_dbi + radio.rx_gain_dbi - loss_db -
         radio.rx_sensitivity_dbm;
}

/// Smallest Tx power (dBm) meeting the required margin over `loss_db`.
inline double required_tx_power(const RadioConfig& radio, double loss_db) {
  return loss_db + radio.rx_sensitivity_dbm - radio.tx_gain_dbi - radio.rx_gain_dbi +
         radio.required_margin_db;
}

inline double max_loss_budget(const RadioConfig& radio) {
  return radio.tx_power_dbm + radio.tx_gain_dbi + radio.rx_gain_dbi -
         radio.rx_sensitivity_dbm - radio.required_margin_db;
}

/// Largest distance (km) whose total loss at cover factor `delta` fits the
/// budget. The loss is increasing in d except for the small drop where the
/// foliage depth crosses the 14 m branch boundary; the search picks the
/// monotone piece that holds the largest feasible d.
SolveResult max_range(const RadioConfig& radio, double delta, double f_mhz,
                      const SolverOptions& options = {});

/// Largest cover factor in [0, delta_cap] reached before the loss first
/// exceeds the budget, scanning upward from 0.
SolveResult max_foliage_factor(const RadioConfig& radio, double d_km, double f_mhz,
                               double delta_cap = 0.95,
                               const SolverOptions& options = {});

/// max_foliage_factor expressed as a foliage height h_f = delta * h_m.
SolveResult max_foliage_height(const RadioConfig& radio, double d_km, double h_m,
                               double f_mhz, const SolverOptions& options = {});

}  // namespace foliage_link

#endif  // FOLIAGE_LINK_LINK_BUDGET_HPP
