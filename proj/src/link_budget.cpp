// SPDX-License-Identifier: Apache-2.0
#include "foliage_link/link_budget.hpp"

#include <cmath>
#include <string>

namespace foliage_link {

void RadioConfig::validate() const {
  const auto check = [](double v, const char* name) {
    if (!std::isfinite(v))
      throw Error(ErrorCode::DomainError, std::string("radio.") + name + " must be finite");
  };
  check(tx_power_dbm, "tx_power_dbm");
  check(tx_gain_dbi, "tx_gain_dbi");
  check(rx_gain_dbi, "rx_gain_dbi");
  check(rx_sensitivity_dbm, "rx_sensitivity_dbm");
  check(required_margin_db, "required_margin_db");
  if (required_margin_db < 0.0)
    throw Error(ErrorCode::DomainError, "radio.required_margin_db must be >= 0 (got " +
                                            format_number(required_margin_db) + ")");
}

namespace {

// Bisection on [lo, hi] where lo is feasible and hi is not. Returns the
// feasible end once both the bracket width and the loss mismatch are tight.
template <typename LossFn>
SolveResult bisect_frontier(LossFn&& loss, double lo, double hi, double budget,
                            double value_tol, const SolverOptions& options) {
  SolveResult out;
  out.target_loss_db = budget;
  double lo_loss = loss(lo);
  while (out.iterations < options.max_iterations) {
    if (hi - lo <= value_tol && std::abs(lo_loss - budget) <= options.loss_tol_db) break;
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;  // bracket exhausted at double resolution
    ++out.iterations;
    const double mid_loss = loss(mid);
    if (mid_loss <= budget) {
      lo = mid;
      lo_loss = mid_loss;
    } else {
      hi = mid;
    }
  }
  out.converged = std::abs(lo_loss - budget) <= options.loss_tol_db;
  if (out.converged) {
    out.value = lo;
    out.achieved_loss_db = lo_loss;
  } else {
    out.value = 0.5 * (lo + hi);
    out.achieved_loss_db = loss(out.value);
  }
  return out;
}

double linear_branch_limit_km(double delta) {
  return WeissbergerCoefficients<double>::kLinearMaxDepthM / (1000.0 * delta);
}

// Loss just past the linear/power boundary, where the foliage depth is 14 m
// but charged by the power branch.
double power_side_loss_at_boundary(double delta, double f_mhz,
                                   const SolverOptions& options) {
  using C = WeissbergerCoefficients<double>;
  const double d_km = linear_branch_limit_km(delta);
  const double foliage = C::kPowerScale * std::pow(f_mhz / 1000.0, C::kFrequencyExponent) *
                         std::pow(C::kLinearMaxDepthM, C::kDepthExponent);
  return foliage + free_space_loss(d_km * (1.0 - delta), f_mhz, options.model);
}

}  // namespace

SolveResult max_range(const RadioConfig& radio, double delta, double f_mhz,
                      const SolverOptions& options) {
  radio.validate();
  detail::require_positive_frequency(f_mhz);
  if (!(delta >= 0.0 && delta < 1.0))
    detail::fail(ErrorCode::DeltaOutOfRange, "delta must lie in [0,1) for a range solve",
                 delta);
  if (!(options.d_lo_km > 0.0 && options.d_lo_km < options.d_hi_km))
    throw Error(ErrorCode::InvalidSpec, "range bracket must satisfy 0 < d_lo < d_hi");

  const double budget = max_loss_budget(radio);
  const auto loss = [&](double d_km) {
    return total_loss(d_km, delta, f_mhz, options.model).l_total_db;
  };

  double lo = options.d_lo_km;
  double hi = options.d_hi_km;
  const double lo_loss = loss(lo);
  if (lo_loss > budget) {
    if (lo_loss - budget <= options.loss_tol_db)
      return {lo, lo_loss, budget, 0, true, false};
    throw Error(ErrorCode::NoSolution,
                "loss budget " + format_number(budget) + " dB is below the loss " +
                    format_number(lo_loss) + " dB at the minimum distance " +
                    format_number(lo) + " km");
  }
  const double hi_loss = loss(hi);
  if (hi_loss < budget)
    throw Error(ErrorCode::BracketExceeded,
                "loss budget " + format_number(budget) + " dB exceeds the loss " +
                    format_number(hi_loss) + " dB at the maximum distance " +
                    format_number(hi) + " km");
  if (hi_loss == budget) return {hi, hi_loss, budget, 0, true, false};

  if (delta > 0.0) {
    const double boundary = linear_branch_limit_km(delta);
    if (boundary > lo && boundary < hi) {
      if (power_side_loss_at_boundary(delta, f_mhz, options) <= budget)
        lo = boundary;
      else
        hi = boundary;
    }
  }
  return bisect_frontier(loss, lo, hi, budget, options.distance_tol_km, options);
}

SolveResult max_foliage_factor(const RadioConfig& radio, double d_km, double f_mhz,
                               double delta_cap, const SolverOptions& options) {
  radio.validate();
  detail::require_positive_distance(d_km);
  detail::require_positive_frequency(f_mhz);
  if (!(delta_cap > 0.0 && delta_cap < 1.0))
    detail::fail(ErrorCode::DeltaOutOfRange, "delta_cap must lie in (0,1)", delta_cap);
  if (options.grid_points < 2)
    throw Error(ErrorCode::InvalidSpec, "grid_points must be >= 2");

  const double budget = max_loss_budget(radio);
  const auto loss = [&](double delta) {
    return total_loss(d_km, delta, f_mhz, options.model).l_total_db;
  };

  const double zero_loss = loss(0.0);
  if (zero_loss > budget) {
    if (zero_loss - budget <= options.loss_tol_db)
      return {0.0, zero_loss, budget, 0, true, false};
    throw Error(ErrorCode::NoSolution,
                "loss budget " + format_number(budget) +
                    " dB is below the foliage-free loss " + format_number(zero_loss) +
                    " dB");
  }

  const Eigen::ArrayXd grid =
      Eigen::ArrayXd::LinSpaced(options.grid_points, 0.0, delta_cap);
  const Eigen::ArrayXd grid_loss = total_loss_db(grid, d_km, f_mhz, options.model);

  Eigen::Index first_over = -1;
  for (Eigen::Index i = 1; i < grid.size(); ++i) {
    if (grid_loss(i) > budget) {
      first_over = i;
      break;
    }
  }

  if (first_over < 0) {
    const double cap_loss = loss(delta_cap);
    if (cap_loss <= budget + options.loss_tol_db)
      return {delta_cap, cap_loss, budget, 0, true, true};
    first_over = grid.size() - 1;
  }

  const double lo = first_over == 1 ? 0.0 : grid(first_over - 1);
  const double hi = first_over == grid.size() - 1 ? delta_cap : grid(first_over);
  return bisect_frontier(loss, lo, hi, budget, options.delta_tol, options);
}

SolveResult max_foliage_height(const RadioConfig& radio, double d_km, double h_m,
                               double f_mhz, const SolverOptions& options) {
  if (!(h_m > 0.0))
    detail::fail(ErrorCode::NonPositiveHeight, "base height h_m must be > 0", h_m);
  SolveResult out = max_foliage_factor(radio, d_km, f_mhz, 0.95, options);
  out.value *= h_m;
  return out;
}

}  // namespace foliage_link
