// SPDX-License-Identifier: Apache-2.0
#ifndef FOLIAGE_LINK_PROPAGATION_HPP
#define FOLIAGE_LINK_PROPAGATION_HPP

// Foliage-aware propagation loss for a single sensor-to-gateway link.
//
// The path of length d is split into a foliage-covered segment d_f = delta*d
// and a free-space segment d_fsp = (1 - delta)*d. The foliage segment is
// charged with Weissberger's exponential decay loss, the free-space segment
// with the usual log-distance free-space loss, and the total is their sum.
//
// Units: distances enter in kilometres at the API and are carried in metres
// inside PathSplit; frequencies enter in megahertz. Weissberger's formula is
// evaluated with the frequency in gigahertz, free-space loss with megahertz.
//
// Everything here is a pure function templated on the scalar type. The
// Eigen overloads at the bottom evaluate the same formulas coefficient-wise
// without validation, for grid scans over already-checked domains.

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include <Eigen/Core>

#include "foliage_link/error.hpp"
#include "foliage_link/format.hpp"

namespace foliage_link {

template <typename T>
struct ModelParams {
  /// Constant term of the free-space loss in dB (d in km, f in MHz).
  T fspl_const_db = T(32.45);
};

template <typename T>
struct WeissbergerCoefficients {
  static constexpr T kLinearScale = T(0.45);
  static constexpr T kPowerScale = T(1.33);
  static constexpr T kFrequencyExponent = T(0.284);
  static constexpr T kDepthExponent = T(0.588);
  /// Largest depth (m) handled by the linear branch.
  static constexpr T kLinearMaxDepthM = T(14);
  /// Upper end of the published validity domain (m).
  static constexpr T kValidMaxDepthM = T(400);
};

enum class Regime : std::uint8_t { Zero, Linear, Power };
enum class Validity : std::uint8_t { InDomain, Extrapolated };

constexpr std::string_view to_string(Regime r) noexcept {
  switch (r) {
    case Regime::Zero: return "Zero";
    case Regime::Linear: return "Linear";
    case Regime::Power: return "Power";
  }
  return "?";
}

constexpr std::string_view to_string(Validity v) noexcept {
  return v == Validity::InDomain ? "InDomain" : "Extrapolated";
}

template <typename T>
struct PathSplit {
  T d_f_m{};
  T d_fsp_m{};
  T delta{};
};

template <typename T>
struct FoliageLossResult {
  T loss_db{};
  Regime regime = Regime::Zero;
  Validity validity = Validity::InDomain;
};

template <typename T>
struct LossBreakdown {
  T l_foliage_db{};
  T l_fsp_db{};
  T l_total_db{};
  FoliageLossResult<T> foliage;
  PathSplit<T> split;
};

template <typename T>
struct DeltaBounds {
  T delta_min{};
  T delta_max{};
  T sigma{};
  T alpha_low_min{};
  T alpha_high_max{};

  bool admissible(T alpha) const noexcept {
    return alpha_low_min <= alpha && alpha <= alpha_high_max;
  }
};

namespace detail {

template <typename T>
[[noreturn]] void fail(ErrorCode code, std::string_view what, T value) {
  throw Error(code, std::string(what) + " (got " +
                        format_number(static_cast<double>(value)) + ")");
}

template <typename T>
void require_positive_distance(T d_km) {
  if (!(d_km > T(0)))
    fail(ErrorCode::NonPositiveDistance, "distance d_km must be > 0", d_km);
}

template <typename T>
void require_positive_frequency(T f_mhz) {
  if (!(f_mhz > T(0)))
    fail(ErrorCode::NonPositiveFrequency, "frequency f_mhz must be > 0", f_mhz);
}

template <typename T>
void require_unit_delta(T delta) {
  if (!(delta >= T(0) && delta <= T(1)))
    fail(ErrorCode::DeltaOutOfRange, "delta out of [0,1]", delta);
}

}  // namespace detail

template <typename T>
PathSplit<T> foliage_split(T d_km, T delta) {
  detail::require_positive_distance(d_km);
  detail::require_unit_delta(delta);
  const T d_m = d_km * T(1000);
  return {delta * d_m, (T(1) - delta) * d_m, delta};
}

template <typename T>
T delta_from_heights(T h_f_m, T h_m) {
  if (!(h_m > T(0)))
    detail::fail(ErrorCode::NonPositiveHeight, "base height h_m must be > 0", h_m);
  if (!(h_f_m >= T(0) && h_f_m <= h_m))
    detail::fail(ErrorCode::HeightOutOfRange,
                 "foliage height h_f_m must lie in [0, h_m]", h_f_m);
  return h_f_m / h_m;
}

template <typename T>
PathSplit<T> split_from_heights(T d_km, T h_m, T h_f_m) {
  const T delta = delta_from_heights(h_f_m, h_m);
  return foliage_split(d_km, delta);
}

/// Weissberger foliage loss for a foliage depth in metres. Depth 0 is
/// exactly 0 dB; depths past 400 m use the power branch and are flagged
/// Extrapolated.
template <typename T>
FoliageLossResult<T> weissberger_loss(T f_mhz, T d_f_m) {
  using C = WeissbergerCoefficients<T>;
  detail::require_positive_frequency(f_mhz);
  if (!(d_f_m >= T(0)))
    detail::fail(ErrorCode::NegativeDistance, "foliage depth d_f_m must be >= 0",
                 d_f_m);

  FoliageLossResult<T> out;
  if (d_f_m == T(0)) return out;

  using std::pow;
  const T f_term = pow(f_mhz / T(1000), C::kFrequencyExponent);
  if (d_f_m <= C::kLinearMaxDepthM) {
    out.loss_db = C::kLinearScale * f_term * d_f_m;
    out.regime = Regime::Linear;
  } else {
    out.loss_db = C::kPowerScale * f_term * pow(d_f_m, C::kDepthExponent);
    out.regime = Regime::Power;
  }
  out.validity = d_f_m > C::kValidMaxDepthM ? Validity::Extrapolated
                                            : Validity::InDomain;
  return out;
}

template <typename T>
T free_space_loss(T d_km, T f_mhz, const ModelParams<T>& params = {}) {
  if (!(d_km > T(0)))
    detail::fail(ErrorCode::NonPositiveDistance,
                 "free-space distance must be > 0", d_km);
  detail::require_positive_frequency(f_mhz);
  using std::log10;
  return params.fspl_const_db + T(20) * log10(d_km) + T(20) * log10(f_mhz);
}

/// Description of one link. The foliage cover factor comes either from
/// `delta` directly or from the height pair (h_m, h_f_m); when both are
/// given they must agree to 1e-12.
template <typename T>
struct LinkGeometry {
  T d_km{};
  std::optional<T> h_m;
  std::optional<T> h_f_m;
  std::optional<T> delta;

  static LinkGeometry with_delta(T d_km, T delta) {
    return {d_km, std::nullopt, std::nullopt, delta};
  }
  static LinkGeometry with_heights(T d_km, T h_m, T h_f_m) {
    return {d_km, h_m, h_f_m, std::nullopt};
  }

  /// Validates the geometry and returns its foliage cover factor.
  T resolve_delta() const {
    detail::require_positive_distance(d_km);
    const bool has_heights = h_m.has_value() && h_f_m.has_value();
    if (h_m.has_value() != h_f_m.has_value())
      throw Error(ErrorCode::InconsistentGeometry,
                  "h_m and h_f_m must be given together");
    if (!has_heights && !delta)
      throw Error(ErrorCode::InconsistentGeometry,
                  "geometry needs delta or the pair (h_m, h_f_m)");
    if (!has_heights) {
      detail::require_unit_delta(*delta);
      return *delta;
    }
    const T from_heights = delta_from_heights(*h_f_m, *h_m);
    if (delta) {
      detail::require_unit_delta(*delta);
      using std::abs;
      if (abs(*delta - from_heights) > T(1e-12))
        throw Error(ErrorCode::InconsistentGeometry,
                    "delta " + format_number(static_cast<double>(*delta)) +
                        " disagrees with h_f_m/h_m = " +
                        format_number(static_cast<double>(from_heights)));
    }
    return from_heights;
  }
};

/// Loss once the split is known; raises FullFoliageCover at delta = 1.
template <typename T>
LossBreakdown<T> total_loss(const PathSplit<T>& split, T f_mhz,
                            const ModelParams<T>& params = {}) {
  detail::require_positive_frequency(f_mhz);
  if (!(split.d_fsp_m > T(0)))
    throw Error(ErrorCode::FullFoliageCover,
                "full foliage cover (delta = 1): free-space distance is zero "
                "and the free-space loss is singular");
  LossBreakdown<T> out;
  out.split = split;
  out.foliage = weissberger_loss(f_mhz, split.d_f_m);
  out.l_foliage_db = out.foliage.loss_db;
  out.l_fsp_db = free_space_loss(split.d_fsp_m / T(1000), f_mhz, params);
  out.l_total_db = out.l_foliage_db + out.l_fsp_db;
  return out;
}

template <typename T>
LossBreakdown<T> total_loss(const LinkGeometry<T>& geometry, T f_mhz,
                            const ModelParams<T>& params = {}) {
  const T delta = geometry.resolve_delta();
  return total_loss(foliage_split(geometry.d_km, delta), f_mhz, params);
}

template <typename T>
LossBreakdown<T> total_loss(T d_km, T delta, T f_mhz,
                            const ModelParams<T>& params = {}) {
  return total_loss(foliage_split(d_km, delta), f_mhz, params);
}

/// Admissible band for a nominal pick alpha that may be perturbed by
/// +/- sigma (as a fraction) while staying inside [delta_min, delta_max].
template <typename T>
DeltaBounds<T> delta_bounds(T delta_min, T delta_max, T sigma) {
  if (!(delta_min >= T(0) && delta_min < delta_max && delta_max <= T(1)))
    throw Error(ErrorCode::InvalidBand,
                "need 0 <= delta_min < delta_max <= 1 (got " +
                    format_number(static_cast<double>(delta_min)) + ", " +
                    format_number(static_cast<double>(delta_max)) + ")");
  if (!(sigma >= T(0) && sigma < T(1)))
    detail::fail(ErrorCode::InvalidBand, "sigma must lie in [0,1)", sigma);

  DeltaBounds<T> out{delta_min, delta_max, sigma, delta_min / (T(1) - sigma),
                     delta_max / (T(1) + sigma)};
  if (out.alpha_low_min > out.alpha_high_max)
    throw Error(ErrorCode::InvalidBand,
                "empty admissible band: alpha_low_min " +
                    format_number(static_cast<double>(out.alpha_low_min)) +
                    " > alpha_high_max " +
                    format_number(static_cast<double>(out.alpha_high_max)));
  return out;
}

/// Cover factor at which the foliage depth reaches the 400 m end of the
/// Weissberger validity domain, clamped to the geometric maximum of 1.
template <typename T>
T weissberger_delta_limit(T d_km) {
  detail::require_positive_distance(d_km);
  using std::min;
  return min(T(1), WeissbergerCoefficients<T>::kValidMaxDepthM / (d_km * T(1000)));
}

// Coefficient-wise forms. No validation: callers pass in-domain arrays.

template <typename Derived>
auto weissberger_loss_db(const Eigen::ArrayBase<Derived>& d_f_m,
                         typename Derived::Scalar f_mhz) {
  using T = typename Derived::Scalar;
  using C = WeissbergerCoefficients<T>;
  using std::pow;
  const T f_term = pow(f_mhz / T(1000), C::kFrequencyExponent);
  using Array = Eigen::Array<T, Derived::RowsAtCompileTime, Derived::ColsAtCompileTime>;
  const Array depth = d_f_m;
  const Array linear = C::kLinearScale * f_term * depth;
  const Array power = C::kPowerScale * f_term * depth.pow(C::kDepthExponent);
  return Array((depth == T(0)).select(
      Array::Zero(depth.rows(), depth.cols()),
      (depth <= C::kLinearMaxDepthM).select(linear, power)));
}

template <typename Derived>
auto free_space_loss_db(const Eigen::ArrayBase<Derived>& d_km,
                        typename Derived::Scalar f_mhz,
                        const ModelParams<typename Derived::Scalar>& params = {}) {
  using T = typename Derived::Scalar;
  using std::log10;
  return params.fspl_const_db + T(20) * d_km.log10() + T(20) * log10(f_mhz);
}

/// Total loss over an array of cover factors at fixed distance and
/// frequency. Every entry must lie in [0, 1).
template <typename Derived>
auto total_loss_db(const Eigen::ArrayBase<Derived>& delta,
                   typename Derived::Scalar d_km, typename Derived::Scalar f_mhz,
                   const ModelParams<typename Derived::Scalar>& params = {}) {
  using T = typename Derived::Scalar;
  using Array = Eigen::Array<T, Derived::RowsAtCompileTime, Derived::ColsAtCompileTime>;
  const Array d_f_m = delta * (d_km * T(1000));
  const Array d_fsp_km = (T(1) - delta) * d_km;
  return Array(weissberger_loss_db(d_f_m, f_mhz) +
               free_space_loss_db(d_fsp_km, f_mhz, params));
}

}  // namespace foliage_link

#endif  // FOLIAGE_LINK_PROPAGATION_HPP
