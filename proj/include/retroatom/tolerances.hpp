// tolerances.hpp — Central numeric tolerances used by validation and self-checks
#pragma once

namespace retroatom {

// Validation tolerances. The physical quantities involved are all order one,
// so these sit far below any meaningful scale.
inline constexpr double HERMITICITY_TOL = 1e-12;
inline constexpr double PSD_TOL = 1e-12;
inline constexpr double COMPLETENESS_TOL = 1e-10;

// Bloch vectors may exceed unit norm by at most this much.
inline constexpr double BLOCH_NORM_TOL = 1e-10;

// ||U†U - 1||_inf bound accepted by retrodict_closed.
inline constexpr double UNITARITY_TOL = 1e-10;

// Posterior probabilities must sum to one within this bound.
inline constexpr double POSTERIOR_SUM_TOL = 1e-10;

// Below this retrodictive weight an outcome is reported as impossible
// rather than normalized into NaNs.
inline constexpr double IMPOSSIBLE_OUTCOME_FLOOR = 1e-300;

// Trace drift at which the fixed-step integrator renormalizes its result.
inline constexpr double TRACE_DRIFT_TOL = 1e-12;

// Maximum disagreement tolerated between the retrodictive and the direct
// Bayesian route before the CLI reports an internal tolerance violation.
inline constexpr double ROUTE_EQUIV_TOL = 1e-10;

// Effective validation tolerances. These return the constants above unless
// the environment variable RETROATOM_TOL_OVERRIDE (testing only) is set to
// a positive value, in which case that value replaces all four.
double hermiticity_tol();
double psd_tol();
double completeness_tol();
double posterior_sum_tol();

}  // namespace retroatom
