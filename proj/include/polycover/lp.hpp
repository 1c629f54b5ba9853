#pragma once

#include "polycover/core.hpp"

#include <optional>
#include <string>
#include <vector>

namespace polycover::lp {

/// maximize c.z  subject to  A z = b,  z_i >= 0 where nonneg[i], z_i free otherwise.
struct LpProblem {
    Matrix A;
    Vec b;
    Vec c;
    std::vector<bool> nonneg;
};

enum class LpStatus { optimal, infeasible, unbounded };

std::string to_string(LpStatus s);

/// Result of a solve.
///
/// For `optimal`, `dual` holds y with A^T y >= c on nonnegative columns and
/// A^T y = c on free ones (so b.y == c.z). For `infeasible`, `dual` is a Farkas
/// ray: A^T y <= 0 on nonnegative columns, A^T y = 0 on free columns, b.y > 0,
/// scaled to unit infinity norm.
struct LpOutcome {
    LpStatus status = LpStatus::infeasible;
    std::optional<Vec> z;
    std::optional<Scalar> objective;
    std::optional<Vec> dual;
    int iterations = 0;
    bool perturbed = false;  ///< the one-shot b perturbation fallback was used
};

struct LpOptions {
    Scalar feas_tol = 1e-9;
    Scalar pivot_tol = 1e-9;
    Scalar cost_tol = 1e-9;
    int max_iterations = 0;  ///< 0: derived from problem size
};

/// Two-phase dense simplex with Bland's rule. Free variables are split into
/// a difference of nonnegative columns. A run that exceeds the iteration cap
/// is retried once with b perturbed by 1e-12; a second stall throws
/// NumericalError("ill-conditioned").
LpOutcome solve(const LpProblem& p, const LpOptions& opt = {});

/// True when y is a valid Farkas certificate of infeasibility for p.
bool check_farkas(const LpProblem& p, const Vec& y, Scalar tol = 1e-9);

/// Primal feasibility, dual feasibility and zero duality gap of an optimal outcome.
bool check_optimal(const LpProblem& p, const LpOutcome& out, Scalar tol = 1e-9);

}  // namespace polycover::lp
