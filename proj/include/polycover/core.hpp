#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace polycover {

using Scalar = double;
using Vec = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Rng = std::mt19937_64;

/// Tolerance pair used by every geometric decision.
///
/// `feas` governs LP residuals and incidence tests, `geom` governs verdict
/// margins (fits / fails / borderline).
struct Tolerances {
    Scalar feas = 1e-9;
    Scalar geom = 1e-6;
};

/// Input violates an operation's precondition (bad dimension, too few
/// vertices, singular map, ...). The CLI maps this to exit code 2.
class PreconditionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Numerical breakdown inside an otherwise valid computation (LP stall,
/// ill-conditioned solve). The CLI maps this to exit code 3.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A point of the Grassmannian G(n,d): an n x d matrix with orthonormal columns.
class Subspace {
public:
    /// Empty placeholder (0 x 0); only meaningful after assignment.
    Subspace() = default;

    /// Wraps a basis that is already orthonormal; throws PreconditionError otherwise.
    static Subspace from_orthonormal(Matrix basis, Scalar tol = 1e-9);

    const Matrix& basis() const { return basis_; }
    int ambient() const { return static_cast<int>(basis_.rows()); }
    int dim() const { return static_cast<int>(basis_.cols()); }

    /// Coordinates of x in this basis (basis^T x).
    Vec coords(const Vec& x) const { return basis_.transpose() * x; }
    /// Point of R^n with the given coordinates (basis w).
    Vec lift(const Vec& w) const { return basis_ * w; }

private:
    explicit Subspace(Matrix basis) : basis_(std::move(basis)) {}
    friend Subspace orthonormalize(const Matrix& m, Scalar tol);

    Matrix basis_;
};

/// Gram-Schmidt (two passes) on the columns of m. Throws
/// PreconditionError("degenerate basis") when the numerical rank is below
/// the column count.
Subspace orthonormalize(const Matrix& m, Scalar tol = 1e-9);

/// Haar-distributed d-subspace of R^n: orthonormalized standard Gaussian n x d sample.
Subspace haar_subspace(int n, int d, Rng& rng);

/// Uniform random unit vector in R^n.
Vec random_unit(int n, Rng& rng);

/// Deterministic sweep directions: equally spaced angles for n = 2, a
/// Fibonacci lattice for n = 3.
std::vector<Vec> direction_grid(int n, int count);

/// Orthonormal basis of u^perp, taken from the Householder reflector that
/// maps u onto a coordinate axis. Deterministic in u.
Subspace orthogonal_complement(const Vec& u);

/// Evaluates f(0..count-1) on `workers` threads. Results are written by
/// index, so the output does not depend on the worker count.
template <typename T>
std::vector<T> parallel_map(int count, int workers, const std::function<T(int)>& f);

/// Default worker count for sweeps; 1 unless changed (CLI --workers).
int default_workers();
void set_default_workers(int workers);

}  // namespace polycover

#include "polycover/detail/parallel.hpp"
