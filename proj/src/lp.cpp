#include "polycover/lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace polycover::lp {

std::string to_string(LpStatus s) {
    switch (s) {
        case LpStatus::optimal: return "optimal";
        case LpStatus::infeasible: return "infeasible";
        case LpStatus::unbounded: return "unbounded";
    }
    return "unknown";
}

namespace {

void validate(const LpProblem& p) {
    const auto m = p.A.rows();
    const auto n = p.A.cols();
    if (n < 1) throw PreconditionError("LP needs at least one variable");
    if (p.b.size() != m) throw PreconditionError("LP dimension mismatch: b");
    if (p.c.size() != n) throw PreconditionError("LP dimension mismatch: c");
    if (static_cast<Eigen::Index>(p.nonneg.size()) != n)
        throw PreconditionError("LP dimension mismatch: nonneg mask");
    if (!p.A.allFinite() || !p.b.allFinite() || !p.c.allFinite())
        throw PreconditionError("LP data must be finite");
}

struct StallError {};

/// Dense tableau over the standard form  max c.x, A x = b, x >= 0, b >= 0,
/// with m artificial columns appended after the structural ones.
class Tableau {
public:
    Tableau(const Matrix& a, const Vec& b, const LpOptions& opt, int max_iter)
        : m_(a.rows()), ns_(a.cols()), opt_(opt), max_iter_(max_iter), a_(a), b_(b) {
        t_.setZero(m_, ns_ + m_ + 1);
        t_.leftCols(ns_) = a;
        t_.block(0, ns_, m_, m_).setIdentity();
        t_.col(rhs()) = b;
        basis_.resize(m_);
        for (Eigen::Index i = 0; i < m_; ++i) basis_[i] = ns_ + i;
        r_.setZero(ns_ + m_ + 1);
    }

    Eigen::Index rhs() const { return ns_ + m_; }
    const std::vector<Eigen::Index>& basis() const { return basis_; }
    int iterations() const { return iterations_; }
    Scalar value(Eigen::Index i) const { return t_(i, rhs()); }

    /// Loads objective costs (length ns + m) and rebuilds the reduced-cost row.
    void set_costs(const Vec& cost) {
        cost_ = cost;
        r_.head(ns_ + m_) = cost;
        r_[rhs()] = 0.0;
        for (Eigen::Index i = 0; i < m_; ++i) {
            const Scalar cb = cost[basis_[i]];
            if (cb != 0.0) r_ -= cb * t_.row(i).transpose();
        }
    }

    Scalar objective() const { return -r_[rhs()]; }

    /// Runs simplex iterations; returns false when unbounded.
    bool optimize(bool allow_artificial) {
        const Eigen::Index limit = allow_artificial ? ns_ + m_ : ns_;
        for (;;) {
            Eigen::Index q = -1;
            for (Eigen::Index j = 0; j < limit; ++j) {
                if (r_[j] > opt_.cost_tol) {
                    q = j;
                    break;
                }
            }
            if (q < 0) return true;

            // Harris two-pass ratio test: the widest step keeping every basic
            // value above -feas_tol, then the largest pivot within that step
            Scalar theta = std::numeric_limits<Scalar>::infinity();
            for (Eigen::Index i = 0; i < m_; ++i) {
                const Scalar piv = t_(i, q);
                if (piv <= opt_.pivot_tol) continue;
                theta = std::min(theta, (std::max<Scalar>(0.0, t_(i, rhs())) + opt_.feas_tol) / piv);
            }
            Eigen::Index p = -1;
            for (Eigen::Index i = 0; i < m_; ++i) {
                const Scalar piv = t_(i, q);
                if (piv <= opt_.pivot_tol) continue;
                if (std::max<Scalar>(0.0, t_(i, rhs())) / piv > theta) continue;
                if (p < 0 || piv > t_(p, q) || (piv == t_(p, q) && basis_[i] < basis_[p])) p = i;
            }
            if (p < 0) return false;
            pivot(p, q);
            if (++iterations_ > max_iter_) throw StallError{};
            if (iterations_ % kReinvertEvery == 0) reinvert();
        }
    }

    void pivot(Eigen::Index p, Eigen::Index q) {
        t_.row(p) /= t_(p, q);
        Vec col = t_.col(q);
        col[p] = 0.0;
        t_.noalias() -= col * t_.row(p);
        t_.col(q).setZero();
        t_(p, q) = 1.0;
        const Scalar rq = r_[q];
        if (rq != 0.0) {
            r_ -= rq * t_.row(p).transpose();
            r_[q] = 0.0;
        }
        basis_[p] = q;
    }

    /// Pivots basic artificials out of the basis where a structural column
    /// allows it. Rows that stay artificial are linearly redundant.
    void drive_out_artificials() {
        for (Eigen::Index i = 0; i < m_; ++i) {
            if (basis_[i] < ns_) continue;
            Eigen::Index q = -1;
            Scalar best = opt_.pivot_tol;
            for (Eigen::Index j = 0; j < ns_; ++j) {
                const Scalar a = std::abs(t_(i, j));
                if (a > best) {
                    best = a;
                    q = j;
                }
            }
            if (q >= 0) pivot(i, q);
        }
    }

    /// Recomputes the tableau from the original data for the current basis.
    /// Returns false when the basis matrix is singular.
    bool reinvert() {
        Matrix bm = Matrix::Zero(m_, m_);
        for (Eigen::Index k = 0; k < m_; ++k) {
            if (basis_[k] < ns_)
                bm.col(k) = a_.col(basis_[k]);
            else
                bm(basis_[k] - ns_, k) = 1.0;
        }
        const Eigen::PartialPivLU<Matrix> lu(bm);
        if (std::abs(lu.determinant()) == 0.0 || !lu.matrixLU().diagonal().allFinite()) return false;
        Matrix full(m_, ns_ + m_ + 1);
        full.leftCols(ns_) = a_;
        full.block(0, ns_, m_, m_).setIdentity();
        full.col(rhs()) = b_;
        Matrix t = lu.solve(full);
        if (!t.allFinite()) return false;
        t_ = std::move(t);
        for (Eigen::Index k = 0; k < m_; ++k) {
            t_.col(basis_[k]).setZero();
            t_(k, basis_[k]) = 1.0;
        }
        set_costs(cost_);
        return true;
    }

    /// Smallest basic value.
    Scalar min_value() const { return t_.col(rhs()).minCoeff(); }

    /// Basic values that Harris steps left slightly negative are set to zero.
    void clamp_values() {
        for (Eigen::Index i = 0; i < m_; ++i)
            if (t_(i, rhs()) < 0.0 && t_(i, rhs()) >= -opt_.feas_tol) t_(i, rhs()) = 0.0;
    }

private:
    static constexpr int kReinvertEvery = 50;

    Eigen::Index m_, ns_;
    LpOptions opt_;
    int max_iter_;
    int iterations_ = 0;
    Matrix a_;
    Vec b_;
    Matrix t_;
    Vec r_;
    Vec cost_;
    std::vector<Eigen::Index> basis_;
};

/// Basis matrix of [A | I] for the given basic column indices.
Matrix basis_matrix(const Matrix& a, const std::vector<Eigen::Index>& basis) {
    const auto m = a.rows();
    const auto ns = a.cols();
    Matrix bm = Matrix::Zero(m, m);
    for (Eigen::Index k = 0; k < m; ++k) {
        const auto j = basis[k];
        if (j < ns)
            bm.col(k) = a.col(j);
        else
            bm(j - ns, k) = 1.0;
    }
    return bm;
}

LpOutcome solve_once(const LpProblem& p, const Vec& b_in, const LpOptions& opt) {
    const auto m = p.A.rows();
    const auto n = p.A.cols();

    // column map of the standard form: free variables become (plus, minus)
    std::vector<Eigen::Index> plus(n), minus(n, -1);
    Eigen::Index ns = 0;
    for (Eigen::Index j = 0; j < n; ++j) {
        plus[j] = ns++;
        if (!p.nonneg[j]) minus[j] = ns++;
    }
    Vec sign = Vec::Ones(m);
    for (Eigen::Index i = 0; i < m; ++i)
        if (b_in[i] < 0.0) sign[i] = -1.0;

    Matrix a(m, ns);
    Vec c(ns);
    for (Eigen::Index j = 0; j < n; ++j) {
        a.col(plus[j]) = sign.cwiseProduct(p.A.col(j));
        c[plus[j]] = p.c[j];
        if (minus[j] >= 0) {
            a.col(minus[j]) = -a.col(plus[j]);
            c[minus[j]] = -p.c[j];
        }
    }
    const Vec b = sign.cwiseProduct(b_in);

    LpOutcome out;
    if (m == 0) {
        // no constraints: optimal at 0 unless some improving direction exists
        for (Eigen::Index j = 0; j < ns; ++j) {
            if (c[j] > opt.cost_tol) {
                out.status = LpStatus::unbounded;
                return out;
            }
        }
        out.status = LpStatus::optimal;
        out.z = Vec::Zero(n);
        out.objective = 0.0;
        out.dual = Vec(0);
        return out;
    }

    const int max_iter = opt.max_iterations > 0
                             ? opt.max_iterations
                             : static_cast<int>(50 * (m + ns) + 1000);
    Tableau tab(a, b, opt, max_iter);

    // phase 1: maximize -(sum of artificials)
    Vec cost1 = Vec::Zero(ns + m);
    cost1.tail(m).setConstant(-1.0);
    tab.set_costs(cost1);
    tab.optimize(true);
    const Scalar bscale = std::max<Scalar>(1.0, b.cwiseAbs().maxCoeff());
    if (!tab.reinvert() || tab.min_value() < -opt.feas_tol * bscale) throw StallError{};
    tab.clamp_values();
    tab.optimize(true);
    const Scalar infeas = -tab.objective();

    if (infeas > opt.feas_tol * bscale) {
        // Farkas ray from the phase-1 dual: B^T y1 = cost1_B, certificate -y1
        const Matrix bm = basis_matrix(a, tab.basis());
        Vec cb(m);
        for (Eigen::Index k = 0; k < m; ++k) cb[k] = cost1[tab.basis()[k]];
        Vec y = -bm.transpose().fullPivLu().solve(cb);
        Vec yo = sign.cwiseProduct(y);
        const Scalar norm = yo.cwiseAbs().maxCoeff();
        if (norm > 0.0) yo /= norm;
        out.status = LpStatus::infeasible;
        out.dual = yo;
        out.iterations = tab.iterations();
        return out;
    }

    tab.drive_out_artificials();
    Vec cost2 = Vec::Zero(ns + m);
    cost2.head(ns) = c;
    tab.set_costs(cost2);
    // optimize, then reoptimize from a freshly inverted tableau until the
    // basis is confirmed against the original data
    const Scalar neg_tol = opt.feas_tol * bscale;
    for (int round = 0;; ++round) {
        if (!tab.optimize(false)) {
            out.status = LpStatus::unbounded;
            out.iterations = tab.iterations();
            return out;
        }
        const Scalar before = tab.objective();
        if (!tab.reinvert() || tab.min_value() < -neg_tol) throw StallError{};
        tab.clamp_values();
        if (std::abs(tab.objective() - before) <= opt.feas_tol * std::max<Scalar>(1.0, std::abs(before))) break;
        if (round >= 3) throw StallError{};
    }

    const auto& basis = tab.basis();
    const Matrix bm = basis_matrix(a, basis);
    const Eigen::FullPivLU<Matrix> lu(bm);

    Vec xb(m);
    for (Eigen::Index k = 0; k < m; ++k) xb[k] = tab.value(k);

    Vec x = Vec::Zero(ns + m);
    for (Eigen::Index k = 0; k < m; ++k) x[basis[k]] = xb[k];
    for (Eigen::Index j = 0; j < ns; ++j)
        if (x[j] < 0.0 && x[j] > -opt.feas_tol) x[j] = 0.0;

    Vec z(n);
    for (Eigen::Index j = 0; j < n; ++j) z[j] = x[plus[j]] - (minus[j] >= 0 ? x[minus[j]] : 0.0);

    Vec cb(m);
    for (Eigen::Index k = 0; k < m; ++k) cb[k] = cost2[basis[k]];
    const Vec y = lu.transpose().solve(cb);

    out.status = LpStatus::optimal;
    out.z = z;
    out.objective = p.c.dot(z);
    out.dual = sign.cwiseProduct(y);
    out.iterations = tab.iterations();
    return out;
}

}  // namespace

LpOutcome solve(const LpProblem& p, const LpOptions& opt) {
    validate(p);
    try {
        return solve_once(p, p.b, opt);
    } catch (const StallError&) {
    }
    Vec b = p.b;
    for (Eigen::Index i = 0; i < b.size(); ++i) b[i] += 1e-12 * (1.0 + static_cast<Scalar>(i) / b.size());
    try {
        LpOutcome out = solve_once(p, b, opt);
        out.perturbed = true;
        return out;
    } catch (const StallError&) {
        throw NumericalError("ill-conditioned");
    }
}

namespace {
Scalar data_scale(const LpProblem& p) {
    Scalar s = 1.0;
    if (p.A.size() > 0) s = std::max(s, p.A.cwiseAbs().maxCoeff());
    if (p.b.size() > 0) s = std::max(s, p.b.cwiseAbs().maxCoeff());
    return s;
}
}  // namespace

bool check_farkas(const LpProblem& p, const Vec& y, Scalar tol) {
    if (y.size() != p.A.rows()) return false;
    const Scalar s = data_scale(p) * std::max<Scalar>(1.0, y.cwiseAbs().maxCoeff());
    const Vec g = p.A.transpose() * y;
    for (Eigen::Index j = 0; j < g.size(); ++j) {
        if (p.nonneg[j] ? g[j] > tol * s : std::abs(g[j]) > tol * s) return false;
    }
    return p.b.dot(y) > tol;
}

bool check_optimal(const LpProblem& p, const LpOutcome& out, Scalar tol) {
    if (out.status != LpStatus::optimal || !out.z || !out.dual) return false;
    const Vec& z = *out.z;
    const Vec& y = *out.dual;
    const Scalar s = std::max(data_scale(p), p.c.size() > 0 ? p.c.cwiseAbs().maxCoeff() : 1.0);
    const Scalar zs = std::max<Scalar>(1.0, z.cwiseAbs().maxCoeff());
    const Scalar ys = std::max<Scalar>(1.0, y.cwiseAbs().maxCoeff());
    if ((p.A * z - p.b).cwiseAbs().maxCoeff() > tol * s * zs) return false;
    const Vec g = p.A.transpose() * y - p.c;
    for (Eigen::Index j = 0; j < z.size(); ++j) {
        if (p.nonneg[j]) {
            if (z[j] < -tol * zs) return false;
            if (g[j] < -tol * s * ys) return false;
            if (std::abs(z[j] * g[j]) > tol * s * ys * zs) return false;
        } else if (std::abs(g[j]) > tol * s * ys) {
            return false;
        }
    }
    return std::abs(p.c.dot(z) - p.b.dot(y)) <= tol * s * ys * zs * std::max<Eigen::Index>(1, z.size());
}

}  // namespace polycover::lp
