#include "polycover/core.hpp"

#include <atomic>
#include <cmath>
#include <numbers>

namespace polycover {

Subspace Subspace::from_orthonormal(Matrix basis, Scalar tol) {
    if (basis.cols() < 1 || basis.cols() > basis.rows())
        throw PreconditionError("subspace dimension must satisfy 1 <= d <= n");
    const Matrix gram = basis.transpose() * basis;
    const Matrix id = Matrix::Identity(basis.cols(), basis.cols());
    if ((gram - id).cwiseAbs().maxCoeff() > tol)
        throw PreconditionError("basis is not orthonormal");
    return Subspace(std::move(basis));
}

Subspace orthonormalize(const Matrix& m, Scalar tol) {
    const auto n = m.rows();
    const auto d = m.cols();
    if (d < 1 || d > n) throw PreconditionError("subspace dimension must satisfy 1 <= d <= n");
    if (!m.allFinite()) throw PreconditionError("non-finite basis entries");

    Matrix q = m;
    for (Eigen::Index j = 0; j < d; ++j) {
        const Scalar scale = std::max<Scalar>(1.0, m.col(j).norm());
        // second pass cleans up the loss of orthogonality of classical GS
        for (int pass = 0; pass < 2; ++pass) {
            for (Eigen::Index k = 0; k < j; ++k) q.col(j) -= q.col(k).dot(q.col(j)) * q.col(k);
        }
        const Scalar norm = q.col(j).norm();
        if (norm <= tol * scale) throw PreconditionError("degenerate basis");
        q.col(j) /= norm;
    }
    return Subspace(std::move(q));
}

Vec random_unit(int n, Rng& rng) {
    if (n < 1) throw PreconditionError("dimension must be positive");
    std::normal_distribution<Scalar> gauss(0.0, 1.0);
    Vec u(n);
    Scalar norm = 0.0;
    while (norm < 1e-12) {
        for (int i = 0; i < n; ++i) u[i] = gauss(rng);
        norm = u.norm();
    }
    return u / norm;
}

Subspace haar_subspace(int n, int d, Rng& rng) {
    if (d < 1 || d > n) throw PreconditionError("haar_subspace requires 1 <= d <= n");
    std::normal_distribution<Scalar> gauss(0.0, 1.0);
    for (;;) {
        Matrix g(n, d);
        for (int j = 0; j < d; ++j)
            for (int i = 0; i < n; ++i) g(i, j) = gauss(rng);
        try {
            return orthonormalize(g);
        } catch (const PreconditionError&) {
            // probability zero; redraw
        }
    }
}

std::vector<Vec> direction_grid(int n, int count) {
    if (n > 3) throw PreconditionError("grid unsupported; use haar sampling");
    if (n < 2) throw PreconditionError("direction grid requires n in {2,3}");
    if (count < 4) throw PreconditionError("direction grid requires count >= 4");

    std::vector<Vec> out;
    out.reserve(count);
    if (n == 2) {
        for (int k = 0; k < count; ++k) {
            const Scalar a = 2.0 * std::numbers::pi * k / count;
            Vec u(2);
            u << std::cos(a), std::sin(a);
            out.push_back(u);
        }
        return out;
    }
    const Scalar golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
    for (int k = 0; k < count; ++k) {
        const Scalar z = 1.0 - (2.0 * k + 1.0) / count;
        const Scalar r = std::sqrt(std::max<Scalar>(0.0, 1.0 - z * z));
        const Scalar phi = golden * k;
        Vec u(3);
        u << r * std::cos(phi), r * std::sin(phi), z;
        out.push_back(u.normalized());
    }
    return out;
}

Subspace orthogonal_complement(const Vec& u) {
    const auto n = u.size();
    if (n < 2) throw PreconditionError("orthogonal complement needs n >= 2");
    const Scalar norm = u.norm();
    if (!(norm > 0.0)) throw PreconditionError("zero direction");
    const Vec unit = u / norm;

    // H = I - 2 w w^T / (w^T w) with w = u + sign(u_0) e_0 sends u to -sign(u_0) e_0,
    // so columns 1..n-1 of H span u^perp.
    Vec w = unit;
    const Scalar s = unit[0] >= 0.0 ? 1.0 : -1.0;
    w[0] += s;
    const Matrix h = Matrix::Identity(n, n) - (2.0 / w.squaredNorm()) * (w * w.transpose());
    return Subspace::from_orthonormal(h.rightCols(n - 1), 1e-9);
}

namespace {
std::atomic<int> g_workers{1};
}

int default_workers() { return g_workers.load(); }
void set_default_workers(int workers) { g_workers.store(std::max(1, workers)); }

}  // namespace polycover
