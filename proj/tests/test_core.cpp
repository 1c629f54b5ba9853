#include <doctest.h>

#include "polycover/core.hpp"
#include "test_util.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>

using namespace polycover;
using testutil::vec;

namespace {

bool orthonormal(const Subspace& s, Scalar tol = 1e-9) {
    const Matrix g = s.basis().transpose() * s.basis();
    return (g - Matrix::Identity(s.dim(), s.dim())).cwiseAbs().maxCoeff() <= tol;
}

}  // namespace

TEST_CASE("orthonormalize keeps an orthonormal basis") {
    Matrix m = Matrix::Zero(3, 2);
    m(0, 0) = 1.0;
    m(1, 1) = 1.0;
    const Subspace s = orthonormalize(m);
    CHECK((s.basis() - m).cwiseAbs().maxCoeff() <= 1e-15);
}

TEST_CASE("orthonormalize normalizes a single column") {
    Matrix m(2, 1);
    m << 3.0, 4.0;
    const Subspace s = orthonormalize(m);
    CHECK(s.basis()(0, 0) == doctest::Approx(0.6).epsilon(1e-15));
    CHECK(s.basis()(1, 0) == doctest::Approx(0.8).epsilon(1e-15));
}

TEST_CASE("orthonormalize performs the Gram-Schmidt step") {
    Matrix m(3, 2);
    m << 1, 1, 0, 1, 0, 0;
    const Subspace s = orthonormalize(m);
    Matrix expected = Matrix::Zero(3, 2);
    expected(0, 0) = 1.0;
    expected(1, 1) = 1.0;
    CHECK((s.basis() - expected).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("orthonormalize rejects rank-deficient input") {
    Matrix m(3, 2);
    m << 1, 2, 1, 2, 0, 0;
    CHECK_THROWS_WITH_AS(orthonormalize(m), "degenerate basis", PreconditionError);
}

TEST_CASE("orthonormalize is idempotent") {
    Rng rng(3);
    for (int trial = 0; trial < 50; ++trial) {
        const Subspace s = haar_subspace(4, 3, rng);
        const Subspace again = orthonormalize(s.basis());
        CHECK((again.basis() - s.basis()).cwiseAbs().maxCoeff() <= 1e-9);
    }
}

TEST_CASE("from_orthonormal validates its input") {
    Matrix m(2, 1);
    m << 1.0, 1.0;
    CHECK_THROWS_AS(Subspace::from_orthonormal(m), PreconditionError);
    CHECK(Subspace::from_orthonormal(m / std::sqrt(2.0)).dim() == 1);
}

TEST_CASE("haar_subspace covers the whole plane for n = d = 2") {
    Rng rng(11);
    const Subspace s = haar_subspace(2, 2, rng);
    CHECK(s.dim() == 2);
    CHECK(orthonormal(s));
}

TEST_CASE("haar_subspace is deterministic in the seed") {
    Rng a(42), b(42), c(43);
    const Subspace sa = haar_subspace(5, 2, a);
    const Subspace sb = haar_subspace(5, 2, b);
    const Subspace sc = haar_subspace(5, 2, c);
    CHECK(sa.basis() == sb.basis());
    CHECK(sa.basis() != sc.basis());
}

TEST_CASE("haar lines in R^3 average to the origin") {
    Rng rng(5);
    Vec mean = Vec::Zero(3);
    const int n = 100000;
    for (int i = 0; i < n; ++i) mean += haar_subspace(3, 1, rng).basis().col(0);
    mean /= n;
    CHECK(mean.norm() < 0.02);
}

TEST_CASE("haar column entries match Gaussian-sphere moments") {
    // one column of a Haar 2-plane in R^3 is uniform on the sphere: E x = 0, E x^2 = 1/3
    Rng rng(17);
    const int n = 10000;
    Vec sum = Vec::Zero(3), sum_sq = Vec::Zero(3);
    for (int i = 0; i < n; ++i) {
        const Vec c = haar_subspace(3, 2, rng).basis().col(1);
        sum += c;
        sum_sq += c.cwiseProduct(c);
    }
    // uniform sphere coordinate: var x = 1/3, var x^2 = 1/5 - 1/9
    const Scalar se_mean = std::sqrt(1.0 / 3.0 / n);
    const Scalar se_sq = std::sqrt((1.0 / 5.0 - 1.0 / 9.0) / n);
    for (int j = 0; j < 3; ++j) {
        CHECK(std::abs(sum[j] / n) <= 3.0 * se_mean);
        CHECK(std::abs(sum_sq[j] / n - 1.0 / 3.0) <= 3.0 * se_sq);
    }
}

TEST_CASE("random_unit returns unit vectors") {
    Rng rng(1);
    for (int i = 0; i < 100; ++i) CHECK(random_unit(4, rng).norm() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("direction_grid with four planar directions gives quarter turns") {
    const auto g = direction_grid(2, 4);
    REQUIRE(g.size() == 4);
    const Vec expected[] = {vec({1, 0}), vec({0, 1}), vec({-1, 0}), vec({0, -1})};
    for (int i = 0; i < 4; ++i) CHECK((g[i] - expected[i]).norm() <= 1e-12);
}

TEST_CASE("direction_grid in R^3 is a well separated unit lattice") {
    const auto g = direction_grid(3, 100);
    REQUIRE(g.size() == 100);
    Scalar min_angle = 10.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        CHECK(std::abs(g[i].norm() - 1.0) <= 1e-9);
        for (std::size_t j = i + 1; j < g.size(); ++j)
            min_angle = std::min(min_angle, std::acos(std::clamp(g[i].dot(g[j]), -1.0, 1.0)));
    }
    CHECK(min_angle > 0.1);
}

TEST_CASE("direction_grid planar gap is uniform") {
    const auto g = direction_grid(2, 1000);
    const Scalar gap = 2.0 * std::numbers::pi / 1000.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        const Vec& a = g[i];
        const Vec& b = g[(i + 1) % g.size()];
        CHECK(std::atan2(a[0] * b[1] - a[1] * b[0], a.dot(b)) == doctest::Approx(gap).epsilon(1e-9));
    }
}

TEST_CASE("direction_grid refuses dimensions above three") {
    CHECK_THROWS_AS(direction_grid(4, 10), PreconditionError);
}

TEST_CASE("orthogonal_complement spans u-perp") {
    Rng rng(8);
    for (int n = 2; n <= 5; ++n) {
        const Vec u = random_unit(n, rng);
        const Subspace s = orthogonal_complement(u);
        CHECK(s.dim() == n - 1);
        CHECK(orthonormal(s));
        CHECK((s.basis().transpose() * u).cwiseAbs().maxCoeff() <= 1e-12);
        CHECK(orthogonal_complement(u).basis() == s.basis());
    }
}

TEST_CASE("parallel_map is independent of the worker count") {
    const std::function<double(int)> f = [](int i) { return std::sin(0.1 * i) * i; };
    const auto one = parallel_map(257, 1, f);
    const auto four = parallel_map(257, 4, f);
    CHECK(one == four);
}
