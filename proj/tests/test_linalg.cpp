#include <doctest.h>

#include <cmath>
#include <random>

#include "meanking/linalg.hpp"
#include "test_util.hpp"

using namespace meanking;
using meanking::test::close;
using meanking::test::max_entry_diff;

namespace {

CVector random_vector(std::mt19937& rng, std::size_t dim) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    CVector v(dim);
    for (std::size_t i = 0; i < dim; ++i) v[i] = cplx(gauss(rng), gauss(rng));
    return v;
}

// Test-local orthonormalization used to manufacture random seeds; not the
// implementation under test.
std::vector<CVector> random_orthonormal(std::mt19937& rng, std::size_t dim, std::size_t count) {
    std::vector<CVector> out;
    while (out.size() < count) {
        CVector v = random_vector(rng, dim);
        for (const auto& u : out) v -= inner(u, v) * u;
        for (const auto& u : out) v -= inner(u, v) * u;
        const double nv = norm(v);
        if (nv > 1e-6) out.push_back((1.0 / nv) * v);
    }
    return out;
}

}  // namespace

TEST_SUITE("linalg") {

TEST_CASE("inner product basics") {
    const double s = 1.0 / std::sqrt(2.0);
    CHECK(close(inner(CVector{1, 0}, CVector{1, 0}), 1.0));
    CHECK(close(inner(CVector{1, 0}, CVector{0, 1}), 0.0));
    CHECK(close(inner(CVector{s, s}, CVector{s, -s}), 0.0));
    CHECK(close(inner(CVector{cplx(0, 1), 0}, CVector{1, 0}), cplx(0, -1)));  // conjugate-linear
    CHECK_THROWS_AS((void)inner(CVector{1, 0}, CVector{1, 0, 0}), std::invalid_argument);
}

TEST_CASE("inner product properties on random vectors") {
    std::mt19937 rng(2024);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t dim = 2 + static_cast<std::size_t>(rng() % 20);
        const CVector u = random_vector(rng, dim);
        const CVector v = random_vector(rng, dim);
        const cplx uu = inner(u, u);
        CHECK(uu.imag() == doctest::Approx(0.0).epsilon(1e-12));
        CHECK(uu.real() >= 0.0);
        // Cauchy-Schwarz
        CHECK(std::norm(inner(u, v)) <=
              uu.real() * inner(v, v).real() * (1.0 + 1e-12) + 1e-12);
    }
}

TEST_CASE("tensor product") {
    const CVector t = tensor(CVector{1, 0}, CVector{0, 1});
    REQUIRE(t.dim() == 4);
    CHECK(close(t[0], 0.0));
    CHECK(close(t[1], 1.0));
    CHECK(close(t[2], 0.0));
    CHECK(close(t[3], 0.0));

    const cplx a(0.3, -0.4), b(-1.1, 0.2);
    const CVector u = tensor(CVector{a, b}, CVector{1, 0});
    CHECK(close(u[0], a));
    CHECK(close(u[1], 0.0));
    CHECK(close(u[2], b));
    CHECK(close(u[3], 0.0));
}

TEST_CASE("tensor norm multiplicativity and associativity") {
    std::mt19937 rng(7);
    for (int trial = 0; trial < 20; ++trial) {
        const CVector u = random_vector(rng, 2 + rng() % 4);
        const CVector v = random_vector(rng, 2 + rng() % 4);
        const CVector w = random_vector(rng, 2 + rng() % 3);
        CHECK(norm(tensor(u, v)) == doctest::Approx(norm(u) * norm(v)).epsilon(1e-12));
        CHECK(max_entry_diff(tensor(tensor(u, v), w), tensor(u, tensor(v, w))) < 1e-12);
    }
}

TEST_CASE("gram_schmidt_complete examples") {
    SUBCASE("standard seed stays standard") {
        const auto full = gram_schmidt_complete({CVector{1, 0, 0}}, 3);
        REQUIRE(full.size() == 3);
        CHECK(max_entry_diff(full[0], CVector{1, 0, 0}) == 0.0);
        CHECK(max_entry_diff(full[1], CVector{0, 1, 0}) < 1e-14);
        CHECK(max_entry_diff(full[2], CVector{0, 0, 1}) < 1e-14);
    }
    SUBCASE("unique complement in dim 2, up to phase") {
        const double s = 1.0 / std::sqrt(2.0);
        const auto full = gram_schmidt_complete({CVector{s, s}}, 2);
        REQUIRE(full.size() == 2);
        CHECK(std::abs(inner(CVector{s, -s}, full[1])) == doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("empty seed gives the standard basis") {
        const auto full = gram_schmidt_complete({}, 4);
        REQUIRE(full.size() == 4);
        for (std::size_t i = 0; i < 4; ++i) {
            CHECK(max_entry_diff(full[i], CVector::basis(4, i)) == 0.0);
        }
    }
    SUBCASE("rejects non-orthonormal seeds, naming the pair") {
        const std::vector<CVector> bad{CVector{1, 0}, CVector{1, 0}};
        CHECK_THROWS_WITH_AS((void)gram_schmidt_complete(bad, 2),
                             doctest::Contains("pair (0,1)"), std::invalid_argument);
    }
    SUBCASE("too many seeds") {
        const std::vector<CVector> seeds{CVector{1, 0}, CVector{0, 1}};
        CHECK_THROWS_AS((void)gram_schmidt_complete(seeds, 1), std::invalid_argument);
    }
}

TEST_CASE("gram_schmidt_complete output is orthonormal for random seeds") {
    std::mt19937 rng(99);
    const Tolerance tol;
    for (std::size_t dim : {2u, 3u, 5u, 11u, 24u, 50u}) {
        const std::size_t count = 1 + rng() % dim;
        const auto seeds = random_orthonormal(rng, dim, count);
        const auto full = gram_schmidt_complete(seeds, dim, tol);
        REQUIRE(full.size() == dim);
        const auto check = is_orthonormal(full, tol);
        CHECK(check.pass);
        // Seeds are preserved verbatim at the front.
        for (std::size_t i = 0; i < count; ++i) {
            CHECK(max_entry_diff(full[i], seeds[i]) == 0.0);
        }
    }
}

TEST_CASE("is_orthonormal / is_unitary / is_psd") {
    const Tolerance tol;
    SUBCASE("identity matrix is unitary with zero residual") {
        const auto res = is_unitary(CMatrix::identity(3), tol);
        CHECK(res.pass);
        CHECK(res.residual == 0.0);
    }
    SUBCASE("repeated vector fails orthonormality with residual 1") {
        const auto res = is_orthonormal({CVector{1, 0}, CVector{1, 0}}, tol);
        CHECK_FALSE(res.pass);
        CHECK(res.residual == doctest::Approx(1.0));
        CHECK(res.detail == "worst pair (0,1)");
    }
    SUBCASE("diag(1,0) is psd with min eigenvalue 0") {
        CMatrix m(2, 2);
        m.at(0, 0) = 1.0;
        const auto res = is_psd(m, tol);
        CHECK(res.pass);
        CHECK(res.residual == doctest::Approx(0.0));
    }
    SUBCASE("negative eigenvalue fails psd") {
        CMatrix m(2, 2);
        m.at(0, 0) = 1.0;
        m.at(1, 1) = -0.5;
        const auto res = is_psd(m, tol);
        CHECK_FALSE(res.pass);
        CHECK(res.residual == doctest::Approx(0.5).epsilon(1e-9));
    }
    SUBCASE("non-Hermitian input is rejected") {
        CMatrix m(2, 2);
        m.at(0, 1) = 1.0;
        CHECK_THROWS_AS((void)is_psd(m, tol), std::invalid_argument);
    }
    SUBCASE("non-square is rejected") {
        CHECK_THROWS_AS((void)is_unitary(CMatrix(2, 3), tol), std::invalid_argument);
    }
}

TEST_CASE("unit roots") {
    CHECK(close(unit_root_pow(4, 1), cplx(0, 1)));
    CHECK(close(unit_root_pow(4, -1), cplx(0, -1)));
    CHECK(close(unit_root_pow(5, 5), 1.0));
    CHECK(close(unit_root_pow(3, -4), unit_root_pow(3, 2)));
}

TEST_CASE("span rank") {
    const double s = 1.0 / std::sqrt(2.0);
    const std::vector<CVector> vs{CVector{1, 0, 0}, CVector{0, 1, 0}, CVector{s, s, 0}};
    CHECK(span_rank(vs) == 2);
    CHECK(span_rank({}) == 0);
}

}  // TEST_SUITE
