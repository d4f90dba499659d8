#include <catch_amalgamated.hpp>
#include <set>

#include "gen.hpp"
#include "ptw/matrix.hpp"

using namespace ptw;

TEST_CASE("rref and kernel over F2", "[linear]") {
    Fp f(2);
    auto m = Matrix<Fp>::from_ints(f, {{1, 1}, {1, 1}});
    auto r = rref(m);
    CHECK(r.rank == 1);
    CHECK(r.reduced == Matrix<Fp>::from_ints(f, {{1, 1}, {0, 0}}));
    auto k = kernel_basis(m);
    REQUIRE(k.cols() == 1);
    CHECK(k == Matrix<Fp>::from_ints(f, {{1}, {1}}));
}

TEST_CASE("solve over Q", "[linear]") {
    Q q;
    auto a = Matrix<Q>::from_ints(q, {{2}});
    auto b = Matrix<Q>::from_ints(q, {{1}});
    auto x = solve(a, b);
    CHECK(x(0, 0) == mpq_class(1, 2));
    CHECK_THROWS_AS(solve(Matrix<Q>::from_ints(q, {{0}}), b), NoSolution);
}

TEST_CASE("inverse over F2", "[linear]") {
    Fp f(2);
    auto m = Matrix<Fp>::from_ints(f, {{1, 1}, {0, 1}});
    CHECK(invert(m) == m);
    CHECK_THROWS_AS(invert(Matrix<Fp>::from_ints(f, {{1, 1}, {1, 1}})), NotInvertible);
}

TEST_CASE("empty shapes", "[linear]") {
    Fp f(3);
    Matrix<Fp> a(f, 0, 3), b(f, 3, 0);
    CHECK((b * a).rows() == 3);
    CHECK((a * b).rows() == 0);
    CHECK(rank(a) == 0);
    CHECK(kernel_basis(a).cols() == 3);
    CHECK(kernel_basis(b).cols() == 0);
}

TEST_CASE("scalar arithmetic over F5", "[linear]") {
    Fp f(5);
    CHECK(f.inv(2) == 3);
    CHECK(f.from_int(-1) == 4);
    CHECK(f.parse("1/2") == 3);
    CHECK_THROWS(Fp(4));
}

namespace {

// Size of the row space over F_p by enumerating all combinations of rows.
std::size_t rowspace_size(const Matrix<Fp>& m) {
    Fp f = m.field();
    std::set<std::vector<std::uint32_t>> seen;
    std::uint64_t total = 1;
    for (std::size_t i = 0; i < m.rows(); ++i) total *= f.p;
    for (std::uint64_t code = 0; code < total; ++code) {
        std::vector<std::uint32_t> v(m.cols(), 0);
        std::uint64_t x = code;
        for (std::size_t i = 0; i < m.rows(); ++i) {
            std::uint32_t c = static_cast<std::uint32_t>(x % f.p);
            x /= f.p;
            for (std::size_t j = 0; j < m.cols(); ++j) v[j] = f.add(v[j], f.mul(c, m(i, j)));
        }
        seen.insert(v);
    }
    return seen.size();
}

template <class F>
void linear_properties(const F& f, std::uint64_t seed) {
    Rng rng(seed);
    for (int it = 0; it < 200; ++it) {
        std::size_t r = rng() % 7, c = rng() % 7;
        auto m = gen::matrix(f, rng, r, c);
        auto rr = rref(m);
        // idempotence
        REQUIRE(rref(rr.reduced).reduced == rr.reduced);
        // rank-nullity and kernel correctness
        auto k = kernel_basis(m);
        REQUIRE(rr.rank + k.cols() == c);
        REQUIRE((m * k).is_zero());
        REQUIRE(rank(k) == k.cols());
        REQUIRE(rank(m.transpose()) == rr.rank);
        // solve round trip
        auto x0 = gen::matrix(f, rng, c, 1, 0);
        auto b = m * x0;
        auto x = solve(m, b);
        REQUIRE(m * x == b);
        // inverse of a square matrix when full rank
        if (r == c && rr.rank == r) {
            auto inv = invert(m);
            REQUIRE(m * inv == Matrix<F>::identity(f, r));
            REQUIRE(inv * m == Matrix<F>::identity(f, r));
        }
        auto cs = column_space(m);
        REQUIRE(cs.cols() == rr.rank);
    }
}

}  // namespace

TEST_CASE("rank agrees with row-space enumeration", "[linear]") {
    Rng rng(77);
    for (std::uint32_t p : {2u, 3u}) {
        Fp f(p);
        for (int it = 0; it < 200; ++it) {
            std::size_t r = rng() % 5, c = rng() % 6;
            auto m = gen::matrix(f, rng, r, c);
            std::size_t size = rowspace_size(m), expect = 1;
            for (std::size_t t = 0; t < rank(m); ++t) expect *= p;
            REQUIRE(size == expect);
        }
    }
}

TEST_CASE("linear algebra properties (200 seeded cases per field)", "[linear][property]") {
    linear_properties(Fp(2), 11);
    linear_properties(Fp(3), 12);
    linear_properties(Fp(5), 13);
    linear_properties(Q(), 14);
}

TEST_CASE("span builder", "[linear]") {
    Fp f(3);
    SpanBuilder<Fp> s(f, 3);
    CHECK(s.add({1, 2, 0}));
    CHECK(!s.add({2, 1, 0}));
    CHECK(s.add({0, 0, 1}));
    CHECK(s.contains({1, 2, 2}));
    CHECK(!s.contains({0, 1, 0}));
    CHECK(s.rank() == 2);
}
