#include <catch_amalgamated.hpp>

#include "ptw/fixtures.hpp"
#include "ptw/periodicity.hpp"

using namespace ptw;

namespace {

template <class F>
using Vec = std::vector<typename F::value_type>;

// u (x) v as coordinates in the block Proj(0) of E^en for a local E.
template <class F>
Vec<F> tensor_elem(const Algebra<F>& E, const Algebra<F>& Een, const Vec<F>& u, const Vec<F>& v) {
    const F& f = E.field;
    const std::size_t dE = E.dim();
    Vec<F> y(Een.proj_basis[0].size(), f.zero());
    for (std::size_t i = 0; i < dE; ++i)
        for (std::size_t j = 0; j < dE; ++j)
            if (!f.is_zero(u[i]) && !f.is_zero(v[j])) {
                std::size_t pos = Een.proj_pos[i * dE + j];
                y[pos] = f.add(y[pos], f.mul(u[i], v[j]));
            }
    return y;
}

template <class F>
std::vector<Vec<F>> powers_of_x(const Algebra<F>& E, std::size_t n) {
    std::vector<Vec<F>> xp{E.unit()};
    Vec<F> x = E.basis_vec(E.arrows.at(0));
    for (std::size_t j = 1; j <= n; ++j) xp.push_back(E.mul(xp.back(), x));
    return xp;
}

// Hand-written resolution of k[x]/(x^{n+1}): degree -m -> -(m-1) is
// 1(x)x - x(x)1 for m odd and sum_j x^j (x) x^{n-j} for m even.
template <class F>
Complex<F> truncated_poly_pattern(AlgebraPtr<F> E, AlgebraPtr<F> Een, std::size_t n, std::size_t nterms) {
    const F& f = E->field;
    auto xp = powers_of_x(*E, n);
    Vec<F> odd = tensor_elem(*E, *Een, xp[0], xp[1]);
    axpy(f, odd, f.neg(f.one()), tensor_elem(*E, *Een, xp[1], xp[0]));
    Vec<F> even(odd.size(), f.zero());
    for (std::size_t j = 0; j <= n; ++j) axpy(f, even, f.one(), tensor_elem(*E, *Een, xp[j], xp[n - j]));
    auto S = stalk<F>(Een, E, {Block<F>::proj(0)}, 0);
    Complex<F> Y = empty_complex(Een, E);
    Y.lo = -static_cast<int>(nterms - 1);
    for (std::size_t t = 0; t < nterms; ++t) Y.terms.push_back({Block<F>::proj(0)});
    for (int deg = Y.lo; deg < 0; ++deg) {
        const int m = -deg;
        Y.d.push_back(detail::expand_from_generator(S, Block<F>::proj(0), S, 0, m % 2 ? odd : even));
    }
    return Y;
}

// The pattern truncated at period 2, with kernel generator sum_j x^j (x) x^{n-j}.
template <class F>
TruncatedResolution<F> pattern_resolution(AlgebraPtr<F> E, AlgebraPtr<F> Een, std::size_t n) {
    TruncatedResolution<F> t;
    t.E = E;
    t.Een = Een;
    t.n = 2;
    t.Y = truncated_poly_pattern(E, Een, n, 2);
    t.aug = detail::multiplication_map(t.Y, 0);
    auto xp = powers_of_x(*E, n);
    t.k.assign(t.Y.dim(-1), E->field.zero());
    for (std::size_t j = 0; j <= n; ++j) axpy(E->field, t.k, E->field.one(), tensor_elem(*E, *Een, xp[j], xp[n - j]));
    t.theta = left_orbit_matrix(t.Y, -1, t.k);
    t.sigma = Matrix<F>::identity(E->field, E->dim());
    t.perm = {0};
    return t;
}

}  // namespace

TEST_CASE("bimodule resolution of k[x]/(x^2)", "[periodicity]") {
    for (std::uint32_t p : {2u, 3u, 5u}) {
        Fp f(p);
        auto E = share_algebra(truncated_polynomial(f, 1));
        auto br = bimodule_resolution(E, 4);
        REQUIRE(br.Y.lo == -3);
        for (int d = -3; d <= 0; ++d) {
            CHECK(br.Y.dim(d) == 4);
            CHECK(br.Y.blocks(d).size() == 1);
        }
        CHECK(check_complex(br.Y).empty());
        auto pat = truncated_poly_pattern(E, br.Een, 1, 4);
        REQUIRE(check_complex(pat).empty());
        CHECK(homotopy_equivalent(br.Y, pat).verdict == Verdict::Yes);

        auto c = certify_twisted_periodicity(E, 3);
        REQUIRE(c.res);
        CHECK(c.res->n == 1);
        auto x = E->basis_vec(E->arrows[0]);
        Vec<Fp> minus_x(2, f.zero());
        axpy(f, minus_x, f.neg(f.one()), x);
        CHECK(c.res->sigma.apply(x) == minus_x);
        CHECK(c.res->sigma.apply(E->unit()) == E->unit());
        CHECK(verify_truncated(*c.res).ok());
    }
}

TEST_CASE("truncated polynomial rings have period 2", "[periodicity]") {
    for (std::uint32_t p : {2u, 3u, 5u})
        for (std::size_t n : {1u, 2u, 3u}) {
            Fp f(p);
            auto E = share_algebra(truncated_polynomial(f, n));
            auto Een = share_algebra(enveloping(*E));
            // the hand-written pattern is itself a truncated resolution
            auto pat = pattern_resolution(E, Een, n);
            auto pv = verify_truncated(pat);
            INFO("p=" << p << " n=" << n << " " << pv.first_failure());
            REQUIRE(pv.ok());
            auto c = certify_twisted_periodicity(E, 3, 0, 4096, Een);
            REQUIRE(c.res);
            CHECK(c.res->n == (n == 1 ? 1u : 2u));
            auto r2 = splice_power(*c.res, 2);
            CHECK(r2.n == 2);
            CHECK(r2.sigma == Matrix<Fp>::identity(f, E->dim()));
            CHECK(verify_truncated(r2).ok());
            auto he = homotopy_equivalent(r2.Y, pat.Y);
            CHECK(he.verdict == Verdict::Yes);
            // three terms, to see the even differential
            auto br = bimodule_resolution(E, 3, Een);
            CHECK(homotopy_equivalent(br.Y, truncated_poly_pattern(E, Een, n, 3)).verdict == Verdict::Yes);
        }
}

TEST_CASE("A2 trivial extension is twisted periodic with the vertex swap", "[periodicity]") {
    for (std::uint32_t p : {2u, 3u}) {
        Fp f(p);
        auto E = share_algebra(a2_trivial_extension(f));
        auto c = certify_twisted_periodicity(E, 4);
        REQUIRE(c.res);
        CHECK(c.res->n == 2);
        CHECK(c.res->perm == std::vector<std::size_t>{1, 0});
        CHECK(c.res->Y.dim(-1) == c.res->Y.dim(0));
        auto v = verify_truncated(*c.res);
        INFO(v.first_failure());
        CHECK(v.ok());
        // splice with itself: period 4, sigma^2 fixes the idempotents
        auto s = splice(*c.res, *c.res);
        CHECK(s.n == 4);
        CHECK(s.perm == std::vector<std::size_t>{0, 1});
        CHECK(s.sigma == c.res->sigma * c.res->sigma);
        auto vs = verify_truncated(s);
        INFO(vs.first_failure());
        CHECK(vs.ok());
    }
}

TEST_CASE("semisimple algebras resolve in one step", "[periodicity]") {
    Fp f(3);
    auto k = ground_field_algebra(f);
    auto E = share_algebra(product_algebra(k, k));
    auto br = bimodule_resolution(E, 3);
    CHECK(br.Y.lo == 0);
    CHECK(br.kernels.back().cols() == 0);
    auto c = certify_twisted_periodicity(E, 3);
    CHECK(!c.res);
    auto sc = simple_screen(E, 4);
    for (const auto& e : sc) {
        CHECK(e.projective);
        CHECK(!e.period);
    }
}

TEST_CASE("simple screen for truncated polynomial rings", "[periodicity]") {
    for (std::uint32_t p : {2u, 3u})
        for (std::size_t n : {1u, 2u, 3u}) {
            Fp f(p);
            auto E = share_algebra(truncated_polynomial(f, n));
            auto sc = simple_screen(E, 4);
            REQUIRE(sc.size() == 1);
            REQUIRE(sc[0].period);
            CHECK(*sc[0].period == (n == 1 ? 1u : 2u));
            // syzygy dimensions alternate n, 1: every cover is the regular module
            for (auto d : sc[0].cover_dims) CHECK(d == n + 1);
            auto c = certify_twisted_periodicity(E, 4);
            CHECK(c.res);
        }
}

TEST_CASE("quaternion group algebra over F2", "[periodicity]") {
    Fp f(2);
    std::vector<Vec<Fp>> g;
    auto E = share_algebra(quaternion_group_algebra(f, &g));
    auto sc = simple_screen(E, 6);
    REQUIRE(sc.size() == 1);
    REQUIRE(sc[0].period);
    CHECK(*sc[0].period == 4);
    CHECK(sc[0].cover_dims == std::vector<std::size_t>{8, 16, 16, 8});
    REQUIRE(sc[0].witness);
    CHECK(rank(*sc[0].witness) == 1);

    // one-sided resolution entered from the known differentials;
    // element indices: 1, i, j, k, -1, -i, -j, -k
    auto add = [&](std::size_t a, std::size_t b) {
        Vec<Fp> v = g[a];
        axpy(f, v, f.one(), g[b]);
        return v;
    };
    const Vec<Fp> i1 = add(1, 0), j1 = add(2, 0), ji1 = add(7, 0), ij1 = add(3, 0);
    auto S1 = stalk<Fp>(E, nullptr, {Block<Fp>::proj(0)}, 0);
    auto S2 = stalk<Fp>(E, nullptr, {Block<Fp>::proj(0), Block<Fp>::proj(0)}, 0);
    auto gen_map = [&](const Complex<Fp>& tgt, const std::vector<Vec<Fp>>& imgs) {
        // one column block per source generator; imgs lists the target coordinates
        return detail::expand_from_generator(S1, Block<Fp>::proj(0), tgt, 0, [&] {
            Vec<Fp> y;
            for (const auto& v : imgs) y.insert(y.end(), v.begin(), v.end());
            return y;
        }());
    };
    Complex<Fp> R = empty_complex(E);
    R.lo = -3;
    R.terms = {{Block<Fp>::proj(0)}, {Block<Fp>::proj(0), Block<Fp>::proj(0)},
               {Block<Fp>::proj(0), Block<Fp>::proj(0)}, {Block<Fp>::proj(0)}};
    // d3(delta) = (i+1) gamma + (j+1) gamma'
    R.d.push_back(gen_map(S2, {i1, j1}));
    // d2(gamma) = (j+1) beta + (ji+1) beta', d2(gamma') = (ij+1) beta + (i+1) beta'
    R.d.push_back(Matrix<Fp>::hstack(gen_map(S2, {j1, ji1}), gen_map(S2, {ij1, i1})));
    // d1(beta) = (i+1) alpha, d1(beta') = (j+1) alpha
    R.d.push_back(Matrix<Fp>::hstack(gen_map(S1, {i1}), gen_map(S1, {j1})));
    REQUIRE(check_complex(R).empty());
    std::vector<std::size_t> dims;
    for (int d = 0; d >= -3; --d) dims.push_back(R.dim(d));
    CHECK(dims == std::vector<std::size_t>{8, 16, 16, 8});
    // augmentation g -> 1 and socle inclusion 1 -> sum of g
    Matrix<Fp> G = Matrix<Fp>::from_columns(f, 8, g);
    Matrix<Fp> ones(f, 1, 8);
    for (std::size_t c = 0; c < 8; ++c) ones(0, c) = f.one();
    Matrix<Fp> eps = ones * invert(G);
    Vec<Fp> norm(8, f.zero());
    for (const auto& v : g) axpy(f, norm, f.one(), v);
    CHECK(rank(eps) == 1);
    CHECK((eps * R.diff(-1)).is_zero());
    CHECK(rank(R.diff(-1)) == 7);
    CHECK(homology_dims(R) == std::map<int, std::size_t>{{-3, 1}, {0, 1}});
    CHECK(R.diff(-3).apply(norm) == zero_vec(f, 16));

    // the induced bimodule resolution: w alpha becomes sum_x w_x x (x) x^{-1}
    auto Een = share_algebra(enveloping(*E));
    auto inv = [](std::size_t x) { return x % 4 == 0 ? x : (x + 4) % 8; };
    auto induced = [&](const Vec<Fp>& w) {
        Vec<Fp> c = invert(G).apply(w);  // group coordinates of w
        Vec<Fp> y(Een->proj_basis[0].size(), f.zero());
        for (std::size_t x = 0; x < 8; ++x)
            if (!f.is_zero(c[x])) axpy(f, y, c[x], tensor_elem(*E, *Een, g[x], g[inv(x)]));
        return y;
    };
    auto B1 = stalk<Fp>(Een, E, {Block<Fp>::proj(0)}, 0);
    auto B2 = stalk<Fp>(Een, E, {Block<Fp>::proj(0), Block<Fp>::proj(0)}, 0);
    auto bgen = [&](const Complex<Fp>& tgt, const std::vector<Vec<Fp>>& ws) {
        Vec<Fp> y;
        for (const auto& w : ws) {
            auto part = induced(w);
            y.insert(y.end(), part.begin(), part.end());
        }
        return detail::expand_from_generator(B1, Block<Fp>::proj(0), tgt, 0, y);
    };
    TruncatedResolution<Fp> t;
    t.E = E;
    t.Een = Een;
    t.n = 4;
    t.Y = empty_complex(Een, E);
    t.Y.lo = -3;
    t.Y.terms = R.terms;
    t.Y.d.push_back(bgen(B2, {i1, j1}));
    t.Y.d.push_back(Matrix<Fp>::hstack(bgen(B2, {j1, ji1}), bgen(B2, {ij1, i1})));
    t.Y.d.push_back(Matrix<Fp>::hstack(bgen(B1, {i1}), bgen(B1, {j1})));
    t.aug = detail::multiplication_map(t.Y, 0);
    t.k = induced(norm);
    t.theta = left_orbit_matrix(t.Y, -3, t.k);
    t.sigma = Matrix<Fp>::identity(f, 8);
    t.perm = {0};
    auto v = verify_truncated(t);
    INFO(v.first_failure());
    CHECK(v.ok());

    auto c = certify_twisted_periodicity(E, 4, 0, 4096, Een);
    REQUIRE(c.res);
    CHECK(c.res->n == 4);
}

TEST_CASE("inverse resolution and duals", "[periodicity]") {
    for (std::uint32_t p : {2u, 3u}) {
        Fp f(p);
        for (auto E : {share_algebra(truncated_polynomial(f, 1)), share_algebra(truncated_polynomial(f, 2)),
                       share_algebra(a2_trivial_extension(f))}) {
            auto c = certify_twisted_periodicity(E, 3);
            REQUIRE(c.res);
            const auto& t = *c.res;
            auto inv = inverse_resolution(t);
            CHECK(inv.Yp.lo == 0);
            CHECK(inv.Yp.hi() == static_cast<int>(t.n) - 1);
            REQUIRE(check_complex(inv.Yp).empty());
            CHECK(rank(inv.embed) == E->dim());
            if (t.n > 1) CHECK((inv.Yp.diff(0) * inv.embed).is_zero());
            CHECK(homotopy_equivalent(inv.Yp, dual(t.Y)).verdict == Verdict::Yes);
            if (t.n == 1 && t.sigma == Matrix<Fp>::identity(f, E->dim())) CHECK(describe(inv.Yp) == describe(t.Y));
        }
    }
}

TEST_CASE("corrupted differential is located", "[periodicity]") {
    Fp f(3);
    auto E = share_algebra(truncated_polynomial(f, 2));
    auto c = certify_twisted_periodicity(E, 3);
    REQUIRE(c.res);
    auto t = *c.res;
    t.Y.d[0](0, 0) = f.add(t.Y.d[0](0, 0), f.one());
    auto v = verify_truncated(t, 0, 400, false);
    CHECK(!v.ok());
    bool located = false;
    for (const auto& ch : v.checks)
        if (ch.name == "exactness" && !ch.ok && ch.detail.find("degree") != std::string::npos) located = true;
    CHECK(located);
}
