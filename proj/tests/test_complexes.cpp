#include <catch_amalgamated.hpp>

#include "gen.hpp"
#include "ptw/fixtures.hpp"
#include "ptw/homotopy.hpp"
#include "ptw/tensor.hpp"

using namespace ptw;

namespace {

template <class F>
AlgebraPtr<F> share(Algebra<F> a) {
    return std::make_shared<const Algebra<F>>(std::move(a));
}

// Centre of A by brute linear algebra: {z : b z = z b for every basis b}.
template <class F>
std::size_t centre_dim(const Algebra<F>& a) {
    Matrix<F> sys(a.field, 0, a.dim());
    for (std::size_t b = 0; b < a.dim(); ++b) sys.append_rows(a.lmul_matrix(a.basis_vec(b)) - a.rmul_matrix(a.basis_vec(b)));
    return a.dim() - rank(sys);
}

template <class F>
std::vector<typename F::value_type> random_combination(const Matrix<F>& basis, Rng& rng) {
    const F& f = basis.field();
    std::vector<typename F::value_type> v(basis.rows(), f.zero());
    for (std::size_t c = 0; c < basis.cols(); ++c) axpy(f, v, f.random(rng), basis.col(c));
    return v;
}

// A random chain map X -> Y (a random cycle in the degree-0 Hom complex).
template <class F>
ChainMap<F> random_chain_map(const Complex<F>& X, const Complex<F>& Y, Rng& rng) {
    auto s = chain_map_space(X, Y);
    return assemble(X, Y, s.h0, random_combination(s.cycles, rng));
}

// Random bounded complex of projectives, built from stalks by cones and sums.
template <class F>
Complex<F> random_complex(AlgebraPtr<F> a, Rng& rng, int depth) {
    auto stalk_of = [&](int deg) {
        std::vector<Block<F>> bl;
        std::size_t k = 1 + rng() % 2;
        for (std::size_t i = 0; i < k; ++i) bl.push_back(Block<F>::proj(rng() % a->nverts()));
        return stalk<F>(a, nullptr, bl, deg);
    };
    if (depth == 0) return stalk_of(static_cast<int>(rng() % 3) - 1);
    auto X = random_complex(a, rng, depth - 1);
    switch (rng() % 3) {
        case 0: {
            auto Y = shift(random_complex(a, rng, depth - 1), static_cast<int>(rng() % 3) - 1);
            return cone(X, Y, random_chain_map(X, Y, rng));
        }
        case 1: return direct_sum(X, stalk_of(X.lo + static_cast<int>(rng() % 2)));
        default: {
            auto Y = stalk_of(X.hi() + 1);
            auto Xs = shift(X, 0);
            return cone(shift(Y, 1), Xs, random_chain_map(shift(Y, 1), Xs, rng));
        }
    }
}

}  // namespace

TEST_CASE("stalk complexes and chain maps", "[complexes]") {
    Fp f(3);
    auto br = share(brauer_line_3(f));
    for (std::size_t u = 0; u < 3; ++u)
        for (std::size_t w = 0; w < 3; ++w) {
            auto X = stalk<Fp>(br, nullptr, {Block<Fp>::proj(u)}, 0);
            auto Y = stalk<Fp>(br, nullptr, {Block<Fp>::proj(w)}, 0);
            auto s = chain_map_space(X, Y);
            CHECK(s.classes.cols() == br->cartan(u, w));
        }
    // bimodule endomorphisms of A are the centre
    for (auto a : {share(truncated_polynomial(f, 1)), share(a2_trivial_extension(f)), br}) {
        auto en = share(enveloping(*a));
        auto A0 = stalk<Fp>(en, a, {Block<Fp>::diag()}, 0);
        CHECK(chain_map_space(A0, A0).classes.cols() == centre_dim(*a));
    }
}

TEST_CASE("cones of identities are contractible", "[complexes]") {
    Fp f(2);
    auto te = share(a2_trivial_extension(f));
    Rng rng(7);
    for (int it = 0; it < 20; ++it) {
        auto X = random_complex(te, rng, 2);
        REQUIRE(check_complex(X).empty());
        auto C = cone(X, X, identity_map(X));
        REQUIRE(check_complex(C).empty());
        CHECK(minimize(C).complex.is_zero());
        CHECK(homology_dims(C).empty());
    }
}

TEST_CASE("complex constructors (200 seeded cases)", "[complexes][property]") {
    for (std::uint32_t p : {2u, 3u}) {
        Fp f(p);
        std::vector<AlgebraPtr<Fp>> algs = {share(truncated_polynomial(f, 2)), share(a2_trivial_extension(f)),
                                            share(brauer_line_3(f))};
        Rng rng(900 + p);
        for (int it = 0; it < 100; ++it) {
            auto a = algs[rng() % algs.size()];
            auto X = random_complex(a, rng, 1 + static_cast<int>(rng() % 2));
            REQUIRE(check_complex(X).empty());
            REQUIRE(check_complex(shift(X, 3)).empty());
            auto Y = random_complex(a, rng, 1);
            auto m = random_chain_map(X, Y, rng);
            REQUIRE(check_chain_map(X, Y, m).empty());
            auto C = cone(X, Y, m);
            REQUIRE(check_complex(C).empty());
            REQUIRE(check_complex(direct_sum(X, Y)).empty());
            // minimisation keeps homology, leaves no cancellable pair, and is idempotent
            auto M = minimize(X);
            REQUIRE(check_complex(M.complex).empty());
            REQUIRE(homology_dims(M.complex) == homology_dims(X));
            auto M2 = minimize(M.complex);
            REQUIRE(M2.eliminations == 0);
            REQUIRE(describe(M2.complex) == describe(M.complex));
            REQUIRE(M.complex.total_dim() <= X.total_dim());
            // Euler characteristic of the cone
            long chi_c = 0, chi_x = 0, chi_y = 0;
            for (auto [d, h] : homology_dims(C)) chi_c += (d % 2 ? -1 : 1) * static_cast<long>(h);
            for (auto [d, h] : homology_dims(X)) chi_x += (d % 2 ? -1 : 1) * static_cast<long>(h);
            for (auto [d, h] : homology_dims(Y)) chi_y += (d % 2 ? -1 : 1) * static_cast<long>(h);
            REQUIRE(chi_c == chi_y - chi_x);
        }
    }
}

TEST_CASE("homotopy equivalence of minimised complexes", "[complexes]") {
    Fp f(3);
    auto br = share(brauer_line_3(f));
    Rng rng(31);
    for (int it = 0; it < 15; ++it) {
        auto X = random_complex(br, rng, 2);
        auto Y = direct_sum(X, cone(X, X, identity_map(X)));
        auto r = homotopy_equivalent(X, Y, it);
        CHECK(r.verdict == Verdict::Yes);
        auto Z = direct_sum(X, stalk<Fp>(br, nullptr, {Block<Fp>::proj(0)}, X.lo));
        CHECK(homotopy_equivalent(X, Z, it).verdict == Verdict::No);
    }
}

TEST_CASE("tensor with the diagonal and with projectives", "[complexes]") {
    Fp f(3);
    for (auto a : {share(truncated_polynomial(f, 1)), share(a2_trivial_extension(f)), share(brauer_line_3(f))}) {
        auto en = share(enveloping(*a));
        const std::size_t r = a->nverts();
        auto A0 = stalk<Fp>(en, a, {Block<Fp>::diag()}, 0);
        Rng rng(11);
        auto V = random_complex(a, rng, 2);
        auto T = tensor(A0, V);
        REQUIRE(check_complex(T).empty());
        CHECK(describe(T) == describe(V));
        CHECK(homology_dims(T) == homology_dims(V));
        // P(u,w) (x)_A P_v = (A e_u)^{dim e_w A e_v}
        for (std::size_t u = 0; u < r; ++u)
            for (std::size_t w = 0; w < r; ++w) {
                auto X = stalk<Fp>(en, a, {Block<Fp>::proj(u * r + w)}, 0);
                for (std::size_t v = 0; v < r; ++v) {
                    auto Pv = stalk<Fp>(a, nullptr, {Block<Fp>::proj(v)}, 0);
                    auto t = tensor(X, Pv);
                    CHECK(t.dim(0) == a->cartan(w, v) * a->proj_basis[u].size());
                }
                // and with the diagonal bimodule on either side
                CHECK(tensor(X, A0).dim(0) == X.dim(0));
                CHECK(tensor(A0, X).dim(0) == X.dim(0));
                CHECK(check_complex(tensor(X, A0)).empty());
            }
    }
}

TEST_CASE("bimodule complexes: multiplication cone, tensor and dual", "[complexes]") {
    for (std::uint32_t p : {2u, 3u}) {
        Fp f(p);
        for (auto a : {share(truncated_polynomial(f, 1)), share(a2_trivial_extension(f)), share(brauer_line_3(f))}) {
            auto en = share(enveloping(*a));
            const std::size_t r = a->nverts();
            // the multiplication map (+)_v P(v,v) -> A as a chain map of stalks
            std::vector<Block<Fp>> bl;
            for (std::size_t v = 0; v < r; ++v) bl.push_back(Block<Fp>::proj(v * r + v));
            auto P = stalk<Fp>(en, a, bl, 0);
            auto A0 = stalk<Fp>(en, a, {Block<Fp>::diag()}, 0);
            auto s = chain_map_space(P, A0);
            // pick the map sending each generator to its idempotent
            ChainMap<Fp> mu;
            mu.lo = 0;
            Matrix<Fp> m0(f, a->dim(), P.dim(0));
            auto off = P.offsets(0);
            for (std::size_t v = 0; v < r; ++v) {
                const auto& pb = en->proj_basis[v * r + v];
                for (std::size_t c = 0; c < pb.size(); ++c) {
                    std::size_t i = pb[c] / a->dim(), j = pb[c] % a->dim();
                    auto prod = a->mul(a->basis_vec(i), a->basis_vec(j));
                    for (std::size_t k = 0; k < a->dim(); ++k) m0(k, off[v] + c) = prod[k];
                }
            }
            mu.f.push_back(m0);
            REQUIRE(check_chain_map(P, A0, mu).empty());
            auto X = cone(P, A0, mu);  // the kernel of multiplication, shifted
            REQUIRE(check_complex(X).empty());
            CHECK(homology_dims(X).size() == 1);
            auto XX = tensor(X, X);
            REQUIRE(check_complex(XX).empty());
            auto D = dual(X);
            REQUIRE(check_complex(D).empty());
            CHECK(homology_dims(D).size() == 1);
            auto DD = dual(D);
            CHECK(describe(DD) == describe(X));
            CHECK(homotopy_equivalent(DD, X).verdict == Verdict::Yes);
            auto XD = tensor(X, D);
            REQUIRE(check_complex(XD).empty());
            // A[0] is the unit for the tensor product
            CHECK(homotopy_equivalent(tensor(A0, X), X).verdict == Verdict::Yes);
            CHECK(check_is_diagonal(A0).ok);
            CHECK(!check_is_diagonal(X).ok);
        }
    }
}
