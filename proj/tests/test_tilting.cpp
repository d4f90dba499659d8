#include <catch_amalgamated.hpp>

#include "ptw/fixtures.hpp"
#include "ptw/tilting.hpp"

using namespace ptw;

namespace {

std::string failures(const VerifyReport& r) {
    std::string s;
    for (const auto& c : r.checks)
        if (!c.ok) s += c.name + ": " + c.detail + "\n";
    return s;
}

AlgebraPtr<Fp> fixture(const std::string& name) {
    auto fx = *parse_fixture_name(name);
    return share_algebra(make_fixture(Fp(fx.p), fx));
}

}  // namespace

TEST_CASE("tilt: approximation of the vertex outside J", "[tilting]") {
    auto A = fixture("brauer_line_3_p2");
    auto ap = minimal_approximation(A, {0, 1}, 2);
    // e_J A e_3 is spanned by the arrow 2 -> 3 and its cover is P_2
    CHECK(ap.vertices == std::vector<std::size_t>{1});
    CHECK(ap.minimal);
    CHECK(ap.cokernel_ok);
    CHECK_THROWS_AS(minimal_approximation(A, {0, 1}, 1), TiltError);

    auto T = combinatorial_tilting_complex(A, {1, 0});
    REQUIRE(T.size() == 3);
    CHECK(describe(T[0]) == "[-1: P1]");
    CHECK(describe(T[1]) == "[-1: P2]");
    CHECK(describe(T[2]) == "[-1: P2] -> [0: P3]");
    CHECK(check_complex(T[2]).empty());
}

TEST_CASE("tilt: bad vertex sets", "[tilting]") {
    auto A = fixture("kx2_p2");
    CHECK_THROWS_WITH(combinatorial_tilting_complex(A, {0}), Catch::Matchers::StartsWith("BadSubset"));
    auto B = fixture("brauer_line_3_p3");
    CHECK_THROWS_WITH(combinatorial_tilting_complex(B, {}), Catch::Matchers::StartsWith("BadSubset"));
    CHECK_THROWS_WITH(combinatorial_tilting_complex(B, {0, 1, 2}), Catch::Matchers::StartsWith("BadSubset"));
    CHECK_THROWS_WITH(combinatorial_tilting_complex(B, {5}), Catch::Matchers::StartsWith("BadSubset"));
}

TEST_CASE("tilt: self-orthogonal and the endomorphism algebra", "[tilting]") {
    for (const auto& name : {"brauer_line_3_p2", "brauer_line_3_p3", "a2_te_p2", "a2_te_p3"}) {
        auto A = fixture(name);
        for (std::size_t j = 0; j < A->nverts(); ++j) {
            auto st = tilt(A, {j});
            INFO(name << " J = {" << j + 1 << "}");
            CHECK(st.hom_plus == 0);
            CHECK(st.hom_minus == 0);
            CHECK(st.B->nverts() == A->nverts());
            // derived equivalence preserves symmetry
            CHECK(st.symmetric);
            // dim B = sum over a, b of dim Hom_K(T_a, T_b) = sum of Euler forms
            std::size_t expect = 0;
            for (std::size_t a = 0; a < A->nverts(); ++a)
                for (std::size_t b = 0; b < A->nverts(); ++b) {
                    auto sp = chain_map_space(st.T[a], st.T[b]);
                    expect += sp.classes.cols();
                }
            CHECK(st.B->dim() == expect);
            CHECK(check_morphism(*st.B, *st.B, Matrix<Fp>::identity(st.B->field, st.B->dim())).ok);
        }
    }
}

TEST_CASE("tilt: Cartan matrix of the tilt from Euler characteristics", "[tilting]") {
    // independent count: dim Hom_K(T_a, T_b) = sum_k (-1)^k dim Hom(T_a, T_b[k])
    // and only k = 0 survives, so it equals the alternating sum of Cartan entries
    auto A = fixture("brauer_line_3_p3");
    auto st = tilt(A, {0, 1});
    const auto& ap = st.approx[2];
    auto terms = [&](std::size_t a) {
        std::vector<std::pair<int, std::size_t>> t;  // (degree, vertex)
        if (a < 2) return std::vector<std::pair<int, std::size_t>>{{-1, a}};
        for (auto u : ap.vertices) t.push_back({-1, u});
        t.push_back({0, a});
        return t;
    };
    for (std::size_t a = 0; a < 3; ++a)
        for (std::size_t b = 0; b < 3; ++b) {
            long long chi = 0;
            for (auto [da, u] : terms(a))
                for (auto [db, w] : terms(b)) chi += ((da + db) % 2 == 0 ? 1 : -1) * static_cast<long long>(A->cartan(u, w));
            INFO(a << "," << b);
            CHECK(static_cast<long long>(st.B->cartan(a, b)) == chi);
        }
}

TEST_CASE("tilt: algebra isomorphism search", "[tilting]") {
    auto A = fixture("brauer_line_3_p2");
    auto self = algebra_iso_search(*A, *A);
    CHECK(self.verdict == IsoVerdict::Isomorphic);
    REQUIRE(self.witness);
    CHECK(check_morphism(*A, *A, *self.witness).ok);

    auto C = fixture("a2_te_p2");
    CHECK(algebra_iso_search(*A, *C).verdict == IsoVerdict::Distinguished);
    // same dimension, different quivers
    Fp f(2);
    auto k10 = truncated_polynomial(f, 9);
    auto r = algebra_iso_search(*A, k10);
    CHECK(r.verdict == IsoVerdict::Distinguished);
}

TEST_CASE("circle: two steps at J = {1,2} return to A", "[tilting]") {
    for (const auto& name : {"brauer_line_3_p2", "brauer_line_3_p3"}) {
        auto A = fixture(name);
        auto t = twist_setup(A, {0, 1});
        auto run = iterate_tilts(A, {0, 1}, 2);
        REQUIRE(run.iso);
        INFO(name << " " << run.iso->detail);
        CHECK(run.iso->verdict == IsoVerdict::Isomorphic);
        CHECK(run.steps[1].B->dim() == A->dim());
        auto rep = circle_vs_twist(t, run);
        INFO(failures(rep.checks));
        CHECK(rep.checks.ok());
    }
}

TEST_CASE("circle: one step at a single vertex", "[tilting]") {
    auto A = fixture("brauer_line_3_p2");
    auto t = twist_setup(A, {0});
    auto run = iterate_tilts(A, {0}, 1);
    CHECK(run.iso->verdict == IsoVerdict::Isomorphic);
    auto rep = circle_vs_twist(t, run);
    INFO(failures(rep.checks));
    CHECK(rep.checks.ok());
}

TEST_CASE("circle: a wrong period fails the approximation check", "[tilting]") {
    auto A = fixture("brauer_line_3_p2");
    auto t = twist_setup(A, {0, 1});
    auto run = iterate_tilts(A, {0, 1}, 3);
    CHECK(run.iso->verdict == IsoVerdict::Distinguished);
    auto rep = circle_vs_twist(t, run);
    CHECK_FALSE(rep.checks.ok());
    bool approx_failed = false;
    for (const auto& c : rep.checks.checks)
        if (c.name == "approximation P_3") approx_failed = !c.ok && c.detail.find("expected only degree -3") != std::string::npos;
    CHECK(approx_failed);
}

TEST_CASE("circle: realise inverts the tilt on projectives", "[tilting]") {
    auto A = fixture("brauer_line_3_p3");
    auto st = tilt(A, {1});
    for (std::size_t v = 0; v < 3; ++v) {
        Complex<Fp> Z = stalk<Fp>(st.B, nullptr, {Block<Fp>::proj(v)}, 0);
        auto back = realise(st, Z);
        CHECK(homotopy_equivalent(back, st.T[v]).verdict == Verdict::Yes);
    }
}
