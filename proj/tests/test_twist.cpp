#include <catch_amalgamated.hpp>

#include "ptw/fixtures.hpp"
#include "ptw/twist.hpp"

using namespace ptw;

namespace {

template <class F>
std::string failures(const VerifyReport& r) {
    std::string s;
    for (const auto& c : r.checks)
        if (!c.ok) s += c.name + ": " + c.detail + "\n";
    return s;
}

struct Case {
    std::string fixture;
    std::vector<std::size_t> J;
};

TwistData<Fp> setup(const std::string& name, std::vector<std::size_t> J) {
    auto fx = *parse_fixture_name(name);
    Fp f(fx.p);
    auto A = share_algebra(make_fixture(f, fx));
    return twist_setup(A, std::move(J));
}

}  // namespace

TEST_CASE("twist contracts on the fixtures", "[twist]") {
    std::vector<Case> cases = {
        {"kx2_p2", {0}},           {"kx2_p3", {0}},           {"kxn_p3_n2", {0}},
        {"a2_te_p2", {0}},         {"a2_te_p3", {1}},         {"a2_te_p3", {0, 1}},
        {"brauer_line_3_p2", {0}}, {"brauer_line_3_p3", {1}}, {"brauer_line_3_p2", {0, 1}},
        {"brauer_line_3_p3", {0, 1}}, {"brauer_line_3_p3", {0, 2}}, {"kxn_p5_n3", {0}},
        {"kq8_p2", {0}},
    };
    for (const auto& c : cases) {
        auto t = setup(c.fixture, c.J);
        auto rep = verify_twist(t);
        INFO(c.fixture << " J size " << c.J.size() << "\n" << failures<Fp>(rep.checks));
        CHECK(rep.ok());
    }
}

TEST_CASE("twist: projectives move to the sigma-image", "[twist]") {
    auto t = setup("brauer_line_3_p2", {0, 1});
    CHECK(t.n == 2);
    CHECK(t.sigma == std::vector<std::size_t>{1, 0, 2});
    CHECK(t.X.lo == -2);
    CHECK(t.X.hi() == 0);
    // P_2 (x) P_1^v + P_1 (x) P_2^v, P_1 (x) P_1^v + P_2 (x) P_2^v, A
    CHECK(t.X.dim(-2) == 3 * 4 + 4 * 3);
    CHECK(t.X.dim(-1) == 3 * 3 + 4 * 4);
    CHECK(t.X.dim(0) == 10);

    TwistOptions<Fp> opt;
    opt.doubled = false;
    opt.claimed_sigma = std::vector<std::size_t>{0, 1, 2};
    auto rep = verify_twist(t, opt);
    CHECK_FALSE(rep.ok());
    auto first = rep.checks.first_failure();
    CHECK(first.find("projective P_1") == 0);
    INFO(first);
    CHECK(first.find("expected [-2: P1]") != std::string::npos);
}

TEST_CASE("twist: g is evaluation and the simple off J is fixed", "[twist]") {
    auto t = setup("brauer_line_3_p3", {0, 1});
    CHECK(t.g_mismatch.empty());
    // image of g is the trace ideal A e_J A, everything but e_3
    CHECK(rank(t.g.f[0]) == 9);
    auto img = apply_twist(t.X, module_stalk(t.A, Block<Fp>::gen(std::make_shared<const Module<Fp>>(simple(t.A, 2))), 0));
    CHECK(homology_dims(img) == std::map<int, std::size_t>{{0, 1}});
}

TEST_CASE("twist: inverse", "[twist]") {
    for (const auto& c : std::vector<Case>{{"kx2_p3", {0}}, {"kxn_p2_n3", {0}}, {"a2_te_p3", {0}}, {"brauer_line_3_p2", {0}},
                                           {"brauer_line_3_p3", {0, 1}}, {"brauer_line_3_p2", {1, 2}},
                                           {"kq8_p2", {0}}}) {
        auto t = setup(c.fixture, c.J);
        auto inv = twist_inverse(t);
        INFO(c.fixture << "\n" << failures<Fp>(inv.report));
        CHECK(inv.report.ok());
        CHECK(inv.Xp.lo == 0);
        CHECK(inv.Xp.hi() == static_cast<int>(t.n));
    }
}

TEST_CASE("twist: splicing matches composition", "[twist]") {
    for (std::uint32_t p : {2u, 3u}) {
        Fp f(p);
        auto A = share_algebra(brauer_line_3(f));
        auto sph = twist_setup(A, {0});
        REQUIRE(sph.n == 1);
        auto c = compose_twists(sph, sph);
        CHECK(c.eq.verdict == Verdict::Yes);
        CHECK(c.spliced.n == 2);
        // the period-2 resolution computed directly gives the same complex
        auto br = bimodule_resolution(sph.res.E, 3, sph.res.Een);
        auto kt = identify_kernel(br.Y, br.Y.lo, br.kernels[1], 0, 4096);
        REQUIRE(kt.verdict == Verdict::Yes);
        auto p1 = build_twist(A, sph.Aen, sph.corner, truncate_at(br, 2, kt));
        CHECK(homotopy_equivalent(p1.X, c.product).verdict == Verdict::Yes);

        auto t12 = twist_setup(A, {0, 1}, 8, 0, 4096, sph.Aen);
        auto c2 = compose_twists(t12, t12);
        CHECK(c2.spliced.n == 4);
        CHECK(c2.eq.verdict == Verdict::Yes);
    }
}

TEST_CASE("twist: braid relation and the half twist", "[twist]") {
    for (std::uint32_t p : {2u, 3u}) {
        Fp f(p);
        auto A = share_algebra(brauer_line_3(f));
        auto Aen = share_algebra(enveloping(*A));
        auto t1 = twist_setup(A, {0}, 8, 0, 4096, Aen);
        auto t2 = twist_setup(A, {1}, 8, 0, 4096, Aen);
        auto t12 = twist_setup(A, {0, 1}, 8, 0, 4096, Aen);
        auto w121 = tensor_word<Fp>({&t1.X, &t2.X, &t1.X});
        auto w212 = tensor_word<Fp>({&t2.X, &t1.X, &t2.X});
        CHECK(homotopy_equivalent(w121, w212).verdict == Verdict::Yes);
        CHECK(homotopy_equivalent(w121, t12.X).verdict == Verdict::Yes);
        // and not the plain product of two
        auto w12 = tensor_word<Fp>({&t1.X, &t2.X});
        CHECK(homotopy_equivalent(w12, t12.X).verdict == Verdict::No);
    }
}

TEST_CASE("twist: blocks of a decomposable algebra", "[twist]") {
    Fp f(3);
    auto A = share_algebra(product_algebra(brauer_line_3(f), truncated_polynomial(f, 1)));
    auto t = twist_setup(A, {0});
    TwistOptions<Fp> opt;
    opt.doubled = false;
    auto rep = verify_twist(t, opt);
    INFO(failures<Fp>(rep.checks));
    CHECK(rep.ok());
    bool saw = false;
    for (const auto& c : rep.checks.checks)
        if (c.name == "blocks") saw = c.detail == "X splits along the blocks of A";
    CHECK(saw);
}

TEST_CASE("twist: quaternion group algebra on its regular projective", "[twist]") {
    Fp f(2);
    auto A = share_algebra(quaternion_group_algebra(f));
    auto t = twist_setup(A, {0});
    CHECK(t.n == 4);
    auto img = apply_twist(t.X, module_stalk(A, Block<Fp>::proj(0), 0));
    CHECK(homotopy_equivalent(img, module_stalk(A, Block<Fp>::proj(0), -4)).verdict == Verdict::Yes);
}
