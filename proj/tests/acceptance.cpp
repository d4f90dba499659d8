// Acceptance run: one line per criterion, exit status 0 iff all pass.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include <sys/wait.h>

#include "ptw/fixtures.hpp"
#include "ptw/tilting.hpp"

using namespace ptw;

namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

struct Result {
    bool ok = true;
    std::string detail;
    void fail(const std::string& why) {
        if (ok) detail = why;
        ok = false;
    }
};

std::string fmt(double s) {
    char b[32];
    std::snprintf(b, sizeof b, "%.2f", s);
    return b;
}

AlgebraPtr<Fp> fixture(const std::string& name) {
    auto fx = *parse_fixture_name(name);
    return share_algebra(make_fixture(Fp(fx.p), fx));
}

std::string first_failure(const VerifyReport& r) {
    for (const auto& c : r.checks)
        if (!c.ok) return c.name + ": " + c.detail;
    return {};
}

using Vec = std::vector<Fp::value_type>;

// (a (x) b) as an element of E (x) E^op, coordinates i * d + j
Vec tensor_vec(const Fp& f, const Vec& a, const Vec& b) {
    Vec out(a.size() * b.size(), f.zero());
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) out[i * b.size() + j] = f.mul(a[i], b[j]);
    return out;
}

// ---------------------------------------------------------------------------

Result criterion1(double& worst) {
    Result r;
    for (std::uint32_t p : {2u, 3u, 5u})
        for (std::size_t n : {1u, 2u, 3u}) {
            auto t0 = Clock::now();
            Fp f(p);
            auto E = share_algebra(truncated_polynomial(f, n));
            const std::size_t d = E->dim();
            const std::string tag = "p=" + std::to_string(p) + " n=" + std::to_string(n) + ": ";
            Vec one = E->unit(), x = E->basis_vec(E->arrows.at(0));
            std::vector<Vec> pw{one};
            for (std::size_t k = 1; k <= n; ++k) pw.push_back(E->mul(pw.back(), x));

            // the map z -> z g on E (x) E^op for g = 1 (x) x - x (x) 1, built from E's product alone
            Matrix<Fp> dodd(f, d * d, d * d);
            for (std::size_t i = 0; i < d; ++i)
                for (std::size_t j = 0; j < d; ++j) {
                    auto bi = E->basis_vec(i), bj = E->basis_vec(j);
                    auto img = tensor_vec(f, bi, E->mul(x, bj));
                    auto sub = tensor_vec(f, E->mul(bi, x), bj);
                    for (std::size_t k = 0; k < d * d; ++k) dodd(k, i * d + j) = f.sub(img[k], sub[k]);
                }
            // kernel generator sum_j x^j (x) x^{n-j}
            Vec keven(d * d, f.zero());
            for (std::size_t j = 0; j <= n; ++j) {
                auto t = tensor_vec(f, pw[j], pw[n - j]);
                for (std::size_t k = 0; k < d * d; ++k) keven[k] = f.add(keven[k], t[k]);
            }
            if (!is_zero_vec(f, dodd.apply(keven))) r.fail(tag + "sum x^j (x) x^(n-j) is not a cycle");
            // it generates ker d_odd: the orbit (b (x) 1) k has the full kernel dimension
            Matrix<Fp> orbit(f, d * d, 0);
            for (std::size_t i = 0; i < d; ++i) {
                Vec img(d * d, f.zero());
                for (std::size_t a = 0; a < d; ++a)
                    for (std::size_t b = 0; b < d; ++b) {
                        if (f.is_zero(keven[a * d + b])) continue;
                        auto t = tensor_vec(f, E->mul(E->basis_vec(i), E->basis_vec(a)), E->basis_vec(b));
                        for (std::size_t k = 0; k < d * d; ++k) img[k] = f.add(img[k], f.mul(keven[a * d + b], t[k]));
                    }
                orbit = Matrix<Fp>::hstack(orbit, Matrix<Fp>::column(f, img));
            }
            if (rank(orbit) != d || d * d - rank(dodd) != d) r.fail(tag + "sum x^j (x) x^(n-j) does not generate ker d_odd");

            // the library's period-2 resolution
            auto Een = share_algebra(enveloping(*E));
            auto br = bimodule_resolution(E, 3, Een);
            auto kt = identify_kernel(br.Y, -1, br.kernels.at(1), 0, 4096);
            if (kt.verdict != Verdict::Yes) {
                r.fail(tag + "period 2 not certified: " + kt.obstruction);
                continue;
            }
            auto t2 = truncate_at(br, 2, kt);
            auto rep = verify_truncated(t2);
            if (!rep.ok()) r.fail(tag + first_failure(rep));
            if (kt.sigma != Matrix<Fp>::identity(f, d)) r.fail(tag + "sigma at period 2 is not the identity");
            Complex<Fp> oracle = empty_complex<Fp>(Een, E);
            oracle.lo = -1;
            oracle.terms = {{Block<Fp>::proj(0)}, {Block<Fp>::proj(0)}};
            oracle.d = {dodd};
            auto he = homotopy_equivalent(t2.Y, oracle);
            if (he.verdict != Verdict::Yes) r.fail(tag + "resolution differs from 1 (x) x - x (x) 1: " + he.reason);

            auto cr = certify_twisted_periodicity(E, 2, 0, 4096, Een);
            const std::size_t want = n == 1 ? 1 : 2;
            if (!cr.res || cr.res->n != want) {
                r.fail(tag + "smallest certified period is not " + std::to_string(want));
            } else if (n == 1) {
                // sigma(1) = 1, sigma(x) = -x
                const auto& s = cr.res->sigma;
                Vec negx = x;
                for (auto& c : negx) c = f.neg(c);
                if (s.apply(one) != one || s.apply(x) != negx) r.fail(tag + "period-1 twist is not x -> -x");
                if (!verify_truncated(*cr.res).ok()) r.fail(tag + first_failure(verify_truncated(*cr.res)));
            }
            double s = since(t0);
            worst = std::max(worst, s);
            if (s >= 5.0) r.fail(tag + "took " + fmt(s) + " s");
        }
    return r;
}

Result criterion2(double& secs) {
    Result r;
    auto t0 = Clock::now();
    auto A = fixture("kq8_p2");
    auto screen = simple_screen(A, 6);
    if (screen.size() != 1 || !screen[0].period || *screen[0].period != 4) {
        r.fail("simple screen does not report period 4");
    } else {
        if (screen[0].cover_dims != std::vector<std::size_t>{8, 16, 16, 8}) r.fail("cover dimensions are not (8,16,16,8)");
        auto S = simple(A, 0);
        auto om = syzygy(S, 4);
        if (!screen[0].witness) {
            r.fail("no witness for Omega^4(k) = k");
        } else {
            const auto& W = *screen[0].witness;
            if (!is_module_map(om, S, W) || rank(W) != S.dim || om.dim != S.dim) r.fail("witness is not a module isomorphism");
        }
    }
    auto cr = certify_twisted_periodicity(A, 4);
    if (!cr.res || cr.res->n != 4) r.fail("bimodule certification does not give period 4");
    else if (!verify_truncated(*cr.res).ok()) r.fail(first_failure(verify_truncated(*cr.res)));
    secs = since(t0);
    if (secs >= 60) r.fail("took " + fmt(secs) + " s");
    return r;
}

struct FixtureJ {
    std::string name;
    std::vector<std::size_t> J;
};

std::vector<FixtureJ> twist_fixtures() {
    std::vector<FixtureJ> out;
    for (const char* n : {"kx2_p2", "kx2_p3", "kxn_p2_n2", "kxn_p3_n2", "kxn_p5_n2", "kxn_p2_n3", "kxn_p3_n3", "kxn_p5_n3", "kq8_p2"})
        out.push_back({n, {0}});
    for (const char* n : {"a2_te_p2", "a2_te_p3"})
        for (std::vector<std::size_t> J : {std::vector<std::size_t>{0}, {1}, {0, 1}}) out.push_back({n, J});
    for (const char* n : {"brauer_line_3_p2", "brauer_line_3_p3"})
        for (std::vector<std::size_t> J : {std::vector<std::size_t>{0}, {1}, {2}, {0, 1}, {1, 2}, {0, 2}}) out.push_back({n, J});
    return out;
}

std::string label(const FixtureJ& c) {
    std::string s = c.name + " J={";
    for (std::size_t k = 0; k < c.J.size(); ++k) s += (k ? "," : "") + std::to_string(c.J[k] + 1);
    return s + "}";
}

Result criterion3(double& worst, std::size_t& count) {
    Result r;
    for (const auto& c : twist_fixtures()) {
        auto t0 = Clock::now();
        auto t = twist_setup(fixture(c.name), c.J);
        auto rep = verify_twist(t);
        double s = since(t0);
        worst = std::max(worst, s);
        ++count;
        // the contracts: projectives in J, simples off J, both composites with the dual
        for (const auto& chk : rep.checks.checks) {
            bool contract = chk.name.rfind("projective ", 0) == 0 || chk.name.rfind("simple ", 0) == 0 ||
                            chk.name.rfind("X (x) X*", 0) == 0 || chk.name.rfind("X* (x) X", 0) == 0;
            if (contract && !chk.ok) r.fail(label(c) + ": " + chk.name + ": " + chk.detail);
        }
        if (!rep.ok()) r.fail(label(c) + ": " + first_failure(rep.checks));
        if (s >= 60) r.fail(label(c) + " took " + fmt(s) + " s");
    }
    return r;
}

Result criterion4(double& secs) {
    Result r;
    auto t0 = Clock::now();
    for (std::uint32_t p : {2u, 3u}) {
        Fp f(p);
        auto A = share_algebra(brauer_line_3(f));
        auto Aen = share_algebra(enveloping(*A));
        auto t1 = twist_setup(A, {0}, 8, 0, 4096, Aen);
        auto t2 = twist_setup(A, {1}, 8, 0, 4096, Aen);
        auto t12 = twist_setup(A, {0, 1}, 8, 0, 4096, Aen);
        auto w121 = tensor_word<Fp>({&t1.X, &t2.X, &t1.X});
        auto w212 = tensor_word<Fp>({&t2.X, &t1.X, &t2.X});
        auto a = homotopy_equivalent(w121, w212);
        auto b = homotopy_equivalent(w212, t12.X);
        const std::string tag = "F" + std::to_string(p) + ": ";
        if (a.verdict != Verdict::Yes || !a.witness) r.fail(tag + "121 vs 212: " + a.reason);
        if (b.verdict != Verdict::Yes || !b.witness) r.fail(tag + "212 vs twist at {1,2}: " + b.reason);
    }
    secs = since(t0);
    if (secs >= 120) r.fail("took " + fmt(secs) + " s");
    return r;
}

Result criterion5() {
    Result r;
    for (std::uint32_t p : {2u, 3u}) {
        Fp f(p);
        const std::string tag = "F" + std::to_string(p) + ": ";
        // (i) k[x]/(x^2): the spherical twist squared against the twist of the period-2 resolution
        auto E = share_algebra(truncated_polynomial(f, 1));
        auto sph = twist_setup(E, {0});
        if (sph.n != 1) r.fail(tag + "k[x]/(x^2) is not certified at period 1");
        auto c = compose_twists(sph, sph);
        if (c.eq.verdict != Verdict::Yes || !c.eq.witness) r.fail(tag + "splice vs X (x) X on k[x]/(x^2): " + c.eq.reason);
        auto br = bimodule_resolution(sph.res.E, 3, sph.res.Een);
        auto kt = identify_kernel(br.Y, -1, br.kernels.at(1), 0, 4096);
        if (kt.verdict != Verdict::Yes) {
            r.fail(tag + "no period-2 resolution of k[x]/(x^2)");
        } else {
            auto p1 = build_twist(E, sph.Aen, sph.corner, truncate_at(br, 2, kt));
            auto eq = homotopy_equivalent(p1.X, c.product);
            if (eq.verdict != Verdict::Yes) r.fail(tag + "period-2 twist vs spherical twist squared: " + eq.reason);
        }
        // (ii) Brauer line, J = {1,2}, period 2, spliced with itself
        auto A = fixture("brauer_line_3_p" + std::to_string(p));
        auto t12 = twist_setup(A, {0, 1});
        auto c2 = compose_twists(t12, t12);
        if (c2.spliced.n != 4) r.fail(tag + "spliced period is not 4");
        if (c2.eq.verdict != Verdict::Yes || !c2.eq.witness) r.fail(tag + "splice vs X (x) X on the Brauer line: " + c2.eq.reason);
    }
    return r;
}

Result criterion6(std::size_t& count) {
    Result r;
    for (const auto& c : twist_fixtures()) {
        auto t = twist_setup(fixture(c.name), c.J);
        auto inv = twist_inverse(t);
        ++count;
        if (!inv.report.ok()) r.fail(label(c) + ": " + first_failure(inv.report));
    }
    return r;
}

Result criterion7(double& secs) {
    Result r;
    auto t0 = Clock::now();
    auto A = fixture("brauer_line_3_p2");
    auto t = twist_setup(A, {0, 1});
    auto run = iterate_tilts(A, {0, 1}, 2);
    if (!run.iso || run.iso->verdict != IsoVerdict::Isomorphic || !run.iso->witness) {
        r.fail("A^(2) is not shown isomorphic to A");
    } else if (!check_morphism(*run.steps.back().B, *A, *run.iso->witness).ok) {
        r.fail("isomorphism witness is not an algebra map");
    }
    auto rep = circle_vs_twist(t, run);
    for (const char* name : {"circle P_1", "circle P_2", "circle P_3", "approximation P_3"}) {
        bool seen = false;
        for (const auto& c : rep.checks.checks)
            if (c.name == name) {
                seen = true;
                if (!c.ok) r.fail(c.name + ": " + c.detail);
            }
        if (!seen) r.fail(std::string("missing check ") + name);
    }
    auto t1 = twist_setup(A, {0});
    auto run1 = iterate_tilts(A, {0}, 1);
    if (!run1.iso || run1.iso->verdict != IsoVerdict::Isomorphic) r.fail("J={1}: A^(1) is not shown isomorphic to A");
    auto rep1 = circle_vs_twist(t1, run1);
    if (!rep1.checks.ok()) r.fail("J={1}: " + first_failure(rep1.checks));
    secs = since(t0);
    if (secs >= 120) r.fail("took " + fmt(secs) + " s");
    return r;
}

int run(const std::string& cmd, std::string& err) {
    const std::string errfile = std::string(PTW_WORK_DIR) + "/acceptance_stderr.txt";
    int rc = std::system((cmd + " > /dev/null 2> " + errfile).c_str());
    std::ifstream in(errfile);
    std::stringstream ss;
    ss << in.rdbuf();
    err = ss.str();
    if (rc == -1) return -1;
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

Result criterion8() {
    Result r;
    std::string err;
    int rc = run(std::string(PTW_UNIT_TESTS) + " \"[property]\"", err);
    if (rc != 0) r.fail("property suites failed (exit " + std::to_string(rc) + ")");
    return r;
}

Result criterion9() {
    Result r;
    const std::string cli = PTW_CLI;
    struct Control {
        std::string args, expect;
    };
    const std::vector<Control> controls{
        {"periodicity --fixture brauer_line_3_p2 --inject corrupt-differential", "FAIL exactness: not exact at degree -1"},
        {"twist --fixture brauer_line_3_p2 --J 1,2 --inject wrong-sigma", "FAIL projective P_1: X (x) P_1 has minimal complex [-2: P2], expected [-2: P1]"},
        {"circle --fixture brauer_line_3_p2 --J 1,2 --inject wrong-period", "FAIL approximation P_3: X (x) P_3: Hom(P, C) has homology 1 in degree -2, expected only degree -3"},
    };
    for (const auto& c : controls) {
        std::string err;
        int rc = run(cli + " " + c.args, err);
        if (rc != 1) r.fail("'" + c.args + "' exited with " + std::to_string(rc));
        else if (err.find(c.expect) == std::string::npos) r.fail("'" + c.args + "' did not report '" + c.expect + "'");
    }
    return r;
}

}  // namespace

int main() {
    int failed = 0;
    auto line = [&](int k, const std::string& what, const Result& r, const std::string& extra) {
        std::cout << (r.ok ? "[PASS] " : "[FAIL] ") << k << " " << what << ": " << (r.ok ? extra : r.detail) << std::endl;
        if (!r.ok) ++failed;
    };
    auto guard = [&](int k, const std::string& what, const std::function<std::pair<Result, std::string>()>& body) {
        try {
            auto [r, extra] = body();
            line(k, what, r, extra);
        } catch (const std::exception& e) {
            Result r;
            r.fail(std::string("exception: ") + e.what());
            line(k, what, r, "");
        }
    };
    guard(1, "truncated polynomial periodicity", [] {
        double worst = 0;
        auto r = criterion1(worst);
        return std::pair{r, "9 cases, slowest " + fmt(worst) + " s (limit 5 s)"};
    });
    guard(2, "kQ8 over F2", [] {
        double s = 0;
        auto r = criterion2(s);
        return std::pair{r, "screen period 4, covers (8,16,16,8), certified period 4, " + fmt(s) + " s (limit 60 s)"};
    });
    guard(3, "twist contracts", [] {
        double worst = 0;
        std::size_t n = 0;
        auto r = criterion3(worst, n);
        return std::pair{r, std::to_string(n) + " fixture/J pairs, slowest " + fmt(worst) + " s (limit 60 s)"};
    });
    guard(4, "braid relation and half twist", [] {
        double s = 0;
        auto r = criterion4(s);
        return std::pair{r, "F2 and F3, " + fmt(s) + " s (limit 120 s)"};
    });
    guard(5, "splice against composition", [] { return std::pair{criterion5(), "k[x]/(x^2) and Brauer line J={1,2}, F2 and F3"}; });
    guard(6, "inverse twist", [] {
        std::size_t n = 0;
        auto r = criterion6(n);
        return std::pair{r, std::to_string(n) + " fixture/J pairs"};
    });
    guard(7, "circle of tilts", [] {
        double s = 0;
        auto r = criterion7(s);
        return std::pair{r, "J={1,2} two steps and J={1} one step, " + fmt(s) + " s (limit 120 s)"};
    });
    guard(8, "property suites", [] { return std::pair{criterion8(), "200 seeded cases per suite"}; });
    guard(9, "negative controls", [] { return std::pair{criterion9(), "3 controls exit 1 with located diagnostics"}; });
    std::cout << (failed ? std::to_string(failed) + " criteria failed" : std::string("all criteria passed")) << std::endl;
    return failed ? 1 : 0;
}
