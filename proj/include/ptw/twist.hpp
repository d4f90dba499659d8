#pragma once

// The two-sided complex X = cone(P (x)_E Y (x)_E P^v -> A) attached to a
// projective P = A e_J and a truncated periodic resolution Y of E = e_J A e_J,
// its verification, composition and inverse.
//
// P (x)_E (E e_u (x) e_w E) (x)_E P^v = A e_u' (x) e_w' A, so the induced
// complex has the same shape as Y with E-vertices replaced by host vertices.
// Maps between cyclic blocks carry over through their generator images.

#include <chrono>
#include <map>
#include <set>

#include "ptw/periodicity.hpp"
#include "ptw/tensor.hpp"

namespace ptw {

struct TwistError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

template <class F>
struct TwistData {
    AlgebraPtr<F> A, Aen;
    std::vector<std::size_t> J;     // host vertices, sorted
    Realised<F> corner;             // E with its realisation inside A
    TruncatedResolution<F> res;
    std::size_t n = 0;
    Complex<F> PYP;                 // degrees -(n-1) .. 0
    Complex<F> A0;                  // A in degree 0
    ChainMap<F> g;
    Complex<F> X;                   // degrees -n .. 0
    std::vector<std::size_t> sigma;  // host vertex permutation, identity off J
    std::string g_mismatch;         // empty iff both composites for g agree
};

namespace detail {

template <class F>
std::size_t host_pair(const Realised<F>& c, std::size_t dE, std::size_t dA, std::size_t g) {
    return c.basis_to_host[g / dE] * dA + c.basis_to_host[g % dE];
}

/// Coordinates of an Y-term vector in the induced term.
template <class F>
Vec<F> induce_vector(const Complex<F>& Y, int deg, const Vec<F>& y, const Complex<F>& Z, const Realised<F>& c) {
    const F& f = Y.field();
    const auto& Een = *Y.ring;
    const auto& Aen = *Z.ring;
    const std::size_t dE = Y.base->dim(), dA = Z.base->dim();
    auto oy = Y.offsets(deg), oz = Z.offsets(deg);
    Vec<F> out(oz.back(), f.zero());
    const auto& yb = Y.blocks(deg);
    const auto& zb = Z.blocks(deg);
    for (std::size_t k = 0; k < yb.size(); ++k) {
        const auto& pe = Een.proj_basis[yb[k].v];
        const auto& pa = Aen.proj_basis[zb[k].v];
        for (std::size_t i = 0; i < pe.size(); ++i) {
            const auto& v = y[oy[k] + i];
            if (f.is_zero(v)) continue;
            std::size_t h = host_pair(c, dE, dA, pe[i]);
            std::size_t pos = Aen.proj_pos[h];
            if (pos >= pa.size() || pa[pos] != h) throw TwistError("induced basis element lies outside its block");
            out[oz[k] + pos] = f.add(out[oz[k] + pos], v);
        }
    }
    return out;
}

/// P (x)_E Y (x)_E P^v as a complex over A^en.
template <class F>
Complex<F> induce(const Complex<F>& Y, const Realised<F>& c, AlgebraPtr<F> A, AlgebraPtr<F> Aen) {
    const std::size_t rE = Y.base->nverts(), rA = A->nverts();
    Complex<F> Z = empty_complex(Aen, A);
    Z.lo = Y.lo;
    for (int i = Y.lo; i <= Y.hi(); ++i) {
        std::vector<Block<F>> t;
        for (const auto& b : Y.blocks(i)) {
            if (b.kind != BlockKind::Proj) throw TwistError("induce: resolution terms must be projective");
            t.push_back(Block<F>::proj(c.vertex_to_host[b.v / rE] * rA + c.vertex_to_host[b.v % rE]));
        }
        Z.terms.push_back(std::move(t));
    }
    for (int i = Y.lo; i < Y.hi(); ++i) {
        Matrix<F> d(A->field, Z.dim(i + 1), Z.dim(i));
        auto oy = Y.offsets(i), oz = Z.offsets(i);
        const auto& yb = Y.blocks(i);
        for (std::size_t k = 0; k < yb.size(); ++k) {
            Vec<F> gen(Y.dim(i), A->field.zero());
            auto bg = block_generator(Y, yb[k]);
            std::copy(bg.begin(), bg.end(), gen.begin() + static_cast<long>(oy[k]));
            auto img = induce_vector(Y, i + 1, Y.diff(i).apply(gen), Z, c);
            d.set_block(0, oz[k], expand_from_generator(Z, Z.blocks(i)[k], Z, i + 1, img));
        }
        Z.d.push_back(std::move(d));
    }
    return Z;
}

/// Host element of an element of E.
template <class F>
Vec<F> to_host(const F& f, const Realised<F>& c, std::size_t dA, const Vec<F>& e) {
    Vec<F> h(dA, f.zero());
    for (std::size_t i = 0; i < e.size(); ++i) h[c.basis_to_host[i]] = f.add(h[c.basis_to_host[i]], e[i]);
    return h;
}

/// Per block of Y^0: the host image of aug(generator) in A.
template <class F>
std::vector<Vec<F>> evaluation_values(const TruncatedResolution<F>& r, const Realised<F>& c, std::size_t dA) {
    const F& f = r.E->field;
    std::vector<Vec<F>> out;
    auto oy = r.Y.offsets(0);
    const auto& yb = r.Y.blocks(0);
    for (std::size_t k = 0; k < yb.size(); ++k) {
        Vec<F> gen(r.Y.dim(0), f.zero());
        auto bg = block_generator(r.Y, yb[k]);
        std::copy(bg.begin(), bg.end(), gen.begin() + static_cast<long>(oy[k]));
        out.push_back(to_host(f, c, dA, r.aug.apply(gen)));
    }
    return out;
}

}  // namespace detail

/// g: P (x)_E Y^0 (x)_E P^v -> A, x (x) y -> x aug(.) y, assembled from
/// generator images.  `mismatch` receives the first entry where the two
/// bracketings x (eps y) and (x eps) y, computed directly on the tensor basis,
/// disagree with it.
template <class F>
ChainMap<F> build_g(const TruncatedResolution<F>& r, const Realised<F>& c, const Complex<F>& PYP,
                    const Complex<F>& A0, std::string& mismatch) {
    const auto& A = *PYP.base;
    const F& f = A.field;
    const std::size_t dA = A.dim();
    auto vals = detail::evaluation_values(r, c, dA);
    Matrix<F> G(f, dA, PYP.dim(0));
    auto off = PYP.offsets(0);
    const auto& bl = PYP.blocks(0);
    for (std::size_t k = 0; k < bl.size(); ++k)
        G.set_block(0, off[k], detail::expand_from_generator(PYP, bl[k], A0, 0, vals[k]));
    mismatch.clear();
    for (std::size_t k = 0; k < bl.size() && mismatch.empty(); ++k) {
        const auto& pb = PYP.ring->proj_basis[bl[k].v];
        for (std::size_t i = 0; i < pb.size(); ++i) {
            auto x = A.basis_vec(pb[i] / dA), y = A.basis_vec(pb[i] % dA);
            auto left = A.mul(x, A.mul(vals[k], y));
            auto right = A.mul(A.mul(x, vals[k]), y);
            auto col = G.col(off[k] + i);
            if (left != col || right != col) {
                mismatch = "g disagrees with direct evaluation at block " + std::to_string(k) + ", basis element " +
                           PYP.ring->labels[pb[i]];
                break;
            }
        }
    }
    ChainMap<F> g;
    g.lo = 0;
    g.f.push_back(std::move(G));
    return g;
}

template <class F>
Complex<F> diagonal_stalk(AlgebraPtr<F> A, AlgebraPtr<F> Aen, int deg = 0) {
    return stalk(Aen, A, {Block<F>::diag()}, deg);
}

template <class F>
Complex<F> module_stalk(AlgebraPtr<F> A, Block<F> b, int deg) {
    return stalk<F>(A, nullptr, {std::move(b)}, deg);
}

/// Assemble the twist from an already certified resolution of the corner.
template <class F>
TwistData<F> build_twist(AlgebraPtr<F> A, AlgebraPtr<F> Aen, Realised<F> corner, TruncatedResolution<F> res) {
    TwistData<F> t;
    t.A = A;
    t.Aen = Aen;
    std::set<std::size_t> js(corner.vertex_to_host.begin(), corner.vertex_to_host.end());
    t.J.assign(js.begin(), js.end());
    t.n = res.n;
    t.PYP = detail::induce(res.Y, corner, A, Aen);
    t.A0 = diagonal_stalk(A, Aen);
    t.g = build_g(res, corner, t.PYP, t.A0, t.g_mismatch);
    auto err = check_chain_map(t.PYP, t.A0, t.g);
    if (!err.empty()) throw TwistError("g is not a chain map: " + err);
    t.X = cone(t.PYP, t.A0, t.g);
    err = check_complex(t.X);
    if (!err.empty()) throw TwistError("cone(g) is not a complex: " + err);
    t.sigma.resize(A->nverts());
    for (std::size_t v = 0; v < A->nverts(); ++v) t.sigma[v] = v;
    for (std::size_t k = 0; k < corner.vertex_to_host.size(); ++k)
        t.sigma[corner.vertex_to_host[k]] = corner.vertex_to_host[res.perm[k]];
    t.corner = std::move(corner);
    t.res = std::move(res);
    return t;
}

/// Collapse repeats, certify the corner algebra and build X.
template <class F>
TwistData<F> twist_setup(AlgebraPtr<F> A, std::vector<std::size_t> J, std::size_t max_period = 8,
                         std::uint64_t seed = 0, std::size_t budget = 4096, AlgebraPtr<F> Aen = nullptr) {
    if (!A->trace) throw TwistError("NotSymmetric: the algebra has no symmetrising form");
    std::sort(J.begin(), J.end());
    J.erase(std::unique(J.begin(), J.end()), J.end());
    if (J.empty()) throw TwistError("the vertex set J is empty");
    for (auto j : J)
        if (j >= A->nverts()) throw TwistError("vertex " + std::to_string(j + 1) + " is out of range");
    if (!Aen) Aen = share_algebra(enveloping(*A));
    auto corner = corner_algebra(*A, J);
    auto E = share_algebra(corner.alg);
    auto cr = certify_twisted_periodicity(E, max_period, seed, budget);
    if (!cr.res) {
        std::string log;
        for (const auto& l : cr.log) log += (log.empty() ? "" : "; ") + l;
        throw TwistError("NotCertified: the endomorphism algebra is not twisted periodic up to period " +
                         std::to_string(max_period) + (log.empty() ? "" : " (" + log + ")"));
    }
    return build_twist(A, Aen, std::move(corner), std::move(*cr.res));
}

/// minimize(X (x)_A V).
template <class F>
Complex<F> apply_twist(const Complex<F>& X, const Complex<F>& V) {
    return minimize(tensor(X, V)).complex;
}

// ---------------------------------------------------------------------------
// Verification

template <class F>
struct TwistOptions {
    std::optional<std::vector<std::size_t>> claimed_sigma;  // replaces the computed one in check (a)
    std::vector<Module<F>> extra_objects;                   // added to the simples off J
    bool doubled = true;
    std::uint64_t seed = 1;
    std::size_t budget = 400;
};

template <class F>
struct TwistReport {
    VerifyReport checks;
    std::map<int, std::size_t> x_dims;
    std::vector<std::size_t> sigma;
    std::size_t n = 0;
    double seconds = 0;
    bool ok() const { return checks.ok(); }
};

namespace detail {

inline std::string vertex_name(std::size_t v) { return "P_" + std::to_string(v + 1); }

/// Dimensions of the homology of e_B X e_C, B and C vertex sets.
template <class F>
std::map<int, std::size_t> corner_complex_homology(const Complex<F>& X, const std::vector<std::size_t>& B,
                                                   const std::vector<std::size_t>& C) {
    const F& f = X.field();
    const auto& A = *X.base;
    std::map<int, Matrix<F>> U;
    for (int i = X.lo; i <= X.hi(); ++i) {
        const std::size_t n = X.dim(i);
        Matrix<F> p(f, n, n);
        for (std::size_t c = 0; c < n; ++c) {
            Vec<F> e(n, f.zero());
            e[c] = f.one();
            Vec<F> acc(n, f.zero());
            for (auto b : B)
                for (auto w : C) {
                    auto y = term_right(X, i, A.idem[w], term_left(X, i, A.idem[b], e));
                    for (std::size_t k = 0; k < n; ++k) acc[k] = f.add(acc[k], y[k]);
                }
            p.set_col(c, acc);
        }
        U[i] = column_space(p);
    }
    std::map<int, std::size_t> out;
    for (int i = X.lo; i <= X.hi(); ++i) {
        std::size_t r_out = rank(X.diff(i) * U[i]);
        std::size_t r_in = i > X.lo ? rank(X.diff(i - 1) * U[i - 1]) : 0;
        std::size_t h = U[i].cols() - r_out - r_in;
        if (h) out[i] = h;
    }
    return out;
}

}  // namespace detail

template <class F>
TwistReport<F> verify_twist(const TwistData<F>& t, const TwistOptions<F>& opt = {}) {
    auto start = std::chrono::steady_clock::now();
    TwistReport<F> rep;
    rep.n = t.n;
    rep.sigma = opt.claimed_sigma ? *opt.claimed_sigma : t.sigma;
    for (int i = t.X.lo; i <= t.X.hi(); ++i) rep.x_dims[i] = t.X.dim(i);
    auto& checks = rep.checks.checks;
    const auto& A = t.A;
    const int n = static_cast<int>(t.n);

    checks.push_back({"evaluation composites", t.g_mismatch.empty(),
                      t.g_mismatch.empty() ? "generator expansion and both bracketings agree" : t.g_mismatch});

    // (a) projectives in J
    for (auto j : t.J) {
        auto img = apply_twist(t.X, module_stalk(A, Block<F>::proj(j), 0));
        auto want = module_stalk(A, Block<F>::proj(rep.sigma[j]), -n);
        auto eq = homotopy_equivalent(img, want, opt.seed, opt.budget);
        bool ok = eq.verdict == Verdict::Yes;
        checks.push_back({"projective " + detail::vertex_name(j), ok,
                          ok ? "X (x) " + detail::vertex_name(j) + " = " + detail::vertex_name(rep.sigma[j]) + "[" +
                                   std::to_string(n) + "]"
                             : "X (x) " + detail::vertex_name(j) + " has minimal complex " + describe(eq.min_x) +
                                   ", expected " + describe(want) + " (" + eq.reason + ")"});
    }

    // (b) objects orthogonal to P
    std::vector<std::pair<std::string, Module<F>>> objs;
    for (std::size_t i = 0; i < A->nverts(); ++i)
        if (!std::binary_search(t.J.begin(), t.J.end(), i)) objs.push_back({"simple S_" + std::to_string(i + 1), simple(A, i)});
    for (std::size_t k = 0; k < opt.extra_objects.size(); ++k)
        if (perp_test(opt.extra_objects[k], t.J)) objs.push_back({"object " + std::to_string(k + 1), opt.extra_objects[k]});
    for (const auto& [name, M] : objs) {
        auto mp = std::make_shared<const Module<F>>(M);
        auto img = apply_twist(t.X, module_stalk(A, Block<F>::gen(mp), 0));
        auto h = homology_dims(img);
        bool ok = h.size() == 1 && h.begin()->first == 0 && h.begin()->second == M.dim;
        std::string detail = "homology concentrated in degree 0";
        if (ok) {
            auto iso = is_isomorphic(homology(img, 0).module, M, opt.seed, opt.budget);
            ok = iso.verdict == Verdict::Yes;
            if (!ok) detail = "H^0 is not isomorphic to the object: " + iso.obstruction;
            else detail = "X (x) K = K";
        } else {
            detail = "homology in the wrong degrees, minimal complex " + describe(img);
        }
        checks.push_back({name, ok, detail});
    }

    // (c) two-sided tilting certificate
    auto Xd = dual(t.X);
    auto c1 = check_is_diagonal(tensor(t.X, Xd), opt.seed, opt.budget);
    checks.push_back({"X (x) X* = A", c1.ok, c1.detail});
    auto c2 = check_is_diagonal(tensor(Xd, t.X), opt.seed, opt.budget);
    checks.push_back({"X* (x) X = A", c2.ok, c2.detail});

    // (d) doubled projective
    if (opt.doubled) {
        std::string detail;
        bool ok = false;
        try {
            auto c2x = matrix_algebra(t.corner, 2);
            auto E2 = share_algebra(c2x.alg);
            auto cr = certify_twisted_periodicity(E2, t.n, 0, 4096);
            if (!cr.res) {
                detail = "doubled endomorphism algebra not certified at period " + std::to_string(t.n);
            } else {
                auto t2 = build_twist(t.A, t.Aen, std::move(c2x), std::move(*cr.res));
                auto eq = homotopy_equivalent(t2.X, t.X, opt.seed, opt.budget);
                ok = eq.verdict == Verdict::Yes;
                detail = ok ? "X from P (+) P is homotopy equivalent to X" : eq.reason;
            }
        } catch (const std::exception& e) {
            detail = e.what();
        }
        checks.push_back({"doubled projective", ok, detail});
    }

    // (e) blocks
    auto blocks = algebra_blocks(*A);
    if (blocks.size() == 1) {
        checks.push_back({"blocks", true, "A is connected"});
    } else {
        std::string bad;
        for (std::size_t b = 0; b < blocks.size() && bad.empty(); ++b)
            for (std::size_t c = 0; c < blocks.size() && bad.empty(); ++c) {
                auto h = detail::corner_complex_homology(t.X, blocks[b], blocks[c]);
                bool meets = false;
                for (auto v : blocks[b])
                    if (std::binary_search(t.J.begin(), t.J.end(), v)) meets = true;
                if (b != c && !h.empty()) bad = "X has homology between blocks " + std::to_string(b + 1) + " and " + std::to_string(c + 1);
                if (b == c && !meets) {
                    std::size_t dimB = 0;
                    for (auto u : blocks[b])
                        for (auto w : blocks[b]) dimB += A->cartan(u, w);
                    if (h.size() != 1 || h.begin()->first != 0 || h.begin()->second != dimB)
                        bad = "X is not the identity on block " + std::to_string(b + 1);
                }
            }
        checks.push_back({"blocks", bad.empty(), bad.empty() ? "X splits along the blocks of A" : bad});
    }
    rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return rep;
}

// ---------------------------------------------------------------------------
// Inverse

template <class F>
struct InverseTwist {
    InverseResolution<F> resp;
    Complex<F> PYpP;  // degrees 0 .. n-1
    ChainMap<F> gp;   // A[0] -> PYpP
    Complex<F> Xp;    // degrees 0 .. n
    VerifyReport report;
};

namespace detail {

/// The element z in P (x)_E Y'^0 (x)_E P^v corresponding, under
/// x (x) m -> (y -> (y x) m), to the map y -> w (x) y with w = embed(1).
template <class F>
Vec<F> coevaluation_element(const TwistData<F>& t, const InverseResolution<F>& ir, const Complex<F>& PYpP) {
    const auto& A = *t.A;
    const auto& E = *t.res.E;
    const auto& Een = *t.res.Een;
    const F& f = A.field;
    const std::size_t dA = A.dim(), dE = E.dim(), rE = E.nverts();
    const auto& c = t.corner;
    std::vector<long> epos(dA, -1);
    for (std::size_t i = 0; i < dE; ++i) epos[c.basis_to_host[i]] = static_cast<long>(i);
    const auto& Yp = ir.Yp;
    const auto& yb = Yp.blocks(0);
    auto oy = Yp.offsets(0);
    const auto& zb = PYpP.blocks(0);
    auto oz = PYpP.offsets(0);
    const std::size_t nz = PYpP.dim(0), nb = yb.size();
    auto row = [&](std::size_t k, std::size_t a, std::size_t m) { return (k * dE + a) * dA + m; };
    const std::size_t per_y = nb * dE * dA;
    std::vector<std::size_t> ys;
    for (std::size_t y = 0; y < dA; ++y)
        if (std::binary_search(t.J.begin(), t.J.end(), A.lv[y])) ys.push_back(y);
    Matrix<F> lhs(f, per_y * ys.size(), nz), rhs(f, per_y * ys.size(), 1);
    Vec<F> one = E.unit();
    Vec<F> w = ir.embed.apply(one);
    for (std::size_t s = 0; s < ys.size(); ++s) {
        const std::size_t y = ys[s], base = s * per_y;
        for (std::size_t k = 0; k < nb; ++k) {
            const std::size_t u = yb[k].v / rE;
            (void)u;
            const auto& pa = PYpP.ring->proj_basis[zb[k].v];
            for (std::size_t p = 0; p < pa.size(); ++p) {
                const std::size_t xi = pa[p] / dA, qj = pa[p] % dA;
                for (const auto& [m, v] : A.table[y][xi]) {
                    if (epos[m] < 0) throw TwistError("coevaluation: product leaves the corner");
                    auto& e = lhs(base + row(k, static_cast<std::size_t>(epos[m]), qj), oz[k] + p);
                    e = f.add(e, v);
                }
            }
            const auto& pe = Een.proj_basis[yb[k].v];
            for (std::size_t p = 0; p < pe.size(); ++p) {
                const auto& wc = w[oy[k] + p];
                if (f.is_zero(wc)) continue;
                const std::size_t a = pe[p] / dE, b = pe[p] % dE;
                for (const auto& [m, v] : A.table[c.basis_to_host[b]][y]) {
                    auto& e = rhs(base + row(k, a, m), 0);
                    e = f.add(e, f.mul(wc, v));
                }
            }
        }
    }
    auto sol = try_solve(lhs, rhs);
    if (!sol) throw TwistError("coevaluation element does not exist");
    return sol->col(0);
}

}  // namespace detail

template <class F>
InverseTwist<F> twist_inverse(const TwistData<F>& t, std::uint64_t seed = 1, std::size_t budget = 400) {
    InverseTwist<F> out;
    const auto& A = *t.A;
    const F& f = A.field;
    out.resp = inverse_resolution(t.res);
    out.PYpP = detail::induce(out.resp.Yp, t.corner, t.A, t.Aen);
    auto z = detail::coevaluation_element(t, out.resp, out.PYpP);
    auto& checks = out.report.checks;
    bool central = true;
    for (auto a : A.generators)
        if (detail::term_left(out.PYpP, 0, a, z) != detail::term_right(out.PYpP, 0, a, z)) central = false;
    checks.push_back({"coevaluation central", central, central ? "a z = z a for the generators" : "z is not central"});
    out.gp.lo = 0;
    out.gp.f.push_back(detail::expand_from_generator(t.A0, t.A0.blocks(0)[0], out.PYpP, 0, z));
    auto err = check_chain_map(t.A0, out.PYpP, out.gp);
    checks.push_back({"g' chain map", err.empty(), err.empty() ? "d g' = 0" : err});
    (void)f;
    out.Xp = shift(cone(t.A0, out.PYpP, out.gp), -1);
    err = check_complex(out.Xp);
    checks.push_back({"X' complex", err.empty(), err.empty() ? "cone(g')[-1] is a complex" : err});

    auto eq = homotopy_equivalent(out.Xp, dual(t.X), seed, budget);
    checks.push_back({"X' = X*", eq.verdict == Verdict::Yes, eq.reason});
    auto dg = check_is_diagonal(tensor(out.Xp, t.X), seed, budget);
    checks.push_back({"X' (x) X = A", dg.ok, dg.detail});
    const int n = static_cast<int>(t.n);
    std::vector<std::size_t> inv(t.sigma.size());
    for (std::size_t v = 0; v < t.sigma.size(); ++v) inv[t.sigma[v]] = v;
    for (auto j : t.J) {
        auto img = apply_twist(out.Xp, module_stalk(t.A, Block<F>::proj(j), 0));
        auto want = module_stalk(t.A, Block<F>::proj(inv[j]), n);
        auto e2 = homotopy_equivalent(img, want, seed, budget);
        bool ok = e2.verdict == Verdict::Yes;
        checks.push_back({"inverse on " + detail::vertex_name(j), ok,
                          ok ? "X' (x) " + detail::vertex_name(j) + " = " + detail::vertex_name(inv[j]) + "[-" +
                                   std::to_string(n) + "]"
                             : "minimal complex " + describe(e2.min_x) + ", expected " + describe(want)});
    }
    return out;
}

// ---------------------------------------------------------------------------
// Composition

/// minimize(X_1 (x) X_2 (x) ... ), the functor  Psi_1 o Psi_2 o ...
template <class F>
Complex<F> tensor_word(const std::vector<const Complex<F>*>& xs) {
    if (xs.empty()) throw TwistError("empty word");
    Complex<F> acc = minimize(*xs.back()).complex;
    for (std::size_t k = xs.size() - 1; k-- > 0;) acc = minimize(tensor(*xs[k], acc)).complex;
    return acc;
}

template <class F>
struct CompositionResult {
    TwistData<F> spliced;
    Complex<F> product;  // minimize(X_2 (x) X_1)
    EquivalenceResult<F> eq;
};

/// Psi for splice(Y_1, Y_2) against Psi_2 o Psi_1.
template <class F>
CompositionResult<F> compose_twists(const TwistData<F>& t1, const TwistData<F>& t2, std::uint64_t seed = 1,
                                    std::size_t budget = 400) {
    if (t1.A != t2.A || t1.J != t2.J) throw TwistError("AlgebraMismatch: twists over different algebras or projectives");
    CompositionResult<F> r;
    r.spliced = build_twist(t1.A, t1.Aen, t1.corner, splice(t1.res, t2.res));
    r.product = tensor_word<F>({&t2.X, &t1.X});
    r.eq = homotopy_equivalent(r.product, r.spliced.X, seed, budget);
    return r;
}

}  // namespace ptw
