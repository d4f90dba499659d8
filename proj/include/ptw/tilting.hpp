#pragma once

// Two-term tilting complexes at a vertex set J (T_j = P_j[1] for j in J and
// T_i = [P'_i -> P_i] with P'_i -> P_i a projective cover over E = e_J A e_J of
// e_J A e_i), their endomorphism algebras in the homotopy category, iterated
// tilts, algebra isomorphism search, and the comparison of the iterated tilt
// with the periodic twist.

#include "ptw/twist.hpp"

namespace ptw {

struct TiltError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Parameter coordinates of a degree-0 chain map in a HomSpace.
template <class F>
detail::Vec<F> chain_map_params(const Complex<F>& X, const Complex<F>& Y, const HomSpace<F>& H, const ChainMap<F>& m) {
    const F& f = X.field();
    detail::Vec<F> p(H.dim, f.zero());
    for (const auto& g : H.groups) {
        auto xo = X.offsets(g.src_deg);
        detail::Vec<F> gen(X.dim(g.src_deg), f.zero());
        auto bg = block_generator(X, X.blocks(g.src_deg)[g.block]);
        std::copy(bg.begin(), bg.end(), gen.begin() + static_cast<long>(xo[g.block]));
        auto c = g.coords.apply(chain_component(m, X, Y, g.src_deg).apply(gen));
        for (std::size_t q = 0; q < c.size(); ++q) p[g.first + q] = c[q];
    }
    return p;
}

/// Coordinates of the homotopy class of m in the basis s.classes.
template <class F>
detail::Vec<F> class_coords(const Complex<F>& X, const Complex<F>& Y, const ChainMapSpace<F>& s, const ChainMap<F>& m) {
    auto p = chain_map_params(X, Y, s.h0, m);
    Matrix<F> sys = Matrix<F>::hstack(s.classes, s.boundaries);
    auto sol = try_solve(sys, Matrix<F>::column(X.field(), p));
    if (!sol) throw TiltError("map is not a chain map in the expected space");
    detail::Vec<F> c(s.classes.cols(), X.field().zero());
    for (std::size_t k = 0; k < c.size(); ++k) c[k] = (*sol)(k, 0);
    return c;
}

template <class F>
struct Approximation {
    std::vector<std::size_t> vertices;  // summands P_j of P'_i
    std::vector<detail::Vec<F>> images;         // generator images in e_j A e_i
    bool minimal = true;                // dropping any summand loses surjectivity onto e_J A e_i
    bool cokernel_ok = true;            // e_J A e_i lies in the image
};

namespace detail {

/// Embedding E -> A of a corner algebra, columns the host basis vectors.
template <class F>
Matrix<F> corner_embedding(const Realised<F>& c, std::size_t dA, const F& f) {
    Matrix<F> g(f, dA, c.basis_to_host.size());
    for (std::size_t k = 0; k < c.basis_to_host.size(); ++k) g(c.basis_to_host[k], k) = f.one();
    return g;
}

/// e_J M as an E-module, for an A-module M.
template <class F>
Module<F> corner_part(const Module<F>& M, AlgebraPtr<F> E, const Realised<F>& c) {
    const auto& A = *M.alg;
    auto r = restrict_along(M, E, corner_embedding(c, A.dim(), A.field));
    Matrix<F> proj(A.field, M.dim, M.dim);
    for (auto v : c.vertex_to_host) proj = proj + M.act[A.idem[v]];
    return submodule(r, column_space(proj));
}

}  // namespace detail

/// Right minimal add(P)-approximation of P_i, i not in J.
template <class F>
Approximation<F> minimal_approximation(AlgebraPtr<F> A, const std::vector<std::size_t>& J, std::size_t i) {
    if (std::binary_search(J.begin(), J.end(), i)) throw TiltError("BadSubset: vertex " + std::to_string(i + 1) + " lies in J");
    const F& f = A->field;
    auto c = corner_algebra(*A, J);
    auto E = share_algebra(c.alg);
    auto Pi = projective(A, i);  // coordinates: A.proj_basis[i]
    auto M = detail::corner_part(Pi, E, c);
    // M is a submodule of Pi: recover its embedding
    Matrix<F> proj(f, Pi.dim, Pi.dim);
    for (auto v : J) proj = proj + Pi.act[A->idem[v]];
    Matrix<F> emb = column_space(proj);
    Approximation<F> out;
    auto tops = top_lifts(M);
    auto to_host = [&](const detail::Vec<F>& m) {
        auto x = emb.apply(m);
        detail::Vec<F> h(A->dim(), f.zero());
        for (std::size_t k = 0; k < x.size(); ++k) h[A->proj_basis[i][k]] = x[k];
        return h;
    };
    for (const auto& [k, x] : tops) {
        out.vertices.push_back(J[k]);
        out.images.push_back(to_host(x));
    }
    auto generated = [&](std::size_t skip) {
        Matrix<F> span(f, M.dim, 0);
        for (std::size_t t = 0; t < tops.size(); ++t) {
            if (t == skip) continue;
            for (std::size_t b = 0; b < E->dim(); ++b)
                span = Matrix<F>::hstack(span, Matrix<F>::column(f, M.act[b].apply(tops[t].second)));
        }
        return rank(span);
    };
    out.cokernel_ok = generated(tops.size()) == M.dim;
    for (std::size_t t = 0; t < tops.size(); ++t)
        if (generated(t) == M.dim) out.minimal = false;
    return out;
}

template <class F>
struct HomRep {
    std::size_t src = 0, tgt = 0;
    ChainMap<F> map;
};

template <class F>
struct TiltStep {
    AlgebraPtr<F> A;
    std::vector<std::size_t> J;
    std::vector<Complex<F>> T;                 // T_v, degrees -1 .. 0
    std::vector<Approximation<F>> approx;      // per vertex (empty for j in J)
    std::vector<HomRep<F>> raw;                // homotopy classes, the raw basis of End(T)^op
    Matrix<F> to_B, from_B;                    // raw <-> adapted coordinates
    AlgebraPtr<F> B;
    std::size_t hom_plus = 0, hom_minus = 0;   // dim Hom_K(T, T[1]), Hom_K(T, T[-1])
    bool symmetric = false;
};

/// T_v for every vertex.
template <class F>
std::vector<Complex<F>> combinatorial_tilting_complex(AlgebraPtr<F> A, std::vector<std::size_t> J,
                                                      std::vector<Approximation<F>>* approx = nullptr) {
    std::sort(J.begin(), J.end());
    J.erase(std::unique(J.begin(), J.end()), J.end());
    const std::size_t r = A->nverts();
    if (J.empty() || J.size() >= r) throw TiltError("BadSubset: J must be a nonempty proper subset of the vertices");
    for (auto j : J)
        if (j >= r) throw TiltError("BadSubset: vertex " + std::to_string(j + 1) + " is out of range");
    for (std::size_t v = 0; v < r; ++v)
        if (A->vclass[v] != v) throw TiltError("tilting needs a basic algebra");
    std::vector<Complex<F>> T;
    if (approx) approx->assign(r, {});
    for (std::size_t v = 0; v < r; ++v) {
        if (std::binary_search(J.begin(), J.end(), v)) {
            T.push_back(stalk<F>(A, nullptr, {Block<F>::proj(v)}, -1));
            continue;
        }
        auto ap = minimal_approximation(A, J, v);
        Complex<F> t = empty_complex<F>(A, nullptr);
        t.lo = -1;
        std::vector<Block<F>> src;
        for (auto u : ap.vertices) src.push_back(Block<F>::proj(u));
        t.terms = {src, {Block<F>::proj(v)}};
        Matrix<F> d(A->field, t.dim(0), t.dim(-1));
        auto off = t.offsets(-1);
        for (std::size_t k = 0; k < src.size(); ++k) {
            detail::Vec<F> y(t.dim(0), A->field.zero());
            for (std::size_t m = 0; m < A->dim(); ++m)
                if (!A->field.is_zero(ap.images[k][m])) y[A->proj_pos[m]] = ap.images[k][m];
            d.set_block(0, off[k], detail::expand_from_generator(t, src[k], t, 0, y));
        }
        t.d.push_back(std::move(d));
        T.push_back(std::move(t));
        if (approx) (*approx)[v] = std::move(ap);
    }
    return T;
}

template <class F>
Complex<F> sum_of(const std::vector<Complex<F>>& xs) {
    Complex<F> s = xs.front();
    for (std::size_t k = 1; k < xs.size(); ++k) s = direct_sum(s, xs[k]);
    return s;
}

/// One tilt: T, self-orthogonality and B = End_K(T)^op.
template <class F>
TiltStep<F> tilt(AlgebraPtr<F> A, std::vector<std::size_t> J, std::uint64_t seed = 0) {
    TiltStep<F> st;
    const F& f = A->field;
    std::sort(J.begin(), J.end());
    J.erase(std::unique(J.begin(), J.end()), J.end());
    st.A = A;
    st.J = J;
    st.T = combinatorial_tilting_complex(A, J, &st.approx);
    const std::size_t r = A->nverts();
    auto whole = sum_of(st.T);
    st.hom_plus = chain_map_space(whole, shift(whole, 1)).classes.cols();
    st.hom_minus = chain_map_space(whole, shift(whole, -1)).classes.cols();
    if (st.hom_plus != 0 || st.hom_minus != 0)
        throw TiltError("T is not self-orthogonal: Hom(T, T[1]) has dimension " + std::to_string(st.hom_plus) +
                        ", Hom(T, T[-1]) has dimension " + std::to_string(st.hom_minus));

    std::vector<ChainMapSpace<F>> spaces(r * r);
    std::vector<std::size_t> first(r * r + 1, 0);
    for (std::size_t a = 0; a < r; ++a)
        for (std::size_t b = 0; b < r; ++b) {
            auto& s = spaces[a * r + b];
            s = chain_map_space(st.T[a], st.T[b]);
            first[a * r + b + 1] = first[a * r + b] + s.classes.cols();
            for (std::size_t c = 0; c < s.classes.cols(); ++c)
                st.raw.push_back({a, b, assemble(st.T[a], st.T[b], s.h0, s.classes.col(c))});
        }
    const std::size_t d = st.raw.size();
    std::vector<std::string> labels;
    for (std::size_t k = 0; k < d; ++k)
        labels.push_back("T" + std::to_string(st.raw[k].src + 1) + ">T" + std::to_string(st.raw[k].tgt + 1) + "#" +
                         std::to_string(k - first[st.raw[k].src * r + st.raw[k].tgt]));
    std::vector<std::vector<Sparse<F>>> table(d, std::vector<Sparse<F>>(d));
    for (std::size_t x = 0; x < d; ++x)
        for (std::size_t y = 0; y < d; ++y) {
            const auto& fx = st.raw[x];
            const auto& gy = st.raw[y];
            if (fx.tgt != gy.src) continue;
            const std::size_t a = fx.src, b = fx.tgt, c = gy.tgt;
            // x . y = y o x
            auto comp = compose(st.T[a], st.T[b], st.T[c], fx.map, gy.map);
            auto cc = class_coords(st.T[a], st.T[c], spaces[a * r + c], comp);
            for (std::size_t k = 0; k < cc.size(); ++k)
                if (!f.is_zero(cc[k])) table[x][y].push_back({static_cast<std::uint32_t>(first[a * r + c] + k), cc[k]});
        }
    std::vector<detail::Vec<F>> idem;
    for (std::size_t a = 0; a < r; ++a) {
        detail::Vec<F> e(d, f.zero());
        auto cc = class_coords(st.T[a], st.T[a], spaces[a * r + a], identity_map(st.T[a]));
        for (std::size_t k = 0; k < cc.size(); ++k) e[first[a * r + a] + k] = cc[k];
        idem.push_back(e);
    }
    Matrix<F> to_new;
    auto B = adapt_basis(f, A->name + "^(+1)", labels, table, idem, std::nullopt, &to_new);
    if (B.vertex_labels.size() == r) B.vertex_labels = A->vertex_labels;
    auto form = find_symmetric_form(B, seed);
    if (form.status == FormStatus::Found) {
        B.trace = form.phi;
        st.symmetric = true;
    }
    st.to_B = to_new;
    st.from_B = invert(to_new);
    st.B = share_algebra(std::move(B));
    return st;
}

/// F^{-1}: a bounded complex of projective B-modules rewritten over A by
/// replacing P_b with T_b.  Built one term at a time from the top, lifting
/// each differential to a chain map into the part already built.
template <class F>
Complex<F> realise(const TiltStep<F>& st, const Complex<F>& Z) {
    const F& f = st.A->field;
    const auto& B = *st.B;
    if (Z.terms.empty()) return empty_complex<F>(st.A, nullptr);
    for (const auto& t : Z.terms)
        for (const auto& b : t)
            if (b.kind != BlockKind::Proj) throw TiltError("realise: only complexes of projectives");
    auto column = [&](int deg, int place) {
        Complex<F> c = empty_complex<F>(st.A, nullptr);
        for (const auto& b : Z.blocks(deg)) c = direct_sum(c, shift(st.T[b.v], -place));
        if (c.terms.empty()) {
            c.lo = place;
            c.terms.push_back({});
        }
        return c;
    };
    // chain map column(deg, place) -> column(deg+1, place) induced by Z.diff(deg)
    auto naive = [&](int deg, const Complex<F>& S, const Complex<F>& Q, int place) {
        ChainMap<F> m;
        m.lo = std::min(S.lo, Q.lo);
        const int hi = std::max(S.hi(), Q.hi());
        for (int i = m.lo; i <= hi; ++i) m.f.push_back(Matrix<F>(f, Q.dim(i), S.dim(i)));
        const auto& sb = Z.blocks(deg);
        const auto& qb = Z.blocks(deg + 1);
        auto zo = Z.offsets(deg), zq = Z.offsets(deg + 1);
        Matrix<F> dz = Z.diff(deg);
        for (std::size_t s = 0; s < sb.size(); ++s) {
            detail::Vec<F> gen(Z.dim(deg), f.zero());
            gen[zo[s] + B.proj_pos[B.idem[sb[s].v]]] = f.one();
            auto img = dz.apply(gen);
            for (std::size_t q = 0; q < qb.size(); ++q) {
                detail::Vec<F> y(B.dim(), f.zero());
                const auto& pb = B.proj_basis[qb[q].v];
                for (std::size_t k = 0; k < pb.size(); ++k) y[pb[k]] = img[zq[q] + k];
                if (is_zero_vec(f, y)) continue;
                auto raw = st.from_B.apply(y);
                for (std::size_t k = 0; k < raw.size(); ++k) {
                    if (f.is_zero(raw[k])) continue;
                    const auto& h = st.raw[k];
                    if (h.src != sb[s].v || h.tgt != qb[q].v) throw TiltError("realise: map between the wrong summands");
                    for (int i = m.lo; i <= hi; ++i) {
                        auto comp = chain_component(h.map, st.T[h.src], st.T[h.tgt], i + place);
                        if (comp.rows() == 0 || comp.cols() == 0) continue;
                        // block positions of summand s / q inside the columns
                        std::size_t srow = 0, scol = 0;
                        for (std::size_t t = 0; t < s; ++t) scol += st.T[sb[t].v].dim(i + place);
                        for (std::size_t t = 0; t < q; ++t) srow += st.T[qb[t].v].dim(i + place);
                        auto& M = m.f[static_cast<std::size_t>(i - m.lo)];
                        for (std::size_t a = 0; a < comp.rows(); ++a)
                            for (std::size_t b = 0; b < comp.cols(); ++b)
                                M(srow + a, scol + b) = f.add(M(srow + a, scol + b), f.mul(raw[k], comp(a, b)));
                    }
                }
            }
        }
        return m;
    };
    const int top = Z.hi();
    Complex<F> W = column(top, top);
    Complex<F> Q = W;  // the most recently added column, a quotient of W
    for (int deg = top - 1; deg >= Z.lo; --deg) {
        Complex<F> S = column(deg, deg + 1);
        Complex<F> Qn = column(deg + 1, deg + 1);
        ChainMap<F> N = naive(deg, S, Qn, deg + 1);
        // projection W -> Q onto the leading coordinates
        ChainMap<F> pi;
        pi.lo = std::min(W.lo, Q.lo);
        for (int i = pi.lo; i <= std::max(W.hi(), Q.hi()); ++i) {
            Matrix<F> p(f, Q.dim(i), W.dim(i));
            for (std::size_t k = 0; k < Q.dim(i); ++k) p(k, k) = f.one();
            pi.f.push_back(std::move(p));
        }
        auto sw = chain_map_space(S, W);
        auto sq = chain_map_space(S, Q);
        Matrix<F> sys(f, sq.h0.dim, 0);
        std::vector<ChainMap<F>> cand;
        for (std::size_t c = 0; c < sw.cycles.cols(); ++c) {
            cand.push_back(assemble(S, W, sw.h0, sw.cycles.col(c)));
            auto pc = compose(S, W, Q, cand.back(), pi);
            sys = Matrix<F>::hstack(sys, Matrix<F>::column(f, chain_map_params(S, Q, sq.h0, pc)));
        }
        sys = Matrix<F>::hstack(sys, sq.boundaries);
        auto target = chain_map_params(S, Q, sq.h0, N);
        auto sol = try_solve(sys, Matrix<F>::column(f, target));
        if (!sol) throw TiltError("realise: differential in degree " + std::to_string(deg) + " does not lift");
        ChainMap<F> h;
        h.lo = std::min(S.lo, W.lo);
        for (int i = h.lo; i <= std::max(S.hi(), W.hi()); ++i) h.f.push_back(Matrix<F>(f, W.dim(i), S.dim(i)));
        for (std::size_t c = 0; c < cand.size(); ++c) {
            const auto& coef = (*sol)(c, 0);
            if (f.is_zero(coef)) continue;
            for (int i = h.lo; i <= std::max(S.hi(), W.hi()); ++i)
                h.f[static_cast<std::size_t>(i - h.lo)].add_scaled(chain_component(cand[c], S, W, i), coef);
        }
        W = cone(S, W, h);
        Q = shift(S, 1);
        auto err = check_complex(W);
        if (!err.empty()) throw TiltError("realise: " + err);
    }
    return W;
}

// ---------------------------------------------------------------------------
// Algebra isomorphism

enum class IsoVerdict { Isomorphic, InvariantsMatch, Distinguished };

inline std::string iso_verdict_name(IsoVerdict v) {
    switch (v) {
        case IsoVerdict::Isomorphic: return "ISOMORPHIC";
        case IsoVerdict::InvariantsMatch: return "INVARIANTS_MATCH";
        default: return "DISTINGUISHED";
    }
}

template <class F>
struct AlgebraIso {
    IsoVerdict verdict = IsoVerdict::InvariantsMatch;
    std::optional<Matrix<F>> witness;     // A -> B
    std::vector<std::size_t> vertex_map;  // e_u -> e_{vertex_map[u]}
    std::string detail;
};

namespace detail {

/// dim e_u (rad / rad^2) e_w.
template <class F>
std::vector<std::vector<std::size_t>> arrow_counts(const Algebra<F>& a) {
    std::vector<std::vector<std::size_t>> c(a.nverts(), std::vector<std::size_t>(a.nverts(), 0));
    for (auto x : a.arrows) ++c[a.lv[x]][a.rv[x]];
    return c;
}

/// Monomials in the arrows forming a basis of a: each is (start vertex, word).
template <class F>
std::vector<std::pair<std::size_t, std::vector<std::size_t>>> monomial_basis(const Algebra<F>& a, Matrix<F>& vectors) {
    const F& f = a.field;
    std::vector<std::pair<std::size_t, std::vector<std::size_t>>> out;
    SpanBuilder<F> span(f, a.dim());
    std::vector<detail::Vec<F>> cols;
    std::vector<std::size_t> frontier;
    for (std::size_t v = 0; v < a.nverts(); ++v) {
        auto e = a.basis_vec(a.idem[v]);
        if (span.add(e)) {
            out.push_back({v, {}});
            cols.push_back(e);
            frontier.push_back(out.size() - 1);
        }
    }
    while (!frontier.empty()) {
        std::vector<std::size_t> next;
        for (auto k : frontier)
            for (auto x : a.arrows) {
                auto p = a.mul(cols[k], a.basis_vec(x));
                if (is_zero_vec(f, p) || !span.add(p)) continue;
                auto w = out[k].second;
                w.push_back(x);
                out.push_back({out[k].first, w});
                cols.push_back(p);
                next.push_back(out.size() - 1);
            }
        frontier = std::move(next);
    }
    if (out.size() != a.dim()) throw TiltError("the arrows do not generate the algebra");
    vectors = Matrix<F>::from_columns(f, a.dim(), cols);
    return out;
}

}  // namespace detail

template <class F>
AlgebraIso<F> algebra_iso_search(const Algebra<F>& a, const Algebra<F>& b, std::uint64_t seed = 0,
                                 std::size_t budget = 1u << 16) {
    AlgebraIso<F> r;
    const F& f = a.field;
    if (a.dim() != b.dim()) {
        r.verdict = IsoVerdict::Distinguished;
        r.detail = "dimensions differ: " + std::to_string(a.dim()) + " vs " + std::to_string(b.dim());
        return r;
    }
    if (a.nverts() != b.nverts()) {
        r.verdict = IsoVerdict::Distinguished;
        r.detail = "numbers of simple modules differ";
        return r;
    }
    const std::size_t n = a.nverts();
    auto qa = detail::arrow_counts(a), qb = detail::arrow_counts(b);
    std::vector<std::vector<std::size_t>> perms;
    for (const auto& p : detail::permutations(n)) {
        bool ok = true;
        for (std::size_t u = 0; u < n && ok; ++u)
            for (std::size_t w = 0; w < n && ok; ++w)
                if (a.cartan(u, w) != b.cartan(p[u], p[w]) || qa[u][w] != qb[p[u]][p[w]]) ok = false;
        if (ok) perms.push_back(p);
    }
    if (perms.empty()) {
        r.verdict = IsoVerdict::Distinguished;
        r.detail = "Cartan matrices or quivers differ under every vertex permutation";
        return r;
    }
    Matrix<F> mono;
    auto words = detail::monomial_basis(a, mono);
    Matrix<F> mono_inv = invert(mono);
    bool all_exhausted = true;
    for (const auto& p : perms) {
        // unknown images of arrows: combinations of radical basis elements of e_{p u} B e_{p w}
        std::vector<std::vector<std::size_t>> slots;
        std::size_t nunk = 0;
        for (auto x : a.arrows) {
            std::vector<std::size_t> s;
            for (std::size_t k = 0; k < b.dim(); ++k)
                if (b.in_rad[k] && b.lv[k] == p[a.lv[x]] && b.rv[k] == p[a.rv[x]]) s.push_back(k);
            nunk += s.size();
            slots.push_back(s);
        }
        auto build = [&](const detail::Vec<F>& c) {
            std::vector<detail::Vec<F>> img(a.dim());
            std::size_t pos = 0;
            std::vector<detail::Vec<F>> arrow_img(a.arrows.size());
            for (std::size_t t = 0; t < a.arrows.size(); ++t) {
                detail::Vec<F> y(b.dim(), f.zero());
                for (auto k : slots[t]) y[k] = c[pos++];
                arrow_img[t] = y;
            }
            Matrix<F> m(f, b.dim(), a.dim());
            for (std::size_t k = 0; k < words.size(); ++k) {
                detail::Vec<F> y = b.basis_vec(b.idem[p[words[k].first]]);
                for (auto x : words[k].second) {
                    auto it = std::find(a.arrows.begin(), a.arrows.end(), x);
                    y = b.mul(y, arrow_img[static_cast<std::size_t>(it - a.arrows.begin())]);
                }
                m.set_col(k, y);
            }
            return Matrix<F>(m * mono_inv);
        };
        bool exhausted = false;
        auto found = search_combination(f, nunk, seed, budget, exhausted, [&](const detail::Vec<F>& c) {
            auto m = build(c);
            if (rank(m) != a.dim()) return false;
            return check_morphism(a, b, m).ok;
        });
        if (nunk == 0) {
            auto m = build({});
            if (rank(m) == a.dim() && check_morphism(a, b, m).ok) found = detail::Vec<F>{};
            exhausted = true;
        }
        if (found) {
            r.witness = build(*found);
            r.vertex_map = p;
            auto back = check_morphism(b, a, invert(*r.witness));
            if (!back.ok) throw TiltError("inverse of an algebra isomorphism is not a morphism: " + back.failure);
            r.verdict = IsoVerdict::Isomorphic;
            r.detail = "explicit isomorphism on the arrows";
            return r;
        }
        if (!exhausted) all_exhausted = false;
    }
    r.verdict = all_exhausted ? IsoVerdict::Distinguished : IsoVerdict::InvariantsMatch;
    r.detail = all_exhausted ? "no arrow assignment gives an isomorphism (exhaustive)"
                             : "invariants agree; no isomorphism found within budget";
    return r;
}

// ---------------------------------------------------------------------------
// Iterated tilts and the circle

template <class F>
struct CircleRun {
    std::vector<TiltStep<F>> steps;
    std::optional<AlgebraIso<F>> iso;  // A^(steps) against A
};

template <class F>
CircleRun<F> iterate_tilts(AlgebraPtr<F> A, const std::vector<std::size_t>& J, std::size_t steps, std::uint64_t seed = 0,
                           std::size_t budget = 1u << 16) {
    CircleRun<F> run;
    AlgebraPtr<F> cur = A;
    for (std::size_t s = 0; s < steps; ++s) {
        run.steps.push_back(tilt(cur, J, seed));
        cur = run.steps.back().B;
    }
    run.iso = algebra_iso_search(*cur, *A, seed, budget);
    return run;
}

/// Preimage over A of the projective P_v of A^(steps).
template <class F>
Complex<F> tracked_preimage(const CircleRun<F>& run, std::size_t v) {
    if (run.steps.empty()) throw TiltError("no tilt steps");
    Complex<F> Z = run.steps.back().T[v];
    for (std::size_t s = run.steps.size() - 1; s-- > 0;) Z = realise(run.steps[s], Z);
    return minimize(Z).complex;
}

/// Hom_A(P, C) = e_J C has homology only in degree -m, isomorphic to
/// Omega^m_E(e_J A e_i) there.  Empty string on success.
template <class F>
std::string iterated_approximation_check(const TwistData<F>& t, const Complex<F>& C, std::size_t i, std::size_t m,
                                         std::uint64_t seed = 1, std::size_t budget = 2000) {
    const auto& A = t.A;
    const F& f = A->field;
    auto E = t.res.E;
    const int deg = -static_cast<int>(m);
    std::map<int, Module<F>> parts;
    std::map<int, Matrix<F>> emb;
    for (int k = C.lo; k <= C.hi(); ++k) {
        auto M = term_module(C, k);
        Matrix<F> proj(f, M.dim, M.dim);
        for (auto v : t.J) proj = proj + M.act[A->idem[v]];
        emb[k] = column_space(proj);
    }
    std::map<int, std::size_t> h;
    for (int k = C.lo; k <= C.hi(); ++k) {
        std::size_t out = rank(C.diff(k) * emb[k]);
        std::size_t in = k > C.lo ? rank(C.diff(k - 1) * emb[k - 1]) : 0;
        std::size_t d = emb[k].cols() - out - in;
        if (d) h[k] = d;
    }
    Module<F> omega = detail::corner_part(projective(A, i), E, t.corner);
    for (std::size_t s = 0; s < m; ++s) omega = syzygy_step(omega).kernel;
    if (omega.dim == 0 && h.empty()) return {};
    if (h.size() != 1 || h.begin()->first != deg) {
        std::string got;
        for (const auto& [k, d] : h) got += (got.empty() ? "" : ", ") + std::to_string(d) + " in degree " + std::to_string(k);
        return "Hom(P, C) has homology " + (got.empty() ? std::string("zero") : got) + ", expected only degree " +
               std::to_string(deg);
    }
    // homology module in degree deg as an E-module
    auto M = detail::corner_part(term_module(C, deg), E, t.corner);
    Matrix<F> Zk = kernel_basis(C.diff(deg) * emb[deg]);
    Matrix<F> Bk = deg > C.lo ? column_space(solve(emb[deg], C.diff(deg - 1) * emb[deg - 1])) : Matrix<F>(f, emb[deg].cols(), 0);
    // M is built on column_space(proj), the same basis as emb[deg]
    auto H = subquotient(M, Zk, Bk);
    auto iso = is_isomorphic(H.module, omega, seed, budget);
    if (iso.verdict != Verdict::Yes)
        return "homology in degree " + std::to_string(deg) + " is not Omega^" + std::to_string(m) + " of e_J A e_" +
               std::to_string(i + 1) + ": " + iso.obstruction;
    return {};
}

template <class F>
struct CircleReport {
    VerifyReport checks;
    std::optional<AlgebraIso<F>> iso;
};

/// Compare the inverse of the iterated tilt with the twist on projectives.
/// `steps` is the claimed period.
template <class F>
CircleReport<F> circle_vs_twist(const TwistData<F>& t, const CircleRun<F>& run, std::uint64_t seed = 1,
                                std::size_t budget = 400) {
    CircleReport<F> rep;
    auto& checks = rep.checks.checks;
    const std::size_t m = run.steps.size();
    const auto& A = t.A;
    rep.iso = run.iso;
    bool iso_ok = run.iso && run.iso->verdict == IsoVerdict::Isomorphic;
    checks.push_back({"A^(" + std::to_string(m) + ") = A", iso_ok,
                      run.iso ? iso_verdict_name(run.iso->verdict) + ": " + run.iso->detail : "not computed"});
    for (std::size_t v = 0; v < A->nverts(); ++v) {
        const std::string name = detail::vertex_name(v);
        auto img = apply_twist(t.X, module_stalk(A, Block<F>::proj(v), 0));
        auto tracked = tracked_preimage(run, v);
        if (std::binary_search(t.J.begin(), t.J.end(), v)) {
            auto want_t = module_stalk(A, Block<F>::proj(t.sigma[v]), -static_cast<int>(m));
            auto want_f = module_stalk(A, Block<F>::proj(v), -static_cast<int>(m));
            auto e1 = homotopy_equivalent(img, want_t, seed, budget);
            auto e2 = homotopy_equivalent(tracked, want_f, seed, budget);
            bool ok = e1.verdict == Verdict::Yes && e2.verdict == Verdict::Yes;
            checks.push_back({"circle " + name, ok,
                              ok ? "both sides are projectives in J shifted by " + std::to_string(m)
                                 : "twist gives " + describe(e1.min_x) + ", tilt gives " + describe(e2.min_x)});
            continue;
        }
        auto eq = homotopy_equivalent(tracked, img, seed, budget);
        bool ok = eq.verdict == Verdict::Yes;
        checks.push_back({"circle " + name, ok,
                          ok ? "preimage under the iterated tilt equals X (x) " + name
                             : "tilt gives " + describe(eq.min_x) + ", twist gives " + describe(eq.min_y) + " (" +
                                   eq.reason + ")"});
        auto err = iterated_approximation_check(t, img, v, m, seed);
        checks.push_back({"approximation " + name, err.empty(),
                          err.empty() ? "Hom(P, X (x) " + name + ") = Omega^" + std::to_string(m) + " Hom(P, " + name + ")[" +
                                            std::to_string(m) + "]"
                                      : "X (x) " + name + ": " + err});
    }
    return rep;
}

}  // namespace ptw
