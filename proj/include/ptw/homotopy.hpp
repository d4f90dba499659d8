#pragma once

// Hom complexes between block complexes, chain maps modulo homotopy and
// homotopy-equivalence testing.  Maps out of a cyclic block are determined by
// the image of its generator: e_v N for Proj(v), the diagonal elements
// {n : a n = n a} for Diag.

#include "ptw/complex.hpp"

namespace ptw {

template <class F>
struct HomGroup {
    int src_deg = 0;           // degree j of the source block in X
    std::size_t block = 0;     // block index in X^j
    int tgt_deg = 0;           // j + k
    std::size_t first = 0;     // index of the first parameter
    Matrix<F> images;          // dim Y^{tgt} x nparams: generator images
    Matrix<F> coords;          // left inverse of images
    std::vector<Matrix<F>> expanded;  // per parameter: dim Y^{tgt} x dim(block)
};

template <class F>
struct HomSpace {
    int k = 0;
    std::size_t dim = 0;
    std::vector<HomGroup<F>> groups;
};

namespace detail {

template <class F>
std::vector<std::vector<typename F::value_type>> block_hom_images(const Complex<F>& X, const Block<F>& b,
                                                                  const Complex<F>& Y, int tdeg) {
    using V = typename F::value_type;
    const F& f = X.field();
    const std::size_t n = Y.dim(tdeg);
    std::vector<std::vector<V>> out;
    if (n == 0) return out;
    auto off = Y.offsets(tdeg);
    const auto& bl = Y.blocks(tdeg);
    if (b.kind == BlockKind::Proj) {
        // e_v Y^t
        std::vector<V> e(n, f.zero());
        for (std::size_t k = 0; k < bl.size(); ++k) {
            if (bl[k].kind == BlockKind::Gen) {
                Matrix<F> ev(f, Y.block_dim(bl[k]), Y.block_dim(bl[k]));
                ev = bl[k].mod->act[Y.ring->idem[b.v]];
                Matrix<F> cs = column_space(ev);
                for (std::size_t c = 0; c < cs.cols(); ++c) {
                    std::vector<V> v(n, f.zero());
                    for (std::size_t i = 0; i < cs.rows(); ++i) v[off[k] + i] = cs(i, c);
                    out.push_back(v);
                }
                continue;
            }
            for (std::size_t c = off[k]; c < off[k + 1]; ++c) {
                e[c] = f.one();
                std::vector<V> y(n, f.zero());
                block_act_add(Y, bl[k], Y.ring->idem[b.v], e, off[k], y, off[k]);
                e[c] = f.zero();
                if (!is_zero_vec(f, y) && y[c] == f.one()) {
                    bool unit = true;
                    for (std::size_t i = 0; i < n; ++i)
                        if (i != c && !f.is_zero(y[i])) unit = false;
                    if (unit) {
                        std::vector<V> v(n, f.zero());
                        v[c] = f.one();
                        out.push_back(v);
                        continue;
                    }
                }
                if (!is_zero_vec(f, y)) throw ComplexError("hom: idempotent does not act diagonally on a standard block");
            }
        }
        return out;
    }
    if (b.kind != BlockKind::Diag) throw ComplexError("hom: general source blocks are unsupported");
    // {n in sum_u e_u Y e_u : a n = n a for the arrows a}
    const auto& A = *X.base;
    std::vector<std::vector<V>> cand;
    for (std::size_t u = 0; u < A.nverts(); ++u) {
        // e_u . Y . e_u via left then right action
        Matrix<F> m(f, n, n);
        std::vector<V> e(n, f.zero());
        for (std::size_t c = 0; c < n; ++c) {
            e[c] = f.one();
            std::vector<V> y1(n, f.zero()), y2(n, f.zero());
            for (std::size_t k = 0; k < bl.size(); ++k) block_left_act_add(Y, bl[k], A.idem[u], e, off[k], y1, off[k]);
            for (std::size_t k = 0; k < bl.size(); ++k) block_right_act_add(Y, bl[k], A.idem[u], y1, off[k], y2, off[k]);
            m.set_col(c, y2);
            e[c] = f.zero();
        }
        Matrix<F> cs = column_space(m);
        for (std::size_t c = 0; c < cs.cols(); ++c) cand.push_back(cs.col(c));
    }
    if (cand.empty()) return out;
    Matrix<F> sys(f, 0, cand.size());
    for (auto a : A.generators) {
        Matrix<F> rows(f, n, cand.size());
        for (std::size_t c = 0; c < cand.size(); ++c) {
            std::vector<V> l(n, f.zero()), r(n, f.zero());
            for (std::size_t k = 0; k < bl.size(); ++k) {
                block_left_act_add(Y, bl[k], a, cand[c], off[k], l, off[k]);
                block_right_act_add(Y, bl[k], a, cand[c], off[k], r, off[k]);
            }
            for (std::size_t i = 0; i < n; ++i) rows(i, c) = f.sub(l[i], r[i]);
        }
        sys.append_rows(rows);
    }
    Matrix<F> ker = kernel_basis(sys);
    for (std::size_t c = 0; c < ker.cols(); ++c) {
        std::vector<V> v(n, f.zero());
        for (std::size_t t = 0; t < cand.size(); ++t) axpy(f, v, ker(t, c), cand[t]);
        out.push_back(v);
    }
    return out;
}

/// Matrix of the module map out of block b determined by the generator image y.
template <class F>
Matrix<F> expand_from_generator(const Complex<F>& X, const Block<F>& b, const Complex<F>& Y, int tdeg,
                                const std::vector<typename F::value_type>& y) {
    const F& f = X.field();
    const std::size_t n = Y.dim(tdeg);
    Matrix<F> m(f, n, X.block_dim(b));
    auto off = Y.offsets(tdeg);
    const auto& bl = Y.blocks(tdeg);
    if (b.kind == BlockKind::Proj) {
        const auto& pb = X.ring->proj_basis[b.v];
        for (std::size_t c = 0; c < pb.size(); ++c) m.set_col(c, term_act(Y, tdeg, pb[c], y));
    } else {
        for (std::size_t a = 0; a < X.base->dim(); ++a) {
            std::vector<typename F::value_type> z(n, f.zero());
            for (std::size_t k = 0; k < bl.size(); ++k) block_left_act_add(Y, bl[k], a, y, off[k], z, off[k]);
            m.set_col(a, z);
        }
    }
    return m;
}

}  // namespace detail

template <class F>
HomSpace<F> hom_space_degree(const Complex<F>& X, const Complex<F>& Y, int k) {
    HomSpace<F> H;
    H.k = k;
    const F& f = X.field();
    for (int j = X.lo; j <= X.hi(); ++j) {
        if (!Y.has(j + k)) continue;
        const auto& bl = X.blocks(j);
        for (std::size_t b = 0; b < bl.size(); ++b) {
            auto imgs = detail::block_hom_images(X, bl[b], Y, j + k);
            if (imgs.empty()) continue;
            HomGroup<F> g;
            g.src_deg = j;
            g.block = b;
            g.tgt_deg = j + k;
            g.first = H.dim;
            g.images = Matrix<F>::from_columns(f, Y.dim(j + k), imgs);
            g.coords = left_inverse(g.images);
            for (const auto& y : imgs) g.expanded.push_back(detail::expand_from_generator(X, bl[b], Y, j + k, y));
            H.dim += imgs.size();
            H.groups.push_back(std::move(g));
        }
    }
    return H;
}

/// Matrix of D(f) = d_Y f - (-1)^k f d_X from Hom^k to Hom^{k+1}.
template <class F>
Matrix<F> hom_differential(const Complex<F>& X, const Complex<F>& Y, const HomSpace<F>& Hk, const HomSpace<F>& Hk1) {
    using V = typename F::value_type;
    const F& f = X.field();
    Matrix<F> D(f, Hk1.dim, Hk.dim);
    const V sgn = (Hk.k % 2 == 0) ? f.neg(f.one()) : f.one();  // -(-1)^k
    auto find = [&](const HomSpace<F>& H, int j, std::size_t b) -> const HomGroup<F>* {
        for (const auto& g : H.groups)
            if (g.src_deg == j && g.block == b) return &g;
        return nullptr;
    };
    for (const auto& g1 : Hk1.groups) {
        // image of the generator of block (j, b) under D(f)
        const int j = g1.src_deg;
        const auto& blk = X.blocks(j)[g1.block];
        auto gen = block_generator(X, blk);
        std::vector<V> genfull(X.dim(j), f.zero());
        auto xo = X.offsets(j);
        for (std::size_t i = 0; i < gen.size(); ++i) genfull[xo[g1.block] + i] = gen[i];
        std::vector<V> dxg = X.diff(j).apply(genfull);  // in X^{j+1}
        // d_Y f^j (g)
        if (const HomGroup<F>* g0 = find(Hk, j, g1.block)) {
            Matrix<F> dy = Y.diff(g0->tgt_deg);
            for (std::size_t p = 0; p < g0->images.cols(); ++p) {
                auto y = dy.apply(g0->images.col(p));
                auto c = g1.coords.apply(y);
                for (std::size_t q = 0; q < c.size(); ++q)
                    if (!f.is_zero(c[q])) D(g1.first + q, g0->first + p) = f.add(D(g1.first + q, g0->first + p), c[q]);
            }
        }
        // -(-1)^k f^{j+1}(d_X g)
        auto xo1 = X.offsets(j + 1);
        for (std::size_t b2 = 0; b2 < X.blocks(j + 1).size(); ++b2) {
            const HomGroup<F>* g0 = find(Hk, j + 1, b2);
            if (!g0) continue;
            std::vector<V> part(dxg.begin() + static_cast<long>(xo1[b2]), dxg.begin() + static_cast<long>(xo1[b2 + 1]));
            if (is_zero_vec(f, part)) continue;
            for (std::size_t p = 0; p < g0->expanded.size(); ++p) {
                auto y = g0->expanded[p].apply(part);
                auto c = g1.coords.apply(y);
                for (std::size_t q = 0; q < c.size(); ++q)
                    if (!f.is_zero(c[q]))
                        D(g1.first + q, g0->first + p) = f.add(D(g1.first + q, g0->first + p), f.mul(sgn, c[q]));
            }
        }
    }
    return D;
}

/// Assemble the map given by parameter coordinates c in Hom^k as matrices
/// X^j -> Y^{j+k}, indexed by source degree.
template <class F>
ChainMap<F> assemble(const Complex<F>& X, const Complex<F>& Y, const HomSpace<F>& H,
                     const std::vector<typename F::value_type>& c) {
    const F& f = X.field();
    ChainMap<F> m;
    m.lo = X.lo;
    for (int j = X.lo; j <= X.hi(); ++j) m.f.push_back(Matrix<F>(f, Y.dim(j + H.k), X.dim(j)));
    for (const auto& g : H.groups) {
        auto& target = m.f[static_cast<std::size_t>(g.src_deg - X.lo)];
        auto xo = X.offsets(g.src_deg);
        for (std::size_t p = 0; p < g.expanded.size(); ++p) {
            const auto& cp = c[g.first + p];
            if (f.is_zero(cp)) continue;
            const auto& e = g.expanded[p];
            for (std::size_t r = 0; r < e.rows(); ++r)
                for (std::size_t q = 0; q < e.cols(); ++q)
                    if (!f.is_zero(e(r, q))) target(r, xo[g.block] + q) = f.add(target(r, xo[g.block] + q), f.mul(cp, e(r, q)));
        }
    }
    return m;
}

/// Chain maps X -> Y (degree 0) together with the homotopy-class structure.
template <class F>
struct ChainMapSpace {
    HomSpace<F> h0;
    Matrix<F> cycles;      // columns: basis of Z^0 in parameter coordinates
    Matrix<F> boundaries;  // columns spanning B^0 = image of D^{-1}
    Matrix<F> classes;     // columns: cycle combinations representing a basis of H^0
};

template <class F>
ChainMapSpace<F> chain_map_space(const Complex<F>& X, const Complex<F>& Y) {
    ChainMapSpace<F> s;
    const F& f = X.field();
    s.h0 = hom_space_degree(X, Y, 0);
    auto h1 = hom_space_degree(X, Y, 1);
    auto hm = hom_space_degree(X, Y, -1);
    Matrix<F> D0 = hom_differential(X, Y, s.h0, h1);
    s.cycles = kernel_basis(D0);
    s.boundaries = column_space(hom_differential(X, Y, hm, s.h0));
    SpanBuilder<F> span(f, s.h0.dim);
    for (std::size_t c = 0; c < s.boundaries.cols(); ++c) span.add(s.boundaries.col(c));
    std::vector<std::vector<typename F::value_type>> reps;
    for (std::size_t c = 0; c < s.cycles.cols(); ++c)
        if (span.add(s.cycles.col(c))) reps.push_back(s.cycles.col(c));
    s.classes = Matrix<F>::from_columns(f, s.h0.dim, reps);
    return s;
}

// ---------------------------------------------------------------------------
// Homotopy equivalence

template <class F>
struct EquivalenceResult {
    Verdict verdict = Verdict::Undetermined;
    std::optional<ChainMap<F>> witness;  // between the minimised complexes
    Complex<F> min_x, min_y;
    std::string reason;
};

/// Search for an isomorphism of complexes among the chain maps X -> Y.
template <class F>
std::optional<ChainMap<F>> find_chain_isomorphism(const Complex<F>& X, const Complex<F>& Y, std::uint64_t seed,
                                                  std::size_t budget, bool& exhausted) {
    const F& f = X.field();
    exhausted = false;
    if (X.lo != Y.lo || X.hi() != Y.hi()) return std::nullopt;
    for (int i = X.lo; i <= X.hi(); ++i)
        if (X.dim(i) != Y.dim(i)) return std::nullopt;
    if (X.is_zero()) return identity_map(X);
    auto s = chain_map_space(X, Y);
    const std::size_t m = s.cycles.cols();
    std::optional<ChainMap<F>> found;
    auto to_map = [&](const std::vector<typename F::value_type>& c) {
        std::vector<typename F::value_type> params(s.h0.dim, f.zero());
        for (std::size_t t = 0; t < m; ++t) axpy(f, params, c[t], s.cycles.col(t));
        return assemble(X, Y, s.h0, params);
    };
    auto c = search_combination(f, m, seed, budget, exhausted, [&](const auto& coef) {
        auto cm = to_map(coef);
        for (int i = X.lo; i <= X.hi(); ++i) {
            const auto& fi = cm.f[static_cast<std::size_t>(i - X.lo)];
            if (rank(fi) != fi.rows()) return false;
        }
        return true;
    });
    if (c) found = to_map(*c);
    return found;
}

/// Minimise both complexes and look for an isomorphism between the results.
/// No is returned only with a certified obstruction: different homology
/// dimensions, or (for complexes of projectives, where minimal complexes are
/// unique up to isomorphism) different terms or an exhausted search.
template <class F>
EquivalenceResult<F> homotopy_equivalent(const Complex<F>& X, const Complex<F>& Y, std::uint64_t seed = 1,
                                         std::size_t budget = 400) {
    EquivalenceResult<F> r;
    r.min_x = minimize(X).complex;
    r.min_y = minimize(Y).complex;
    const auto& mx = r.min_x;
    const auto& my = r.min_y;
    auto hx = homology_dims(mx), hy = homology_dims(my);
    if (hx != hy) {
        r.verdict = Verdict::No;
        r.reason = "homology dimensions differ";
        return r;
    }
    bool proj = purely_projective(mx) && purely_projective(my);
    bool same_terms = mx.terms.size() == my.terms.size() && (mx.terms.empty() || mx.lo == my.lo);
    if (same_terms)
        for (int i = mx.lo; i <= mx.hi(); ++i)
            if (block_signature(mx, i) != block_signature(my, i)) same_terms = false;
    if (!same_terms) {
        r.verdict = proj ? Verdict::No : Verdict::Undetermined;
        r.reason = "minimal complexes have different terms: " + describe(mx) + " vs " + describe(my);
        return r;
    }
    bool exhausted = false;
    auto w = find_chain_isomorphism(mx, my, seed, budget, exhausted);
    if (w) {
        auto err = check_chain_map(mx, my, *w);
        if (!err.empty()) throw ComplexError("chain isomorphism witness failed verification: " + err);
        r.verdict = Verdict::Yes;
        r.witness = w;
        r.reason = "isomorphism of minimised complexes";
        return r;
    }
    r.verdict = (proj && exhausted) ? Verdict::No : Verdict::Undetermined;
    r.reason = exhausted ? "no chain isomorphism exists between the minimised complexes"
                         : "no chain isomorphism found within budget";
    return r;
}

// ---------------------------------------------------------------------------
// Comparison with the diagonal bimodule in degree 0

template <class F>
struct DiagonalCheck {
    bool ok = false;
    std::string method;  // "minimal" or "homology"
    std::string detail;
    Complex<F> minimal;
};

/// Is the bimodule complex X isomorphic to A[0]?  Passes when minimisation
/// leaves the single block A in degree 0, or else when the homology is
/// concentrated in degree 0 and H^0 has a central element h with a -> a h
/// bijective onto H^0 (an isomorphism in the derived category).
template <class F>
DiagonalCheck<F> check_is_diagonal(const Complex<F>& X, std::uint64_t seed = 1, std::size_t budget = 400) {
    using V = typename F::value_type;
    DiagonalCheck<F> r;
    r.minimal = minimize(X).complex;
    const auto& M = r.minimal;
    const F& f = X.field();
    if (M.terms.size() == 1 && M.lo == 0 && M.terms[0].size() == 1 && M.terms[0][0].kind == BlockKind::Diag) {
        r.ok = true;
        r.method = "minimal";
        r.detail = "minimal complex is A in degree 0";
        return r;
    }
    r.method = "homology";
    auto h = homology_dims(M);
    const auto& A = *X.base;
    if (h.size() != 1 || h.begin()->first != 0 || h.begin()->second != A.dim()) {
        r.detail = "homology not concentrated in degree 0 with dimension dim A; minimal complex " + describe(M);
        return r;
    }
    const std::size_t n = M.dim(0);
    Matrix<F> Z = kernel_basis(M.diff(0));
    Matrix<F> B = column_space(M.diff(-1));
    auto off = M.offsets(0);
    const auto& bl = M.blocks(0);
    auto left = [&](std::size_t a, const std::vector<V>& x) {
        std::vector<V> y(n, f.zero());
        for (std::size_t k = 0; k < bl.size(); ++k) block_left_act_add(M, bl[k], a, x, off[k], y, off[k]);
        return y;
    };
    auto right = [&](std::size_t a, const std::vector<V>& x) {
        std::vector<V> y(n, f.zero());
        for (std::size_t k = 0; k < bl.size(); ++k) block_right_act_add(M, bl[k], a, x, off[k], y, off[k]);
        return y;
    };
    // unknowns: z = Z c (cycle), plus per-generator boundary coefficients
    const std::size_t nz = Z.cols(), nb = B.cols();
    std::vector<std::size_t> gens = A.generators;
    Matrix<F> sys(f, 0, nz + gens.size() * nb);
    for (std::size_t gi = 0; gi < gens.size(); ++gi) {
        Matrix<F> rows(f, n, nz + gens.size() * nb);
        for (std::size_t c = 0; c < nz; ++c) {
            auto zc = Z.col(c);
            auto l = left(gens[gi], zc), rr = right(gens[gi], zc);
            for (std::size_t i = 0; i < n; ++i) rows(i, c) = f.sub(l[i], rr[i]);
        }
        for (std::size_t c = 0; c < nb; ++c)
            for (std::size_t i = 0; i < n; ++i) rows(i, nz + gi * nb + c) = f.neg(B(i, c));
        sys.append_rows(rows);
    }
    Matrix<F> sol = kernel_basis(sys);
    std::vector<std::vector<V>> central;
    for (std::size_t c = 0; c < sol.cols(); ++c) {
        std::vector<V> z(n, f.zero());
        for (std::size_t t = 0; t < nz; ++t) axpy(f, z, sol(t, c), Z.col(t));
        central.push_back(z);
    }
    bool exhausted = false;
    auto found = search_combination(f, central.size(), seed, budget, exhausted, [&](const auto& coef) {
        std::vector<V> z(n, f.zero());
        for (std::size_t t = 0; t < central.size(); ++t) axpy(f, z, coef[t], central[t]);
        Matrix<F> span = B;
        for (std::size_t a = 0; a < A.dim(); ++a) span = Matrix<F>::hstack(span, Matrix<F>::column(f, left(a, z)));
        return rank(span) == B.cols() + A.dim();
    });
    r.ok = found.has_value();
    r.detail = r.ok ? "H^0 = A generated by a central class; minimal complex " + describe(M)
                    : "no central generator of H^0 found; minimal complex " + describe(M);
    return r;
}

}  // namespace ptw
