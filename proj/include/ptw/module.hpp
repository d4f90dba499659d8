#pragma once

// Finite-dimensional left modules given by one action matrix per basis
// element of the owner algebra.  Bimodules are modules over enveloping().

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ptw/algebra.hpp"

namespace ptw {

struct ModuleError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

template <class F>
struct Module {
    using V = typename F::value_type;
    AlgebraPtr<F> alg;
    std::size_t dim = 0;
    std::vector<Matrix<F>> act;  // act[b] = rho(b_b), dim x dim

    const F& field() const { return alg->field; }

    Matrix<F> rho(const std::vector<V>& a) const {
        Matrix<F> m(field(), dim, dim);
        for (std::size_t b = 0; b < alg->dim(); ++b)
            if (!field().is_zero(a[b])) m.add_scaled(act[b], a[b]);
        return m;
    }

    /// First violated module axiom, or empty.
    std::string check() const {
        const auto& A = *alg;
        if (act.size() != A.dim()) return "wrong number of action matrices";
        for (const auto& m : act)
            if (m.rows() != dim || m.cols() != dim) return "action matrix has wrong shape";
        if (rho(A.unit()) != Matrix<F>::identity(field(), dim)) return "unit does not act as identity";
        for (std::size_t i = 0; i < A.dim(); ++i)
            for (std::size_t j = 0; j < A.dim(); ++j) {
                Matrix<F> lhs = act[i] * act[j];
                Matrix<F> rhs(field(), dim, dim);
                for (const auto& [k, v] : A.table[i][j]) rhs.add_scaled(act[k], v);
                if (lhs != rhs) return "action not multiplicative at (" + A.labels[i] + "," + A.labels[j] + ")";
            }
        return {};
    }
};

template <class F>
struct ModuleMap {
    Matrix<F> mat;  // target.dim x source.dim
};

template <class F>
Module<F> zero_module(AlgebraPtr<F> a) {
    Module<F> m;
    m.alg = a;
    m.act.assign(a->dim(), Matrix<F>(a->field, 0, 0));
    return m;
}

template <class F>
Module<F> regular_module(AlgebraPtr<F> a) {
    Module<F> m;
    m.alg = a;
    m.dim = a->dim();
    for (std::size_t b = 0; b < a->dim(); ++b) m.act.push_back(a->lmul_matrix(a->basis_vec(b)));
    return m;
}

/// A e_v with basis proj_basis[v].
template <class F>
Module<F> projective(AlgebraPtr<F> a, std::size_t v) {
    const auto& A = *a;
    Module<F> m;
    m.alg = a;
    const auto& pb = A.proj_basis.at(v);
    m.dim = pb.size();
    for (std::size_t b = 0; b < A.dim(); ++b) {
        Matrix<F> r(A.field, m.dim, m.dim);
        for (std::size_t c = 0; c < pb.size(); ++c)
            for (const auto& [k, x] : A.table[b][pb[c]]) r(A.proj_pos[k], c) = A.field.add(r(A.proj_pos[k], c), x);
        m.act.push_back(std::move(r));
    }
    return m;
}

template <class F>
Module<F> direct_sum(const std::vector<Module<F>>& ms) {
    if (ms.empty()) throw ModuleError("direct_sum of nothing");
    Module<F> s;
    s.alg = ms[0].alg;
    for (const auto& m : ms) s.dim += m.dim;
    for (std::size_t b = 0; b < s.alg->dim(); ++b) {
        Matrix<F> r(s.field(), s.dim, s.dim);
        std::size_t off = 0;
        for (const auto& m : ms) {
            r.set_block(off, off, m.act[b]);
            off += m.dim;
        }
        s.act.push_back(std::move(r));
    }
    return s;
}

/// Restriction of scalars along an algebra morphism g: B -> A (columns are
/// images of B's basis), giving the B-module structure b.m = g(b).m.
template <class F>
Module<F> restrict_along(const Module<F>& m, AlgebraPtr<F> b, const Matrix<F>& g) {
    Module<F> r;
    r.alg = b;
    r.dim = m.dim;
    for (std::size_t i = 0; i < b->dim(); ++i) r.act.push_back(m.rho(g.col(i)));
    return r;
}

// ---------------------------------------------------------------------------
// Subspaces, submodules, quotients

/// Module structure on an invariant subspace spanned by the (independent)
/// columns of `basis`.
template <class F>
Module<F> submodule(const Module<F>& m, const Matrix<F>& basis) {
    Module<F> s;
    s.alg = m.alg;
    s.dim = basis.cols();
    for (std::size_t b = 0; b < m.alg->dim(); ++b) {
        if (s.dim == 0) {
            s.act.push_back(Matrix<F>(m.field(), 0, 0));
            continue;
        }
        auto x = try_solve(basis, m.act[b] * basis);
        if (!x) throw ModuleError("subspace is not invariant under " + m.alg->labels[b]);
        s.act.push_back(std::move(*x));
    }
    return s;
}

/// Subquotient Z/B for invariant subspaces B <= Z (columns need not be
/// independent).  Keeps the chosen complement columns and a projection.
template <class F>
struct Subquotient {
    Module<F> module;
    Matrix<F> lifts;  // ambient vectors representing the quotient basis
    Matrix<F> sub;    // basis of B
    // coordinates in the quotient of an ambient vector lying in Z
    std::vector<typename F::value_type> coords(const std::vector<typename F::value_type>& z) const {
        Matrix<F> all = Matrix<F>::hstack(sub, lifts);
        auto x = try_solve(all, Matrix<F>::column(module.field(), z));
        if (!x) throw ModuleError("vector does not lie in the cycle space");
        std::vector<typename F::value_type> c(lifts.cols());
        for (std::size_t k = 0; k < lifts.cols(); ++k) c[k] = (*x)(sub.cols() + k, 0);
        return c;
    }
};

template <class F>
Subquotient<F> subquotient(const Module<F>& m, const Matrix<F>& z, const Matrix<F>& bnd) {
    const F& f = m.field();
    Subquotient<F> q;
    q.sub = column_space(bnd.cols() ? bnd : Matrix<F>(f, m.dim, 0));
    SpanBuilder<F> span(f, m.dim);
    for (std::size_t c = 0; c < q.sub.cols(); ++c) span.add(q.sub.col(c));
    std::vector<std::vector<typename F::value_type>> lifts;
    for (std::size_t c = 0; c < z.cols(); ++c) {
        auto v = z.col(c);
        if (span.add(v)) lifts.push_back(v);
    }
    q.lifts = Matrix<F>::from_columns(f, m.dim, lifts);
    q.module.alg = m.alg;
    q.module.dim = lifts.size();
    Matrix<F> all = Matrix<F>::hstack(q.sub, q.lifts);
    for (std::size_t b = 0; b < m.alg->dim(); ++b) {
        Matrix<F> r(f, q.module.dim, q.module.dim);
        if (q.module.dim) {
            auto x = try_solve(all, m.act[b] * q.lifts);
            if (!x) throw ModuleError("cycle space is not invariant");
            r = x->block(q.sub.cols(), 0, q.module.dim, q.module.dim);
        }
        q.module.act.push_back(std::move(r));
    }
    return q;
}

/// Span of rad(A).M (the arrows generate rad(A) as a right ideal).
template <class F>
Matrix<F> radical_subspace(const Module<F>& m) {
    Matrix<F> acc(m.field(), m.dim, 0);
    for (auto a : m.alg->arrows) acc = Matrix<F>::hstack(acc, m.act[a]);
    return column_space(acc);
}

/// Radical layers: dims of e_v (rad^k M / rad^{k+1} M) per vertex, k = 0, 1, ...
template <class F>
std::vector<std::vector<std::size_t>> radical_layers(const Module<F>& m) {
    const F& f = m.field();
    const auto& A = *m.alg;
    std::vector<std::vector<std::size_t>> out;
    Matrix<F> cur = Matrix<F>::identity(f, m.dim);
    while (cur.cols() > 0) {
        Matrix<F> next(f, m.dim, 0);
        for (auto a : A.arrows) next = Matrix<F>::hstack(next, m.act[a] * cur);
        next = column_space(next);
        std::vector<std::size_t> layer(A.nverts());
        for (std::size_t v = 0; v < A.nverts(); ++v) {
            Matrix<F> ev = m.act[A.idem[v]];
            layer[v] = rank(ev * cur) - rank(ev * next);
        }
        out.push_back(layer);
        if (next.cols() == cur.cols()) break;
        cur = next;
    }
    return out;
}

/// Top generators: vectors x in e_v M whose images generate M / rad M, one
/// per simple summand.  Returned as (vertex, vector) pairs in vertex order.
template <class F>
std::vector<std::pair<std::size_t, std::vector<typename F::value_type>>> top_lifts(const Module<F>& m) {
    const F& f = m.field();
    const auto& A = *m.alg;
    Matrix<F> rad = radical_subspace(m);
    std::vector<std::pair<std::size_t, std::vector<typename F::value_type>>> out;
    SpanBuilder<F> span(f, m.dim);
    for (std::size_t c = 0; c < rad.cols(); ++c) span.add(rad.col(c));
    for (std::size_t v = 0; v < A.nverts(); ++v) {
        Matrix<F> ev = column_space(m.act[A.idem[v]]);
        for (std::size_t c = 0; c < ev.cols(); ++c) {
            auto x = ev.col(c);
            if (!span.add(x)) continue;
            out.push_back({v, x});
            // A x modulo rad M is the simple top summand generated by x; for
            // non-basic algebras it reaches isomorphic vertices too
            for (std::size_t b = 0; b < A.dim(); ++b) span.add(m.act[b].apply(x));
        }
    }
    return out;
}

template <class F>
Module<F> simple(AlgebraPtr<F> a, std::size_t v) {
    Module<F> p = projective(a, v);
    auto q = subquotient(p, Matrix<F>::identity(a->field, p.dim), radical_subspace(p));
    return q.module;
}

// ---------------------------------------------------------------------------
// Covers and syzygies

template <class F>
struct Cover {
    std::vector<std::size_t> vertices;  // summands A e_v of the cover, in order
    Module<F> module;                    // the projective module itself
    Matrix<F> epi;                       // M.dim x cover.dim
    std::vector<std::vector<typename F::value_type>> generators;  // images of the e_v
};

template <class F>
Cover<F> projective_cover(const Module<F>& m) {
    const auto& A = *m.alg;
    const F& f = A.field;
    Cover<F> c;
    auto tops = top_lifts(m);
    std::vector<Module<F>> parts;
    std::vector<std::vector<typename F::value_type>> cols;
    for (const auto& [v, x] : tops) {
        c.vertices.push_back(v);
        c.generators.push_back(x);
        parts.push_back(projective(m.alg, v));
        for (auto b : A.proj_basis[v]) cols.push_back(m.act[b].apply(x));
    }
    c.module = parts.empty() ? zero_module(m.alg) : direct_sum(parts);
    c.epi = Matrix<F>::from_columns(f, m.dim, cols);
    return c;
}

template <class F>
struct Syzygy {
    Cover<F> cover;
    Matrix<F> inclusion;  // cover.dim x kernel.dim
    Module<F> kernel;
};

template <class F>
Syzygy<F> syzygy_step(const Module<F>& m) {
    Syzygy<F> s;
    s.cover = projective_cover(m);
    s.inclusion = kernel_basis(s.cover.epi);
    s.kernel = submodule(s.cover.module, s.inclusion);
    return s;
}

template <class F>
Module<F> syzygy(const Module<F>& m, std::size_t n) {
    Module<F> cur = m;
    for (std::size_t k = 0; k < n; ++k) cur = syzygy_step(cur).kernel;
    return cur;
}

// ---------------------------------------------------------------------------
// Hom spaces

/// Basis of Hom_A(M, N).  Homs are determined by the images of the top
/// generators of M, subject to the relations given by ker(cover of M).
template <class F>
std::vector<Matrix<F>> hom_space(const Module<F>& m, const Module<F>& n) {
    using V = typename F::value_type;
    const auto& A = *m.alg;
    const F& f = A.field;
    if (m.alg.get() != n.alg.get() && m.alg->dim() != n.alg->dim())
        throw ModuleError("hom_space: modules over different algebras");
    if (m.dim == 0 || n.dim == 0) return {};
    Syzygy<F> syz = syzygy_step(m);
    const auto& verts = syz.cover.vertices;
    // unknowns: for generator t at vertex v, coordinates in a basis of e_v N
    std::vector<Matrix<F>> evn;
    std::vector<std::size_t> off;
    std::size_t nunk = 0;
    for (auto v : verts) {
        evn.push_back(column_space(n.act[A.idem[v]]));
        off.push_back(nunk);
        nunk += evn.back().cols();
    }
    if (nunk == 0) return {};
    // a cover element sum_t sum_{b in proj_basis(v_t)} c_{t,b} b.e_{v_t} maps to
    // sum c_{t,b} rho_N(b) n_t; impose vanishing on the kernel basis.
    Matrix<F> sys(f, 0, nunk);
    for (std::size_t kc = 0; kc < syz.inclusion.cols(); ++kc) {
        Matrix<F> rows(f, n.dim, nunk);
        std::size_t pos = 0;
        for (std::size_t t = 0; t < verts.size(); ++t) {
            for (auto b : A.proj_basis[verts[t]]) {
                const V& c = syz.inclusion(pos++, kc);
                if (f.is_zero(c)) continue;
                Matrix<F> blk = n.act[b] * evn[t];
                for (std::size_t i = 0; i < n.dim; ++i)
                    for (std::size_t j = 0; j < blk.cols(); ++j)
                        rows(i, off[t] + j) = f.add(rows(i, off[t] + j), f.mul(c, blk(i, j)));
            }
        }
        sys.append_rows(rows);
    }
    Matrix<F> sol = kernel_basis(sys);
    // express each solution as a matrix M -> N: m = epi(y), y in cover
    // choose a right inverse of epi on basis vectors of M
    Matrix<F> sect = solve(syz.cover.epi, Matrix<F>::identity(f, m.dim));  // cover.dim x m.dim
    std::vector<Matrix<F>> out;
    for (std::size_t s = 0; s < sol.cols(); ++s) {
        // map from the cover: basis element b.e_{v_t} -> rho_N(b) n_t
        Matrix<F> fc(f, n.dim, syz.cover.module.dim);
        std::size_t pos = 0;
        for (std::size_t t = 0; t < verts.size(); ++t) {
            std::vector<V> nt(n.dim, f.zero());
            for (std::size_t j = 0; j < evn[t].cols(); ++j) axpy(f, nt, sol(off[t] + j, s), evn[t].col(j));
            for (auto b : A.proj_basis[verts[t]]) fc.set_col(pos++, n.act[b].apply(nt));
        }
        out.push_back(fc * sect);
    }
    return out;
}

template <class F>
bool is_module_map(const Module<F>& m, const Module<F>& n, const Matrix<F>& h) {
    if (h.rows() != n.dim || h.cols() != m.dim) return false;
    for (std::size_t b = 0; b < m.alg->dim(); ++b)
        if (n.act[b] * h != h * m.act[b]) return false;
    return true;
}

enum class Verdict { Yes, No, Undetermined };

inline const char* verdict_name(Verdict v) {
    switch (v) {
        case Verdict::Yes: return "YES";
        case Verdict::No: return "NO";
        default: return "UNDETERMINED";
    }
}

template <class F>
struct IsoResult {
    Verdict verdict = Verdict::Undetermined;
    std::optional<Matrix<F>> witness;
    std::string obstruction;
};

/// Search a finite set of candidate maps (given as a basis) for one passing
/// `accept`: basis elements, pairwise sums, exhaustive when the space has at
/// most `budget` points over a finite field, else seeded random combinations.
/// Returns the coefficient vector.
template <class F, class Accept>
std::optional<std::vector<typename F::value_type>> search_combination(const F& f, std::size_t n, std::uint64_t seed,
                                                                      std::size_t budget, bool& exhausted,
                                                                      Accept accept) {
    using V = typename F::value_type;
    exhausted = false;
    if (n == 0) {
        exhausted = true;
        return std::nullopt;
    }
    for (std::size_t t = 0; t < n; ++t) {
        std::vector<V> c(n, f.zero());
        c[t] = f.one();
        if (accept(c)) return c;
    }
    for (std::size_t s = 0; s < n; ++s)
        for (std::size_t t = s + 1; t < n; ++t) {
            std::vector<V> c(n, f.zero());
            c[s] = f.one();
            c[t] = f.one();
            if (accept(c)) return c;
        }
    std::uint64_t q = f.size();
    if (q != 0) {
        std::uint64_t total = 1;
        bool small = true;
        for (std::size_t t = 0; t < n; ++t) {
            total *= q;
            if (total > budget) { small = false; break; }
        }
        if (small) {
            for (std::uint64_t code = 1; code < total; ++code) {
                std::vector<V> c(n);
                std::uint64_t x = code;
                for (std::size_t t = 0; t < n; ++t) { c[t] = f.element(x % q); x /= q; }
                if (accept(c)) return c;
            }
            exhausted = true;
            return std::nullopt;
        }
    }
    Rng rng(seed);
    for (std::size_t k = 0; k < budget; ++k) {
        std::vector<V> c(n);
        for (auto& x : c) x = f.random(rng);
        if (accept(c)) return c;
    }
    return std::nullopt;
}

template <class F>
IsoResult<F> is_isomorphic(const Module<F>& m, const Module<F>& n, std::uint64_t seed = 1, std::size_t budget = 2000) {
    const F& f = m.field();
    IsoResult<F> r;
    if (m.dim != n.dim) {
        r.verdict = Verdict::No;
        r.obstruction = "dimensions differ (" + std::to_string(m.dim) + " vs " + std::to_string(n.dim) + ")";
        return r;
    }
    if (m.dim == 0) {
        r.verdict = Verdict::Yes;
        r.witness = Matrix<F>(f, 0, 0);
        return r;
    }
    if (radical_layers(m) != radical_layers(n)) {
        r.verdict = Verdict::No;
        r.obstruction = "radical layers differ";
        return r;
    }
    auto hom = hom_space(m, n);
    bool exhausted = false;
    auto c = search_combination(f, hom.size(), seed, budget, exhausted, [&](const auto& coef) {
        Matrix<F> h(f, n.dim, m.dim);
        for (std::size_t t = 0; t < hom.size(); ++t)
            if (!f.is_zero(coef[t])) h.add_scaled(hom[t], coef[t]);
        return rank(h) == m.dim;
    });
    if (c) {
        Matrix<F> h(f, n.dim, m.dim);
        for (std::size_t t = 0; t < hom.size(); ++t)
            if (!f.is_zero((*c)[t])) h.add_scaled(hom[t], (*c)[t]);
        r.verdict = Verdict::Yes;
        r.witness = h;
        return r;
    }
    if (exhausted) {
        r.verdict = Verdict::No;
        r.obstruction = "exhaustive search of Hom found no invertible map";
        return r;
    }
    r.verdict = Verdict::Undetermined;
    r.obstruction = "no invertible map found within budget";
    return r;
}

/// True iff Hom(P_j, K) = e_j K vanishes for all j in J.
template <class F>
bool perp_test(const Module<F>& k, const std::vector<std::size_t>& J) {
    for (auto j : J)
        if (rank(k.act[k.alg->idem[j]]) != 0) return false;
    return true;
}

// ---------------------------------------------------------------------------
// Tensor products

/// M (x)_A N where M is a module over B (x) A^op (so a B-A-bimodule; take B
/// = k, the one-vertex algebra, for a plain right module) and N a left
/// A-module.  The result is a left B-module.
template <class F>
Subquotient<F> tensor_over(const Module<F>& m, const Algebra<F>& b, const Module<F>& n) {
    const F& f = n.field();
    const auto& A = *n.alg;
    const std::size_t da = A.dim(), dm = m.dim, dn = n.dim;
    if (m.alg->dim() != b.dim() * da) throw ModuleError("tensor_over: bimodule owner has the wrong dimension");
    // ambient M (x)_k N with index i*dn + j, as a B-module via rho_M (x) id
    Module<F> amb;
    amb.alg = std::make_shared<const Algebra<F>>(b);
    amb.dim = dm * dn;
    auto kron_left = [&](const Matrix<F>& x) {
        Matrix<F> r(f, dm * dn, dm * dn);
        for (std::size_t i = 0; i < dm; ++i)
            for (std::size_t i2 = 0; i2 < dm; ++i2) {
                if (f.is_zero(x(i, i2))) continue;
                for (std::size_t j = 0; j < dn; ++j) r(i * dn + j, i2 * dn + j) = x(i, i2);
            }
        return r;
    };
    auto kron_right = [&](const Matrix<F>& y) {
        Matrix<F> r(f, dm * dn, dm * dn);
        for (std::size_t i = 0; i < dm; ++i)
            for (std::size_t j = 0; j < dn; ++j)
                for (std::size_t j2 = 0; j2 < dn; ++j2)
                    if (!f.is_zero(y(j, j2))) r(i * dn + j, i * dn + j2) = y(j, j2);
        return r;
    };
    for (std::size_t x = 0; x < b.dim(); ++x) {
        std::vector<typename F::value_type> coord(m.alg->dim(), f.zero());
        for (auto e : A.idem) coord[x * da + e] = f.one();
        amb.act.push_back(kron_left(m.rho(coord)));
    }
    // relations m.a (x) n - m (x) a.n for generators a of A
    Matrix<F> rel(f, dm * dn, 0);
    for (auto a : A.generators) {
        std::vector<typename F::value_type> coord(m.alg->dim(), f.zero());
        for (auto e : b.idem) coord[e * da + a] = f.one();
        Matrix<F> ra = m.rho(coord);
        rel = Matrix<F>::hstack(rel, kron_left(ra) - kron_right(n.act[a]));
    }
    return subquotient(amb, Matrix<F>::identity(f, dm * dn), rel);
}

/// The one-vertex algebra k.
template <class F>
Algebra<F> ground_field_algebra(const F& f) {
    Algebra<F> k;
    k.field = f;
    k.name = "k";
    k.labels = {"1"};
    k.table = {{{{0u, f.one()}}}};
    k.idem = {0};
    k.lv = {0};
    k.rv = {0};
    k.in_rad = {0};
    k.trace = std::vector<typename F::value_type>{f.one()};
    k.finalize();
    return k;
}

}  // namespace ptw

namespace ptw {

/// Smallest submodule containing the given vectors (columns of the result
/// form a basis).
template <class F>
Matrix<F> generated_subspace(const Module<F>& m, const std::vector<std::vector<typename F::value_type>>& gens) {
    const F& f = m.field();
    SpanBuilder<F> span(f, m.dim);
    std::vector<std::vector<typename F::value_type>> basis, queue;
    for (const auto& g : gens)
        if (span.add(g)) { basis.push_back(g); queue.push_back(g); }
    while (!queue.empty()) {
        auto v = queue.back();
        queue.pop_back();
        for (auto a : m.alg->generators) {
            auto w = m.act[a].apply(v);
            if (span.add(w)) { basis.push_back(w); queue.push_back(w); }
        }
    }
    return Matrix<F>::from_columns(f, m.dim, basis);
}

template <class F>
Module<F> quotient_module(const Module<F>& m, const Matrix<F>& sub) {
    return subquotient(m, Matrix<F>::identity(m.field(), m.dim), sub).module;
}

}  // namespace ptw
