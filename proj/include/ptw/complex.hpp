#pragma once

// Bounded cochain complexes whose terms are direct sums of blocks:
//   Proj(v)  the indecomposable projective R e_v of the ring R,
//   Diag     the algebra A as a module over R = A^en (the diagonal bimodule),
//   Gen      an arbitrary module given by action matrices.
// The k-basis of a term is the concatenation of its block bases and the
// differentials are dense k-matrices.

#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "ptw/module.hpp"

namespace ptw {

enum class BlockKind { Proj, Diag, Gen };

template <class F>
struct Block {
    BlockKind kind = BlockKind::Proj;
    std::size_t v = 0;                      // vertex of the ring, for Proj
    std::shared_ptr<const Module<F>> mod;   // for Gen

    static Block proj(std::size_t v) { return Block{BlockKind::Proj, v, nullptr}; }
    static Block diag() { return Block{BlockKind::Diag, 0, nullptr}; }
    static Block gen(std::shared_ptr<const Module<F>> m) { return Block{BlockKind::Gen, 0, std::move(m)}; }
};

struct ComplexError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

template <class F>
struct Complex {
    using V = typename F::value_type;
    AlgebraPtr<F> ring;
    AlgebraPtr<F> base;  // set iff ring is enveloping(*base); needed for Diag
    int lo = 0;
    std::vector<std::vector<Block<F>>> terms;
    std::vector<Matrix<F>> d;  // d[k]: terms[k] -> terms[k+1]

    const F& field() const { return ring->field; }
    int hi() const { return lo + static_cast<int>(terms.size()) - 1; }
    bool has(int deg) const { return !terms.empty() && deg >= lo && deg <= hi(); }

    std::size_t block_dim(const Block<F>& b) const {
        switch (b.kind) {
            case BlockKind::Proj: return ring->proj_basis[b.v].size();
            case BlockKind::Diag: return base->dim();
            default: return b.mod->dim;
        }
    }
    const std::vector<Block<F>>& blocks(int deg) const {
        static const std::vector<Block<F>> none;
        return has(deg) ? terms[static_cast<std::size_t>(deg - lo)] : none;
    }
    std::vector<std::size_t> offsets(int deg) const {
        std::vector<std::size_t> off{0};
        for (const auto& b : blocks(deg)) off.push_back(off.back() + block_dim(b));
        return off;
    }
    std::size_t dim(int deg) const { return offsets(deg).back(); }
    std::size_t total_dim() const {
        std::size_t s = 0;
        for (int i = lo; i <= hi(); ++i) s += dim(i);
        return s;
    }
    Matrix<F> diff(int deg) const {
        if (has(deg) && has(deg + 1)) return d[static_cast<std::size_t>(deg - lo)];
        return Matrix<F>(field(), dim(deg + 1), dim(deg));
    }
    bool is_zero() const { return total_dim() == 0; }
};

template <class F>
Complex<F> empty_complex(AlgebraPtr<F> ring, AlgebraPtr<F> base = nullptr) {
    Complex<F> c;
    c.ring = std::move(ring);
    c.base = std::move(base);
    return c;
}

/// A single term (a list of blocks) placed in degree `deg`.
template <class F>
Complex<F> stalk(AlgebraPtr<F> ring, AlgebraPtr<F> base, std::vector<Block<F>> blocks, int deg) {
    Complex<F> c = empty_complex(std::move(ring), std::move(base));
    c.lo = deg;
    c.terms.push_back(std::move(blocks));
    return c;
}

// ---------------------------------------------------------------------------
// Actions on terms

namespace detail {

template <class F>
void add_scaled_sparse(const F& f, std::vector<typename F::value_type>& out, std::size_t ooff, const Sparse<F>& s,
                       const typename F::value_type& c, const std::vector<std::size_t>& pos) {
    for (const auto& [k, v] : s) out[ooff + pos[k]] = f.add(out[ooff + pos[k]], f.mul(c, v));
}

}  // namespace detail

/// out[ooff..] += rho(r_g) x[xoff..] for one block, g a basis index of the ring.
template <class F>
void block_act_add(const Complex<F>& X, const Block<F>& b, std::size_t g, const std::vector<typename F::value_type>& x,
                   std::size_t xoff, std::vector<typename F::value_type>& out, std::size_t ooff) {
    const F& f = X.field();
    const auto& R = *X.ring;
    switch (b.kind) {
        case BlockKind::Proj: {
            const auto& pb = R.proj_basis[b.v];
            for (std::size_t c = 0; c < pb.size(); ++c) {
                if (f.is_zero(x[xoff + c])) continue;
                detail::add_scaled_sparse(f, out, ooff, R.table[g][pb[c]], x[xoff + c], R.proj_pos);
            }
            break;
        }
        case BlockKind::Diag: {
            const auto& A = *X.base;
            const std::size_t dA = A.dim();
            const std::size_t i = g / dA, j = g % dA;
            for (std::size_t m = 0; m < dA; ++m) {
                if (f.is_zero(x[xoff + m])) continue;
                for (const auto& [k1, v1] : A.table[i][m])
                    for (const auto& [k2, v2] : A.table[k1][j])
                        out[ooff + k2] = f.add(out[ooff + k2], f.mul(x[xoff + m], f.mul(v1, v2)));
            }
            break;
        }
        case BlockKind::Gen: {
            const auto& M = b.mod->act[g];
            for (std::size_t r = 0; r < M.rows(); ++r) {
                typename F::value_type acc = f.zero();
                for (std::size_t c = 0; c < M.cols(); ++c)
                    if (!f.is_zero(M(r, c)) && !f.is_zero(x[xoff + c])) acc = f.add(acc, f.mul(M(r, c), x[xoff + c]));
                out[ooff + r] = f.add(out[ooff + r], acc);
            }
            break;
        }
    }
}

/// rho(r_g) applied to a vector of the whole term in degree deg.
template <class F>
std::vector<typename F::value_type> term_act(const Complex<F>& X, int deg, std::size_t g,
                                             const std::vector<typename F::value_type>& x) {
    auto off = X.offsets(deg);
    std::vector<typename F::value_type> out(off.back(), X.field().zero());
    const auto& bl = X.blocks(deg);
    for (std::size_t k = 0; k < bl.size(); ++k) block_act_add(X, bl[k], g, x, off[k], out, off[k]);
    return out;
}

/// Left action of the base algebra element b_a on a block of a complex that is
/// either over A itself (base == nullptr, ring == A) or over A^en (acting by a|1).
template <class F>
void block_left_act_add(const Complex<F>& X, const Block<F>& b, std::size_t a,
                        const std::vector<typename F::value_type>& x, std::size_t xoff,
                        std::vector<typename F::value_type>& out, std::size_t ooff) {
    if (!X.base) return block_act_add(X, b, a, x, xoff, out, ooff);
    const F& f = X.field();
    const auto& A = *X.base;
    const auto& R = *X.ring;
    const std::size_t dA = A.dim();
    switch (b.kind) {
        case BlockKind::Proj: {
            const auto& pb = R.proj_basis[b.v];
            for (std::size_t c = 0; c < pb.size(); ++c) {
                if (f.is_zero(x[xoff + c])) continue;
                std::size_t i = pb[c] / dA, j = pb[c] % dA;
                for (const auto& [k, v] : A.table[a][i]) {
                    std::size_t pos = R.proj_pos[k * dA + j];
                    out[ooff + pos] = f.add(out[ooff + pos], f.mul(x[xoff + c], v));
                }
            }
            break;
        }
        case BlockKind::Diag: {
            for (std::size_t m = 0; m < dA; ++m) {
                if (f.is_zero(x[xoff + m])) continue;
                for (const auto& [k, v] : A.table[a][m]) out[ooff + k] = f.add(out[ooff + k], f.mul(x[xoff + m], v));
            }
            break;
        }
        case BlockKind::Gen: {
            for (auto e : A.idem) block_act_add(X, b, a * dA + e, x, xoff, out, ooff);
            break;
        }
    }
}

/// Right action of b_a on a block of a bimodule complex (acting by 1|a).
template <class F>
void block_right_act_add(const Complex<F>& X, const Block<F>& b, std::size_t a,
                         const std::vector<typename F::value_type>& x, std::size_t xoff,
                         std::vector<typename F::value_type>& out, std::size_t ooff) {
    const F& f = X.field();
    const auto& A = *X.base;
    const auto& R = *X.ring;
    const std::size_t dA = A.dim();
    switch (b.kind) {
        case BlockKind::Proj: {
            const auto& pb = R.proj_basis[b.v];
            for (std::size_t c = 0; c < pb.size(); ++c) {
                if (f.is_zero(x[xoff + c])) continue;
                std::size_t i = pb[c] / dA, j = pb[c] % dA;
                for (const auto& [k, v] : A.table[j][a]) {
                    std::size_t pos = R.proj_pos[i * dA + k];
                    out[ooff + pos] = f.add(out[ooff + pos], f.mul(x[xoff + c], v));
                }
            }
            break;
        }
        case BlockKind::Diag: {
            for (std::size_t m = 0; m < dA; ++m) {
                if (f.is_zero(x[xoff + m])) continue;
                for (const auto& [k, v] : A.table[m][a]) out[ooff + k] = f.add(out[ooff + k], f.mul(x[xoff + m], v));
            }
            break;
        }
        case BlockKind::Gen: {
            for (auto e : A.idem) block_act_add(X, b, e * dA + a, x, xoff, out, ooff);
            break;
        }
    }
}

/// Dense action matrix of r_g on a whole term.
template <class F>
Matrix<F> term_action_matrix(const Complex<F>& X, int deg, std::size_t g) {
    const std::size_t n = X.dim(deg);
    Matrix<F> m(X.field(), n, n);
    std::vector<typename F::value_type> e(n, X.field().zero());
    for (std::size_t c = 0; c < n; ++c) {
        e[c] = X.field().one();
        m.set_col(c, term_act(X, deg, g, e));
        e[c] = X.field().zero();
    }
    return m;
}

/// The term in degree deg as a Module over the ring.
template <class F>
Module<F> term_module(const Complex<F>& X, int deg) {
    Module<F> m;
    m.alg = X.ring;
    m.dim = X.dim(deg);
    for (std::size_t g = 0; g < X.ring->dim(); ++g) m.act.push_back(term_action_matrix(X, deg, g));
    return m;
}

/// Generator of a cyclic block (e_v for Proj, 1 for Diag), block-local.
template <class F>
std::vector<typename F::value_type> block_generator(const Complex<F>& X, const Block<F>& b) {
    const F& f = X.field();
    std::vector<typename F::value_type> g(X.block_dim(b), f.zero());
    if (b.kind == BlockKind::Proj) {
        g[X.ring->proj_pos[X.ring->idem[b.v]]] = f.one();
    } else if (b.kind == BlockKind::Diag) {
        for (auto e : X.base->idem) g[e] = f.one();
    } else {
        throw ComplexError("block_generator: general blocks are not cyclic");
    }
    return g;
}

// ---------------------------------------------------------------------------
// Checks

/// First failure among: shapes, d o d = 0, differentials commute with the
/// action of every ring generator.  Empty when fine.
template <class F>
std::string check_complex(const Complex<F>& X) {
    const F& f = X.field();
    if (X.d.size() + 1 != X.terms.size() && !(X.terms.empty() && X.d.empty())) return "wrong number of differentials";
    for (int i = X.lo; i < X.hi(); ++i) {
        const auto& di = X.d[static_cast<std::size_t>(i - X.lo)];
        if (di.rows() != X.dim(i + 1) || di.cols() != X.dim(i))
            return "differential in degree " + std::to_string(i) + " has the wrong shape";
    }
    for (int i = X.lo; i + 1 < X.hi(); ++i)
        if (!(X.diff(i + 1) * X.diff(i)).is_zero()) return "d o d != 0 at degree " + std::to_string(i);
    for (int i = X.lo; i < X.hi(); ++i) {
        Matrix<F> di = X.diff(i);
        const std::size_t n = X.dim(i);
        for (auto g : X.ring->generators) {
            std::vector<typename F::value_type> e(n, f.zero());
            for (std::size_t c = 0; c < n; ++c) {
                e[c] = f.one();
                auto lhs = term_act(X, i + 1, g, di.col(c));
                auto rhs = di.apply(term_act(X, i, g, e));
                e[c] = f.zero();
                if (lhs != rhs)
                    return "differential in degree " + std::to_string(i) + " is not a module map (generator " +
                           X.ring->labels[g] + ", column " + std::to_string(c) + ")";
            }
        }
    }
    return {};
}

template <class F>
struct ChainMap {
    int lo = 0;
    std::vector<Matrix<F>> f;  // f[k]: X^{lo+k} -> Y^{lo+k}
};

/// Component of a chain map in degree deg (zero matrix of the right shape
/// outside the stored range).
template <class F>
Matrix<F> chain_component(const ChainMap<F>& m, const Complex<F>& X, const Complex<F>& Y, int deg) {
    int k = deg - m.lo;
    if (k >= 0 && k < static_cast<int>(m.f.size())) return m.f[static_cast<std::size_t>(k)];
    return Matrix<F>(X.field(), Y.dim(deg), X.dim(deg));
}

template <class F>
std::string check_chain_map(const Complex<F>& X, const Complex<F>& Y, const ChainMap<F>& m) {
    int lo = std::min(X.lo, Y.lo) - 1, hi = std::max(X.hi(), Y.hi()) + 1;
    for (int i = lo; i <= hi; ++i) {
        auto fi = chain_component(m, X, Y, i);
        if (fi.rows() != Y.dim(i) || fi.cols() != X.dim(i)) return "component " + std::to_string(i) + " has the wrong shape";
        if (Y.diff(i) * fi != chain_component(m, X, Y, i + 1) * X.diff(i))
            return "does not commute with differentials at degree " + std::to_string(i);
    }
    return {};
}

// ---------------------------------------------------------------------------
// Constructions

/// X[n]: degree i holds X^{i+n}; differential multiplied by (-1)^n.
template <class F>
Complex<F> shift(const Complex<F>& X, int n) {
    Complex<F> s = X;
    s.lo = X.lo - n;
    if (n % 2 != 0)
        for (auto& m : s.d) m = -m;
    return s;
}

/// Drop zero terms at both ends.
template <class F>
Complex<F> trim(const Complex<F>& X) {
    Complex<F> c = X;
    while (!c.terms.empty() && c.dim(c.lo) == 0) {
        c.terms.erase(c.terms.begin());
        if (!c.d.empty()) c.d.erase(c.d.begin());
        ++c.lo;
    }
    while (!c.terms.empty() && c.dim(c.hi()) == 0) {
        c.terms.pop_back();
        if (!c.d.empty()) c.d.pop_back();
    }
    if (c.terms.empty()) {
        c.d.clear();
        c.lo = 0;
    }
    return c;
}

/// Extend the stored range to [lo, hi] with zero terms.
template <class F>
Complex<F> pad(const Complex<F>& X, int lo, int hi) {
    Complex<F> c = empty_complex(X.ring, X.base);
    c.lo = lo;
    for (int i = lo; i <= hi; ++i) c.terms.push_back(X.blocks(i));
    for (int i = lo; i < hi; ++i) c.d.push_back(X.diff(i));
    return c;
}

/// cone(f)^i = X^{i+1} (+) Y^i with d = [[-d_X, 0], [f, d_Y]].
template <class F>
Complex<F> cone(const Complex<F>& X, const Complex<F>& Y, const ChainMap<F>& m) {
    Complex<F> c = empty_complex(Y.ring, Y.base ? Y.base : X.base);
    if (X.terms.empty() && Y.terms.empty()) return c;
    int lo = std::min(X.terms.empty() ? Y.lo : X.lo - 1, Y.terms.empty() ? X.lo - 1 : Y.lo);
    int hi = std::max(X.terms.empty() ? Y.hi() : X.hi() - 1, Y.terms.empty() ? X.hi() - 1 : Y.hi());
    c.lo = lo;
    for (int i = lo; i <= hi; ++i) {
        auto t = X.blocks(i + 1);
        for (const auto& b : Y.blocks(i)) t.push_back(b);
        c.terms.push_back(t);
    }
    for (int i = lo; i < hi; ++i) {
        const std::size_t x1 = X.dim(i + 1), y0 = Y.dim(i), x2 = X.dim(i + 2), y1 = Y.dim(i + 1);
        Matrix<F> di(X.field(), x2 + y1, x1 + y0);
        di.set_block(0, 0, -X.diff(i + 1));
        di.set_block(x2, 0, chain_component(m, X, Y, i + 1));
        di.set_block(x2, x1, Y.diff(i));
        c.d.push_back(std::move(di));
    }
    return c;
}

template <class F>
Complex<F> direct_sum(const Complex<F>& X, const Complex<F>& Y) {
    if (X.terms.empty()) return Y;
    if (Y.terms.empty()) return X;
    int lo = std::min(X.lo, Y.lo), hi = std::max(X.hi(), Y.hi());
    Complex<F> c = empty_complex(X.ring, X.base ? X.base : Y.base);
    c.lo = lo;
    for (int i = lo; i <= hi; ++i) {
        auto t = X.blocks(i);
        for (const auto& b : Y.blocks(i)) t.push_back(b);
        c.terms.push_back(t);
    }
    for (int i = lo; i < hi; ++i) {
        Matrix<F> di(X.field(), X.dim(i + 1) + Y.dim(i + 1), X.dim(i) + Y.dim(i));
        di.set_block(0, 0, X.diff(i));
        di.set_block(X.dim(i + 1), X.dim(i), Y.diff(i));
        c.d.push_back(std::move(di));
    }
    return c;
}

template <class F>
ChainMap<F> compose(const Complex<F>& X, const Complex<F>& Y, const Complex<F>& Z, const ChainMap<F>& f,
                    const ChainMap<F>& g) {
    ChainMap<F> h;
    int lo = std::min({X.lo, Y.lo, Z.lo}), hi = std::max({X.hi(), Y.hi(), Z.hi()});
    h.lo = lo;
    for (int i = lo; i <= hi; ++i) h.f.push_back(chain_component(g, Y, Z, i) * chain_component(f, X, Y, i));
    return h;
}

template <class F>
ChainMap<F> identity_map(const Complex<F>& X) {
    ChainMap<F> m;
    m.lo = X.lo;
    for (int i = X.lo; i <= X.hi(); ++i) m.f.push_back(Matrix<F>::identity(X.field(), X.dim(i)));
    return m;
}

// ---------------------------------------------------------------------------
// Homology

template <class F>
std::size_t homology_dim(const Complex<F>& X, int deg) {
    std::size_t n = X.dim(deg);
    if (n == 0) return 0;
    return n - rank(X.diff(deg)) - rank(X.diff(deg - 1));
}

/// Homology dimensions over [lo, hi] of X.
template <class F>
std::map<int, std::size_t> homology_dims(const Complex<F>& X) {
    std::map<int, std::size_t> h;
    for (int i = X.lo; i <= X.hi(); ++i) {
        auto d = homology_dim(X, i);
        if (d) h[i] = d;
    }
    return h;
}

template <class F>
Subquotient<F> homology(const Complex<F>& X, int deg) {
    Module<F> t = term_module(X, deg);
    Matrix<F> z = kernel_basis(X.diff(deg));
    Matrix<F> b = X.diff(deg - 1);
    return subquotient(t, z, b);
}

/// Homology of the subcomplex e_v X of k-vector spaces (X over A, or e_v acting
/// on the left of a bimodule complex).  Vanishing in all degrees for v in J
/// means Hom(P_v, X[m]) = 0 for all m.
template <class F>
std::map<int, std::size_t> corner_homology_dims(const Complex<F>& X, std::size_t v) {
    const F& f = X.field();
    std::map<int, Matrix<F>> sel;
    for (int i = X.lo; i <= X.hi(); ++i) {
        const std::size_t n = X.dim(i);
        Matrix<F> ev(f, n, n);
        auto off = X.offsets(i);
        const auto& bl = X.blocks(i);
        std::size_t a = X.base ? X.base->idem[v] : X.ring->idem[v];
        std::vector<typename F::value_type> e(n, f.zero());
        for (std::size_t c = 0; c < n; ++c) {
            e[c] = f.one();
            std::vector<typename F::value_type> out(n, f.zero());
            for (std::size_t k = 0; k < bl.size(); ++k) block_left_act_add(X, bl[k], a, e, off[k], out, off[k]);
            ev.set_col(c, out);
            e[c] = f.zero();
        }
        sel[i] = column_space(ev);
    }
    std::map<int, std::size_t> h;
    for (int i = X.lo; i <= X.hi(); ++i) {
        const auto& Si = sel[i];
        if (Si.cols() == 0) continue;
        // d restricted to e_v X^i, written in the basis of e_v X^{i+1}
        auto rank_out = [&](int deg) -> std::size_t {
            if (!X.has(deg + 1) || sel[deg].cols() == 0) return 0;
            return rank(X.diff(deg) * sel[deg]);
        };
        std::size_t dimh = Si.cols() - rank_out(i) - rank_out(i - 1);
        if (dimh) h[i] = dimh;
    }
    return h;
}

// ---------------------------------------------------------------------------
// Minimisation

template <class F>
struct MinimizeResult {
    Complex<F> complex;
    std::size_t eliminations = 0;
    bool budget_exhausted = false;
};

/// Repeatedly cancel pairs of blocks joined by an isomorphism component of
/// the differential (Gaussian elimination): with d = [[u, b], [c, e]] and u
/// invertible the complex is homotopy equivalent to the one with the two
/// blocks removed and e replaced by e - c u^{-1} b.
template <class F>
MinimizeResult<F> minimize(const Complex<F>& X0, std::size_t budget = 1u << 20) {
    using V = typename F::value_type;
    Complex<F> X = trim(X0);
    MinimizeResult<F> res;
    const F& f = X.field();
    const std::size_t nt = X.terms.size();
    if (nt < 2) {
        res.complex = X;
        return res;
    }
    std::vector<std::vector<std::size_t>> off(nt);
    std::vector<std::vector<char>> alive(nt);
    for (std::size_t k = 0; k < nt; ++k) {
        off[k] = X.offsets(X.lo + static_cast<int>(k));
        alive[k].assign(X.terms[k].size(), 1);
    }
    auto& R = *X.ring;
    auto is_iso = [&](std::size_t k, std::size_t s, std::size_t t) -> bool {
        const auto& bs = X.terms[k][s];
        const auto& bt = X.terms[k + 1][t];
        const auto& dk = X.d[k];
        const std::size_t ds = X.block_dim(bs), dt = X.block_dim(bt);
        if (ds != dt || ds == 0) return false;
        if (bs.kind != bt.kind) return false;
        if (bs.kind == BlockKind::Proj) {
            if (R.vclass[bs.v] != R.vclass[bt.v]) return false;
            if (bs.v == bt.v) {
                std::size_t g = R.proj_pos[R.idem[bs.v]];
                return !f.is_zero(dk(off[k + 1][t] + g, off[k][s] + g));
            }
        }
        return rank(dk.block(off[k + 1][t], off[k][s], dt, ds)) == ds;
    };
    bool progress = true;
    while (progress) {
        progress = false;
        for (std::size_t k = 0; k + 1 < nt; ++k) {
            for (std::size_t s = 0; s < X.terms[k].size(); ++s) {
                if (!alive[k][s]) continue;
                for (std::size_t t = 0; t < X.terms[k + 1].size(); ++t) {
                    if (!alive[k + 1][t]) continue;
                    if (!is_iso(k, s, t)) continue;
                    if (res.eliminations >= budget) {
                        res.budget_exhausted = true;
                        goto done;
                    }
                    // eliminate block s of term k against block t of term k+1
                    Matrix<F>& dk = X.d[k];
                    const std::size_t n = X.block_dim(X.terms[k][s]);
                    const std::size_t s0 = off[k][s], t0 = off[k + 1][t];
                    Matrix<F> uinv = invert(dk.block(t0, s0, n, n));
                    // rows of term k+1 (other alive blocks) with nonzero c
                    std::vector<std::size_t> rows, cols;
                    for (std::size_t bt = 0; bt < X.terms[k + 1].size(); ++bt) {
                        if (!alive[k + 1][bt] || bt == t) continue;
                        for (std::size_t r = off[k + 1][bt]; r < off[k + 1][bt + 1]; ++r)
                            for (std::size_t c = s0; c < s0 + n; ++c)
                                if (!f.is_zero(dk(r, c))) { rows.push_back(r); break; }
                    }
                    for (std::size_t bs = 0; bs < X.terms[k].size(); ++bs) {
                        if (!alive[k][bs] || bs == s) continue;
                        for (std::size_t c = off[k][bs]; c < off[k][bs + 1]; ++c)
                            for (std::size_t r = t0; r < t0 + n; ++r)
                                if (!f.is_zero(dk(r, c))) { cols.push_back(c); break; }
                    }
                    if (!rows.empty() && !cols.empty()) {
                        // W = u^{-1} b  (n x |cols|)
                        Matrix<F> W(f, n, cols.size());
                        for (std::size_t a = 0; a < n; ++a)
                            for (std::size_t q = 0; q < cols.size(); ++q) {
                                V acc = f.zero();
                                for (std::size_t m = 0; m < n; ++m) {
                                    const V& um = uinv(a, m);
                                    const V& bm = dk(t0 + m, cols[q]);
                                    if (!f.is_zero(um) && !f.is_zero(bm)) acc = f.add(acc, f.mul(um, bm));
                                }
                                W(a, q) = acc;
                            }
                        for (auto r : rows)
                            for (std::size_t a = 0; a < n; ++a) {
                                const V cr = dk(r, s0 + a);
                                if (f.is_zero(cr)) continue;
                                for (std::size_t q = 0; q < cols.size(); ++q)
                                    if (!f.is_zero(W(a, q))) dk(r, cols[q]) = f.sub(dk(r, cols[q]), f.mul(cr, W(a, q)));
                            }
                    }
                    alive[k][s] = 0;
                    alive[k + 1][t] = 0;
                    ++res.eliminations;
                    progress = true;
                    break;
                }
            }
        }
    }
done:
    // compact
    Complex<F> out = empty_complex(X.ring, X.base);
    out.lo = X.lo;
    std::vector<std::vector<std::size_t>> keep(nt);
    for (std::size_t k = 0; k < nt; ++k) {
        std::vector<Block<F>> bl;
        for (std::size_t b = 0; b < X.terms[k].size(); ++b)
            if (alive[k][b]) {
                bl.push_back(X.terms[k][b]);
                for (std::size_t i = off[k][b]; i < off[k][b + 1]; ++i) keep[k].push_back(i);
            }
        out.terms.push_back(std::move(bl));
    }
    for (std::size_t k = 0; k + 1 < nt; ++k) out.d.push_back(X.d[k].select(keep[k + 1], keep[k]));
    res.complex = trim(out);
    return res;
}

/// Multiset description of the blocks in each degree, e.g. "P3 P3 A".
template <class F>
std::string block_signature(const Complex<F>& X, int deg) {
    std::vector<std::string> parts;
    for (const auto& b : X.blocks(deg)) {
        if (b.kind == BlockKind::Proj) parts.push_back("P" + X.ring->vertex_labels[b.v]);
        else if (b.kind == BlockKind::Diag) parts.push_back("A");
        else parts.push_back("M" + std::to_string(b.mod->dim));
    }
    std::sort(parts.begin(), parts.end());
    std::string s;
    for (const auto& p : parts) s += (s.empty() ? "" : " ") + p;
    return s;
}

template <class F>
std::string describe(const Complex<F>& X) {
    if (X.terms.empty()) return "0";
    std::string s;
    for (int i = X.lo; i <= X.hi(); ++i) {
        if (!s.empty()) s += " -> ";
        s += "[" + std::to_string(i) + ": " + block_signature(X, i) + "]";
    }
    return s;
}

template <class F>
bool purely_projective(const Complex<F>& X) {
    for (const auto& t : X.terms)
        for (const auto& b : t)
            if (b.kind != BlockKind::Proj) return false;
    return true;
}

}  // namespace ptw
