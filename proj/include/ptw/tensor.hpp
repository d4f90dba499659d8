#pragma once

// Tensor products of a bimodule complex X (over A^en, blocks Proj(u,w) =
// A e_u (x) e_w A or Diag = A) with a complex V of left A-modules or of
// bimodules, and the dual X* of a bimodule complex over a symmetric algebra.
//
// Proj(u,w) (x)_A C = A e_u (x)_k e_w C, a direct sum of copies of A e_u
// indexed by a basis of e_w C; Diag (x)_A C = C.

#include "ptw/complex.hpp"

namespace ptw {

namespace detail {

/// Basis of e_w C (left action of the base idempotent) for a block C.
template <class F>
struct CornerBasis {
    bool standard = true;
    std::vector<std::size_t> idx;  // block-local positions, when standard
    Matrix<F> W, L;                // general: columns span e_w C, L W = I
    std::vector<long> where;       // standard: position -> t, or -1
    std::size_t size() const { return standard ? idx.size() : W.cols(); }
};

template <class F>
CornerBasis<F> corner_basis(const Complex<F>& V, const Block<F>& b, std::size_t w) {
    const F& f = V.field();
    CornerBasis<F> cb;
    const std::size_t n = V.block_dim(b);
    if (b.kind == BlockKind::Gen) {
        cb.standard = false;
        std::vector<typename F::value_type> e(n, f.zero());
        Matrix<F> ew(f, n, n);
        std::size_t a = V.base ? V.base->idem[w] : V.ring->idem[w];
        for (std::size_t c = 0; c < n; ++c) {
            e[c] = f.one();
            std::vector<typename F::value_type> out(n, f.zero());
            block_left_act_add(V, b, a, e, 0, out, 0);
            ew.set_col(c, out);
            e[c] = f.zero();
        }
        cb.W = column_space(ew);
        cb.L = cb.W.cols() ? left_inverse(cb.W) : Matrix<F>(f, 0, n);
        return cb;
    }
    cb.where.assign(n, -1);
    auto push = [&](std::size_t c) {
        cb.where[c] = static_cast<long>(cb.idx.size());
        cb.idx.push_back(c);
    };
    if (!V.base) {
        const auto& R = *V.ring;
        const auto& pb = R.proj_basis[b.v];
        for (std::size_t c = 0; c < pb.size(); ++c)
            if (R.lv[pb[c]] == w) push(c);
        return cb;
    }
    const auto& A = *V.base;
    const std::size_t dA = A.dim();
    if (b.kind == BlockKind::Proj) {
        const auto& pb = V.ring->proj_basis[b.v];
        for (std::size_t c = 0; c < pb.size(); ++c)
            if (A.lv[pb[c] / dA] == w) push(c);
    } else {
        for (std::size_t m = 0; m < dA; ++m)
            if (A.lv[m] == w) push(m);
    }
    return cb;
}

template <class F>
std::vector<typename F::value_type> corner_coords(const F& f, const CornerBasis<F>& cb,
                                                  const std::vector<typename F::value_type>& y) {
    if (!cb.standard) return cb.L.apply(y);
    std::vector<typename F::value_type> t(cb.idx.size(), f.zero());
    for (std::size_t k = 0; k < cb.idx.size(); ++k) t[k] = y[cb.idx[k]];
    return t;
}

template <class F>
std::vector<typename F::value_type> corner_vector(const F& f, const CornerBasis<F>& cb, std::size_t n, std::size_t t) {
    if (!cb.standard) return cb.W.col(t);
    std::vector<typename F::value_type> v(n, f.zero());
    v[cb.idx[t]] = f.one();
    return v;
}

template <class F>
struct Piece {
    int p = 0, q = 0;
    std::size_t bx = 0, bv = 0;
    bool diag_x = false;
    std::size_t u = 0, w = 0;  // for Proj(u,w) in X
    std::size_t off = 0;       // offset in the output term
    CornerBasis<F> cb;
    // layout for Proj(u,w) (x) C: position of (t, s)
    std::vector<std::size_t> tpos;  // base offset of copy for t (relative to off)
    std::size_t sstride = 1;        // stride of s
    std::vector<std::size_t> tshift;  // extra shift for t inside the copy
    std::size_t pos(std::size_t t, std::size_t s) const { return off + tpos[t] + s * sstride + tshift[t]; }
};

}  // namespace detail

/// X (x)_A V with X a bimodule complex.  If V is a complex of left A-modules
/// (V.base == nullptr) the result is one too; if V is a bimodule complex the
/// result is a bimodule complex.  Sign: d(x (x) m) = dx (x) m + (-1)^p x (x) dm.
template <class F>
Complex<F> tensor(const Complex<F>& X, const Complex<F>& V) {
    using V_t = typename F::value_type;
    if (!X.base) throw ComplexError("tensor: left factor must be a bimodule complex");
    const auto& A = *X.base;
    const auto& Aen = *X.ring;
    const F& f = A.field;
    const std::size_t dA = A.dim(), r = A.nverts();
    const bool bimod = static_cast<bool>(V.base);
    if (bimod && V.base->dim() != dA) throw ComplexError("tensor: base algebras differ");
    if (!bimod && V.ring->dim() != dA) throw ComplexError("tensor: module complex is over a different algebra");
    for (const auto& t : X.terms)
        for (const auto& b : t)
            if (b.kind == BlockKind::Gen) throw ComplexError("tensor: general blocks in the left factor are unsupported");

    Complex<F> out = empty_complex(bimod ? X.ring : V.ring, bimod ? X.base : nullptr);
    if (X.terms.empty() || V.terms.empty()) return out;
    const int lo = X.lo + V.lo, hi = X.hi() + V.hi();
    out.lo = lo;
    std::vector<std::vector<detail::Piece<F>>> pieces(static_cast<std::size_t>(hi - lo + 1));

    for (int n = lo; n <= hi; ++n) {
        std::vector<Block<F>> term;
        std::size_t off = 0;
        auto& pcs = pieces[static_cast<std::size_t>(n - lo)];
        for (int p = X.lo; p <= X.hi(); ++p) {
            int q = n - p;
            if (!V.has(q)) continue;
            const auto& xb = X.blocks(p);
            const auto& vb = V.blocks(q);
            for (std::size_t bx = 0; bx < xb.size(); ++bx)
                for (std::size_t bv = 0; bv < vb.size(); ++bv) {
                    detail::Piece<F> pc;
                    pc.p = p; pc.q = q; pc.bx = bx; pc.bv = bv;
                    pc.off = off;
                    const Block<F>& C = vb[bv];
                    if (xb[bx].kind == BlockKind::Diag) {
                        pc.diag_x = true;
                        term.push_back(C);
                        off += V.block_dim(C);
                        pcs.push_back(std::move(pc));
                        continue;
                    }
                    pc.u = xb[bx].v / r;
                    pc.w = xb[bx].v % r;
                    pc.cb = detail::corner_basis(V, C, pc.w);
                    const std::size_t nu = A.proj_basis[pc.u].size();
                    const std::size_t kt = pc.cb.size();
                    pc.tpos.assign(kt, 0);
                    pc.tshift.assign(kt, 0);
                    if (!bimod) {
                        for (std::size_t t = 0; t < kt; ++t) {
                            term.push_back(Block<F>::proj(pc.u));
                            pc.tpos[t] = t * nu;
                        }
                        pc.sstride = 1;
                        off += kt * nu;
                    } else if (C.kind == BlockKind::Diag) {
                        // A e_u (x) e_w A = Proj(u,w)
                        term.push_back(Block<F>::proj(pc.u * r + pc.w));
                        const std::size_t nw = A.left_basis[pc.w].size();
                        pc.sstride = nw;
                        for (std::size_t t = 0; t < kt; ++t) pc.tshift[t] = A.left_pos[pc.cb.idx[t]];
                        off += nu * nw;
                    } else if (C.kind == BlockKind::Proj) {
                        // A e_u (x) e_w A e_k (x) e_l A: one Proj(u,l) per basis element of e_w A e_k
                        const std::size_t l = C.v % r;
                        const std::size_t nl = A.left_basis[l].size();
                        const auto& pb = Aen.proj_basis[C.v];
                        std::map<std::size_t, std::size_t> copy;
                        for (std::size_t t = 0; t < kt; ++t) {
                            std::size_t i = pb[pc.cb.idx[t]] / dA, j = pb[pc.cb.idx[t]] % dA;
                            auto it = copy.find(i);
                            if (it == copy.end()) {
                                it = copy.emplace(i, copy.size()).first;
                                term.push_back(Block<F>::proj(pc.u * r + l));
                            }
                            pc.tpos[t] = it->second * nu * nl;
                            pc.tshift[t] = A.left_pos[j];
                        }
                        pc.sstride = nl;
                        off += copy.size() * nu * nl;
                    } else {
                        throw ComplexError("tensor: general blocks in a bimodule right factor are unsupported");
                    }
                    pcs.push_back(std::move(pc));
                }
        }
        out.terms.push_back(std::move(term));
    }

    // left action of an A-vector on a V block, applied to a block-local vector
    auto left_vec = [&](const Block<F>& C, const std::vector<V_t>& a, const std::vector<V_t>& x) {
        std::vector<V_t> y(x.size(), f.zero());
        for (std::size_t k = 0; k < dA; ++k) {
            if (f.is_zero(a[k])) continue;
            std::vector<V_t> tmp(x.size(), f.zero());
            block_left_act_add(V, C, k, x, 0, tmp, 0);
            axpy(f, y, a[k], tmp);
        }
        return y;
    };
    auto left_basis_vec = [&](const Block<F>& C, std::size_t k, const std::vector<V_t>& x) {
        std::vector<V_t> y(x.size(), f.zero());
        block_left_act_add(V, C, k, x, 0, y, 0);
        return y;
    };

    for (int n = lo; n < hi; ++n) {
        const auto& src = pieces[static_cast<std::size_t>(n - lo)];
        const auto& dst = pieces[static_cast<std::size_t>(n + 1 - lo)];
        Matrix<F> D(f, out.dim(n + 1), out.dim(n));
        for (const auto& P : src) {
            const Block<F>& C = V.blocks(P.q)[P.bv];
            const std::size_t nc = V.block_dim(C);
            const std::size_t vc_off = V.offsets(P.q)[P.bv];
            // (a) id (x) d_V, sign (-1)^p
            if (V.has(P.q + 1)) {
                const V_t sign = (P.p % 2 == 0) ? f.one() : f.neg(f.one());
                const Matrix<F> dv = V.diff(P.q);
                auto voff1 = V.offsets(P.q + 1);
                for (const auto& Q : dst) {
                    if (Q.p != P.p || Q.bx != P.bx || Q.q != P.q + 1) continue;
                    const Block<F>& C2 = V.blocks(Q.q)[Q.bv];
                    const std::size_t nc2 = V.block_dim(C2);
                    Matrix<F> delta = dv.block(voff1[Q.bv], vc_off, nc2, nc);
                    if (delta.is_zero()) continue;
                    if (P.diag_x) {
                        for (std::size_t i = 0; i < nc2; ++i)
                            for (std::size_t j = 0; j < nc; ++j)
                                if (!f.is_zero(delta(i, j))) D(Q.off + i, P.off + j) = f.add(D(Q.off + i, P.off + j), f.mul(sign, delta(i, j)));
                        continue;
                    }
                    const std::size_t nu = A.proj_basis[P.u].size();
                    for (std::size_t t = 0; t < P.cb.size(); ++t) {
                        auto img = delta.apply(detail::corner_vector(f, P.cb, nc, t));
                        auto co = detail::corner_coords(f, Q.cb, img);
                        for (std::size_t t2 = 0; t2 < co.size(); ++t2) {
                            if (f.is_zero(co[t2])) continue;
                            V_t c = f.mul(sign, co[t2]);
                            for (std::size_t s = 0; s < nu; ++s) {
                                auto& e = D(Q.pos(t2, s), P.pos(t, s));
                                e = f.add(e, c);
                            }
                        }
                    }
                }
            }
            // (b) d_X (x) id
            if (X.has(P.p + 1)) {
                const Matrix<F> dx = X.diff(P.p);
                auto xoff0 = X.offsets(P.p), xoff1 = X.offsets(P.p + 1);
                const Block<F>& B = X.blocks(P.p)[P.bx];
                const std::size_t nb = X.block_dim(B);
                // generator image in each target block
                std::vector<V_t> gen(nb, f.zero());
                if (B.kind == BlockKind::Diag) {
                    for (auto e : A.idem) gen[e] = f.one();
                } else {
                    gen[Aen.proj_pos[A.idem[P.u] * dA + A.idem[P.w]]] = f.one();
                }
                for (const auto& Q : dst) {
                    if (Q.p != P.p + 1 || Q.q != P.q || Q.bv != P.bv) continue;
                    const Block<F>& B2 = X.blocks(Q.p)[Q.bx];
                    const std::size_t nb2 = X.block_dim(B2);
                    Matrix<F> comp = dx.block(xoff1[Q.bx], xoff0[P.bx], nb2, nb);
                    auto z = comp.apply(gen);
                    if (is_zero_vec(f, z)) continue;
                    if (!P.diag_x && !Q.diag_x) {
                        // Proj(u,w) -> Proj(u',w'): sum z_ij (b_s b_i) (x) (b_j c_t)
                        const auto& pb2 = Aen.proj_basis[B2.v];
                        const std::size_t nu = A.proj_basis[P.u].size();
                        for (std::size_t c2 = 0; c2 < nb2; ++c2) {
                            if (f.is_zero(z[c2])) continue;
                            std::size_t i = pb2[c2] / dA, j = pb2[c2] % dA;
                            // M_j: coords in Q.cb of b_j . (corner vector t)
                            std::vector<std::vector<V_t>> Mj(P.cb.size());
                            for (std::size_t t = 0; t < P.cb.size(); ++t)
                                Mj[t] = detail::corner_coords(f, Q.cb, left_basis_vec(C, j, detail::corner_vector(f, P.cb, nc, t)));
                            for (std::size_t s = 0; s < nu; ++s) {
                                std::size_t bs = A.proj_basis[P.u][s];
                                for (const auto& [k2, val] : A.table[bs][i]) {
                                    std::size_t s2 = A.proj_pos[k2];
                                    V_t cz = f.mul(z[c2], val);
                                    for (std::size_t t = 0; t < P.cb.size(); ++t)
                                        for (std::size_t t2 = 0; t2 < Mj[t].size(); ++t2) {
                                            if (f.is_zero(Mj[t][t2])) continue;
                                            auto& e = D(Q.pos(t2, s2), P.pos(t, s));
                                            e = f.add(e, f.mul(cz, Mj[t][t2]));
                                        }
                                }
                            }
                        }
                    } else if (!P.diag_x && Q.diag_x) {
                        // Proj(u,w) -> A: b_s (x) c_t -> (b_s a0) . c_t
                        const std::size_t nu = A.proj_basis[P.u].size();
                        for (std::size_t s = 0; s < nu; ++s) {
                            auto bsa = A.mul(A.basis_vec(A.proj_basis[P.u][s]), z);
                            for (std::size_t t = 0; t < P.cb.size(); ++t) {
                                auto y = left_vec(C, bsa, detail::corner_vector(f, P.cb, nc, t));
                                for (std::size_t i2 = 0; i2 < nc; ++i2)
                                    if (!f.is_zero(y[i2])) D(Q.off + i2, P.pos(t, s)) = f.add(D(Q.off + i2, P.pos(t, s)), y[i2]);
                            }
                        }
                    } else if (P.diag_x && !Q.diag_x) {
                        // A -> Proj(u',w'): m -> sum z_ij b_i (x) b_j m
                        const auto& pb2 = Aen.proj_basis[B2.v];
                        std::vector<V_t> e(nc, f.zero());
                        for (std::size_t c = 0; c < nc; ++c) {
                            e[c] = f.one();
                            for (std::size_t c2 = 0; c2 < nb2; ++c2) {
                                if (f.is_zero(z[c2])) continue;
                                std::size_t i = pb2[c2] / dA, j = pb2[c2] % dA;
                                auto co = detail::corner_coords(f, Q.cb, left_basis_vec(C, j, e));
                                std::size_t s2 = A.proj_pos[i];
                                for (std::size_t t2 = 0; t2 < co.size(); ++t2)
                                    if (!f.is_zero(co[t2]))
                                        D(Q.pos(t2, s2), P.off + c) = f.add(D(Q.pos(t2, s2), P.off + c), f.mul(z[c2], co[t2]));
                            }
                            e[c] = f.zero();
                        }
                    } else {
                        // A -> A: multiplication by the central element z
                        std::vector<V_t> e(nc, f.zero());
                        for (std::size_t c = 0; c < nc; ++c) {
                            e[c] = f.one();
                            auto y = left_vec(C, z, e);
                            for (std::size_t i2 = 0; i2 < nc; ++i2)
                                if (!f.is_zero(y[i2])) D(Q.off + i2, P.off + c) = f.add(D(Q.off + i2, P.off + c), y[i2]);
                            e[c] = f.zero();
                        }
                    }
                }
            }
        }
        out.d.push_back(std::move(D));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Duals

namespace detail {

/// Pairing between the dual block (rows) and the original block (columns).
template <class F>
Matrix<F> dual_pairing(const Complex<F>& X, const Block<F>& b) {
    const auto& A = *X.base;
    const auto& phi = *A.trace;
    const F& f = A.field;
    const std::size_t dA = A.dim(), r = A.nverts();
    if (b.kind == BlockKind::Diag) return A.gram(phi);
    // original Proj(u,w): basis (x', y') with x' in A e_u, y' in e_w A
    // dual Proj(w,u): basis (y, x) with y in A e_w, x in e_u A
    // <y (x) x, x' (x) y'> = phi(x x') phi(y' y)
    const auto& R = *X.ring;
    const std::size_t u = b.v / r, w = b.v % r;
    const auto& pb = R.proj_basis[b.v];
    const auto& pbd = R.proj_basis[w * r + u];
    Matrix<F> g = A.gram(phi);
    Matrix<F> m(f, pbd.size(), pb.size());
    for (std::size_t a = 0; a < pbd.size(); ++a) {
        std::size_t y = pbd[a] / dA, x = pbd[a] % dA;
        for (std::size_t c = 0; c < pb.size(); ++c) {
            std::size_t xp = pb[c] / dA, yp = pb[c] % dA;
            m(a, c) = f.mul(g(x, xp), g(yp, y));
        }
    }
    return m;
}

}  // namespace detail

/// X* = Hom_k(X, k) with bimodule structure (a f b)(m) = f(b m a), realised
/// through the symmetrising form: (X*)^i pairs with X^{-i}, Proj(u,w) with
/// Proj(w,u) and A with A.  The differential is G_{i+1}^{-T} d^T G_i^T where
/// G are the pairing matrices (no extra signs; other sign conventions give
/// isomorphic complexes).
template <class F>
Complex<F> dual(const Complex<F>& X) {
    if (!X.base || !X.base->trace) throw ComplexError("dual: needs a bimodule complex over a symmetric algebra");
    const auto& A = *X.base;
    const std::size_t r = A.nverts();
    Complex<F> D = empty_complex(X.ring, X.base);
    if (X.terms.empty()) return D;
    D.lo = -X.hi();
    std::vector<Matrix<F>> G;
    for (int i = D.lo; i <= -X.lo; ++i) {
        std::vector<Block<F>> t;
        const auto& src = X.blocks(-i);
        std::vector<Matrix<F>> gb;
        for (const auto& b : src) {
            if (b.kind == BlockKind::Gen) throw ComplexError("dual: general blocks are unsupported");
            t.push_back(b.kind == BlockKind::Diag ? b : Block<F>::proj((b.v % r) * r + b.v / r));
            gb.push_back(detail::dual_pairing(X, b));
        }
        D.terms.push_back(t);
        const std::size_t n = X.dim(-i);
        Matrix<F> g(A.field, n, n);
        std::size_t off = 0;
        for (const auto& m : gb) {
            g.set_block(off, off, m);
            off += m.rows();
        }
        G.push_back(g);
    }
    for (int i = D.lo; i < -X.lo; ++i) {
        const auto& Gi = G[static_cast<std::size_t>(i - D.lo)];
        const auto& Gi1 = G[static_cast<std::size_t>(i + 1 - D.lo)];
        Matrix<F> dX = X.diff(-i - 1);  // X^{-i-1} -> X^{-i}
        D.d.push_back(invert(Gi1.transpose()) * dX.transpose() * Gi.transpose());
    }
    return D;
}

}  // namespace ptw
