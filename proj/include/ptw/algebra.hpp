#pragma once

// Finite-dimensional split algebras given by structure constants on an
// adapted basis: every basis element b satisfies e_{lv(b)} b e_{rv(b)} = b,
// the vertex idempotents are basis elements, and every other basis element of
// a local corner e_v A e_v lies in the radical.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "ptw/matrix.hpp"

namespace ptw {

struct AlgebraError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

template <class F>
using Sparse = std::vector<std::pair<std::uint32_t, typename F::value_type>>;

template <class F>
class Algebra {
public:
    using V = typename F::value_type;
    using Vec = std::vector<V>;

    F field{};
    std::string name;
    std::vector<std::string> labels;
    std::vector<std::vector<Sparse<F>>> table;  // table[i][j] = b_i * b_j
    std::vector<std::string> vertex_labels;
    std::vector<std::size_t> idem;              // basis index of e_v
    std::vector<std::size_t> lv, rv;            // vertex of e_{lv} b e_{rv} = b
    std::vector<char> in_rad;
    std::vector<std::size_t> vclass;            // isoclass of P_v
    std::optional<Vec> trace;                   // symmetrising form, if known

    std::size_t dim() const { return labels.size(); }
    std::size_t nverts() const { return idem.size(); }

    // ---- derived data, filled by finalize() -------------------------------
    std::vector<std::vector<std::size_t>> proj_basis;  // basis of A e_v
    std::vector<std::size_t> proj_pos;                 // position of b inside A e_{rv(b)}
    std::vector<std::vector<std::size_t>> left_basis;  // basis of e_v A
    std::vector<std::size_t> left_pos;
    std::vector<std::size_t> arrows;                   // lifts of a basis of rad/rad^2
    std::vector<std::size_t> generators;               // idempotents then arrows

    Vec unit() const {
        Vec u(dim(), field.zero());
        for (auto i : idem) u[i] = field.one();
        return u;
    }
    Vec basis_vec(std::size_t i) const {
        Vec u(dim(), field.zero());
        u[i] = field.one();
        return u;
    }

    Vec mul(const Vec& x, const Vec& y) const {
        Vec r(dim(), field.zero());
        for (std::size_t i = 0; i < dim(); ++i) {
            if (field.is_zero(x[i])) continue;
            for (std::size_t j = 0; j < dim(); ++j) {
                if (field.is_zero(y[j])) continue;
                V c = field.mul(x[i], y[j]);
                for (const auto& [k, v] : table[i][j]) r[k] = field.add(r[k], field.mul(c, v));
            }
        }
        return r;
    }
    /// Matrix of y -> x*y.
    Matrix<F> lmul_matrix(const Vec& x) const {
        Matrix<F> m(field, dim(), dim());
        for (std::size_t i = 0; i < dim(); ++i) {
            if (field.is_zero(x[i])) continue;
            for (std::size_t j = 0; j < dim(); ++j)
                for (const auto& [k, v] : table[i][j]) m(k, j) = field.add(m(k, j), field.mul(x[i], v));
        }
        return m;
    }
    /// Matrix of y -> y*x.
    Matrix<F> rmul_matrix(const Vec& x) const {
        Matrix<F> m(field, dim(), dim());
        for (std::size_t i = 0; i < dim(); ++i) {
            if (field.is_zero(x[i])) continue;
            for (std::size_t j = 0; j < dim(); ++j)
                for (const auto& [k, v] : table[j][i]) m(k, j) = field.add(m(k, j), field.mul(x[i], v));
        }
        return m;
    }
    Vec to_dense(const Sparse<F>& s) const {
        Vec r(dim(), field.zero());
        for (const auto& [k, v] : s) r[k] = field.add(r[k], v);
        return r;
    }

    std::size_t basis_index(const std::string& label) const {
        for (std::size_t i = 0; i < labels.size(); ++i)
            if (labels[i] == label) return i;
        throw AlgebraError("no basis element labelled '" + label + "'");
    }

    /// First violated axiom, or empty string.
    std::string check_axioms() const {
        const std::size_t d = dim();
        if (table.size() != d) return "structure table has wrong size";
        for (std::size_t i = 0; i < d; ++i)
            if (table[i].size() != d) return "structure table has wrong size";
        Vec one = unit();
        for (std::size_t i = 0; i < d; ++i) {
            Vec b = basis_vec(i);
            if (mul(one, b) != b || mul(b, one) != b) return "unit law fails at " + labels[i];
        }
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < d; ++j) {
                Vec ij = to_dense(table[i][j]);
                for (std::size_t l = 0; l < d; ++l) {
                    Vec left(d, field.zero()), right(d, field.zero());
                    for (std::size_t k = 0; k < d; ++k) {
                        if (field.is_zero(ij[k])) continue;
                        for (const auto& [m, v] : table[k][l]) left[m] = field.add(left[m], field.mul(ij[k], v));
                    }
                    for (const auto& [k, c] : table[j][l])
                        for (const auto& [m, v] : table[i][k]) right[m] = field.add(right[m], field.mul(c, v));
                    if (left != right)
                        return "associativity fails at (" + labels[i] + "," + labels[j] + "," + labels[l] + ")";
                }
            }
        for (std::size_t u = 0; u < nverts(); ++u)
            for (std::size_t w = 0; w < nverts(); ++w) {
                Vec p = to_dense(table[idem[u]][idem[w]]);
                Vec expect = u == w ? basis_vec(idem[u]) : Vec(d, field.zero());
                if (p != expect) return "idempotents are not orthogonal";
            }
        for (std::size_t i = 0; i < d; ++i) {
            Vec b = basis_vec(i);
            if (to_dense(table[idem[lv[i]]][i]) != b || to_dense(table[i][idem[rv[i]]]) != b)
                return "basis element " + labels[i] + " is not vertex-homogeneous";
        }
        return {};
    }

    /// Fill derived tables and verify the axioms; throws AlgebraError.
    /// Derive the per-vertex bases and generators.  `given_arrows`, when set,
    /// must be radical basis elements generating the radical as a right ideal.
    void finalize(bool check = true, const std::vector<std::size_t>* given_arrows = nullptr) {
        const std::size_t d = dim();
        if (lv.size() != d || rv.size() != d || in_rad.size() != d)
            throw AlgebraError("vertex data has wrong size");
        if (vclass.empty()) {
            vclass.resize(nverts());
            for (std::size_t v = 0; v < nverts(); ++v) vclass[v] = v;
        }
        if (vertex_labels.empty())
            for (std::size_t v = 0; v < nverts(); ++v) vertex_labels.push_back(std::to_string(v + 1));
        if (check) {
            auto err = check_axioms();
            if (!err.empty()) throw AlgebraError(name + ": " + err);
        }
        proj_basis.assign(nverts(), {});
        left_basis.assign(nverts(), {});
        proj_pos.assign(d, 0);
        left_pos.assign(d, 0);
        for (std::size_t i = 0; i < d; ++i) {
            proj_pos[i] = proj_basis[rv[i]].size();
            proj_basis[rv[i]].push_back(i);
            left_pos[i] = left_basis[lv[i]].size();
            left_basis[lv[i]].push_back(i);
        }
        if (given_arrows) arrows = *given_arrows;
        else compute_arrows();
        // idempotents, then non-radical elements (matrix units of non-basic
        // algebras), then arrows
        generators = idem;
        for (std::size_t i = 0; i < d; ++i)
            if (!in_rad[i] && std::find(idem.begin(), idem.end(), i) == idem.end()) generators.push_back(i);
        generators.insert(generators.end(), arrows.begin(), arrows.end());
        if (trace) {
            if (trace->size() != d) throw AlgebraError("trace form has wrong length");
            if (!is_symmetrising(*trace)) throw AlgebraError(name + ": supplied trace form is not symmetric nondegenerate");
        }
    }

    Matrix<F> gram(const Vec& phi) const {
        Matrix<F> g(field, dim(), dim());
        for (std::size_t i = 0; i < dim(); ++i)
            for (std::size_t j = 0; j < dim(); ++j) {
                V acc = field.zero();
                for (const auto& [k, v] : table[i][j]) acc = field.add(acc, field.mul(v, phi[k]));
                g(i, j) = acc;
            }
        return g;
    }
    bool is_symmetrising(const Vec& phi) const {
        Matrix<F> g = gram(phi);
        return g == g.transpose() && rank(g) == dim();
    }

    /// Dimension of e_u A e_w.
    std::size_t cartan(std::size_t u, std::size_t w) const {
        std::size_t c = 0;
        for (std::size_t i = 0; i < dim(); ++i)
            if (lv[i] == u && rv[i] == w) ++c;
        return c;
    }

private:
    void compute_arrows() {
        const std::size_t d = dim();
        SpanBuilder<F> span(field, d);
        for (std::size_t i = 0; i < d; ++i) {
            if (!in_rad[i]) continue;
            for (std::size_t j = 0; j < d; ++j) {
                if (!in_rad[j]) continue;
                if (rv[i] != lv[j]) continue;
                if (table[i][j].empty()) continue;
                span.add(to_dense(table[i][j]));
            }
        }
        arrows.clear();
        for (std::size_t i = 0; i < d; ++i)
            if (in_rad[i] && span.add(basis_vec(i))) arrows.push_back(i);
    }
};

template <class F>
using AlgebraPtr = std::shared_ptr<const Algebra<F>>;

// ---------------------------------------------------------------------------
// Quiver presentations

struct Arrow {
    std::string name;
    std::size_t from = 0, to = 0;
};

template <class F>
struct RelationTerm {
    typename F::value_type coeff;
    std::vector<std::size_t> path;  // arrow indices, traversed left to right
};

template <class F>
struct QuiverPresentation {
    std::string name;
    std::vector<std::string> vertices;
    std::vector<Arrow> arrows;
    std::vector<std::vector<RelationTerm<F>>> relations;
    std::size_t max_path_len = 8;
};

struct MalformedRelation : AlgebraError {
    using AlgebraError::AlgebraError;
};
struct NotFiniteDimensional : AlgebraError {
    using AlgebraError::AlgebraError;
};

namespace detail {

struct Path {
    std::size_t from, to;
    std::vector<std::size_t> arrows;
};

inline std::string path_label(const std::vector<std::string>& vertices, const std::vector<Arrow>& arrows,
                              const Path& p) {
    if (p.arrows.empty()) return "e" + vertices[p.from];
    std::string s;
    for (std::size_t k = 0; k < p.arrows.size(); ++k) s += (k ? "*" : "") + arrows[p.arrows[k]].name;
    return s;
}

}  // namespace detail

/// Quotient of the path algebra by the two-sided ideal generated by the
/// relations, computed by linear algebra on the space of paths of length at
/// most max_path_len.  Paths compose left to right.
template <class F>
Algebra<F> build_from_quiver(const F& f, const QuiverPresentation<F>& q) {
    using V = typename F::value_type;
    const std::size_t nv = q.vertices.size();
    if (nv == 0) throw MalformedRelation("quiver has no vertices");
    {
        std::set<std::string> names;
        for (const auto& a : q.arrows) {
            if (a.from >= nv || a.to >= nv) throw MalformedRelation("arrow " + a.name + " has a bad endpoint");
            if (!names.insert(a.name).second) throw MalformedRelation("duplicate arrow name " + a.name);
        }
    }
    // endpoints of relations
    std::vector<std::pair<std::size_t, std::size_t>> rel_ends;
    for (std::size_t r = 0; r < q.relations.size(); ++r) {
        const auto& rel = q.relations[r];
        if (rel.empty()) throw MalformedRelation("relation " + std::to_string(r + 1) + " is empty");
        std::optional<std::pair<std::size_t, std::size_t>> ends;
        for (const auto& t : rel) {
            if (t.path.empty()) throw MalformedRelation("relation " + std::to_string(r + 1) + " has a term of length 0");
            for (std::size_t k = 0; k + 1 < t.path.size(); ++k)
                if (q.arrows[t.path[k]].to != q.arrows[t.path[k + 1]].from)
                    throw MalformedRelation("relation " + std::to_string(r + 1) + ": arrows " +
                                            q.arrows[t.path[k]].name + " and " + q.arrows[t.path[k + 1]].name +
                                            " are not composable");
            std::pair<std::size_t, std::size_t> e{q.arrows[t.path.front()].from, q.arrows[t.path.back()].to};
            if (ends && *ends != e)
                throw MalformedRelation("relation " + std::to_string(r + 1) + " mixes paths with different endpoints");
            ends = e;
        }
        rel_ends.push_back(*ends);
    }

    // enumerate all paths of length <= L
    const std::size_t L = q.max_path_len;
    std::vector<detail::Path> paths;
    std::map<std::vector<std::size_t>, std::size_t> arrow_path_index;  // non-trivial paths
    std::vector<std::size_t> vertex_path(nv);
    for (std::size_t v = 0; v < nv; ++v) {
        vertex_path[v] = paths.size();
        paths.push_back({v, v, {}});
    }
    std::vector<std::size_t> frontier;
    for (std::size_t a = 0; a < q.arrows.size(); ++a) {
        arrow_path_index[{a}] = paths.size();
        frontier.push_back(paths.size());
        paths.push_back({q.arrows[a].from, q.arrows[a].to, {a}});
    }
    for (std::size_t len = 2; len <= L; ++len) {
        std::vector<std::size_t> next;
        for (auto pi : frontier)
            for (std::size_t a = 0; a < q.arrows.size(); ++a) {
                if (q.arrows[a].from != paths[pi].to) continue;
                detail::Path np{paths[pi].from, q.arrows[a].to, paths[pi].arrows};
                np.arrows.push_back(a);
                arrow_path_index[np.arrows] = paths.size();
                next.push_back(paths.size());
                paths.push_back(std::move(np));
                if (paths.size() > 200000) throw NotFiniteDimensional("path enumeration exceeded 200000 paths");
            }
        frontier = std::move(next);
    }
    auto index_of = [&](const std::vector<std::size_t>& arr) -> std::optional<std::size_t> {
        auto it = arrow_path_index.find(arr);
        if (it == arrow_path_index.end()) return std::nullopt;
        return it->second;
    };

    // Column order: longer paths first, so that they become pivots and get
    // rewritten in terms of shorter ones.  Ties broken by reverse index.
    const std::size_t np = paths.size();
    std::vector<std::size_t> order(np);
    for (std::size_t i = 0; i < np; ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
        if (paths[x].arrows.size() != paths[y].arrows.size()) return paths[x].arrows.size() > paths[y].arrows.size();
        return x > y;
    });
    std::vector<std::size_t> col_of(np);
    for (std::size_t c = 0; c < np; ++c) col_of[order[c]] = c;

    // ideal generators u * r * w, truncated above length L
    Matrix<F> gens(f, 0, np);
    std::vector<std::vector<std::size_t>> ending_at(nv), starting_at(nv);
    for (std::size_t i = 0; i < np; ++i) {
        ending_at[paths[i].to].push_back(i);
        starting_at[paths[i].from].push_back(i);
    }
    for (std::size_t r = 0; r < q.relations.size(); ++r) {
        std::size_t minlen = static_cast<std::size_t>(-1);
        for (const auto& t : q.relations[r]) minlen = std::min(minlen, t.path.size());
        for (auto u : ending_at[rel_ends[r].first]) {
            if (paths[u].arrows.size() + minlen > L) continue;
            for (auto w : starting_at[rel_ends[r].second]) {
                if (paths[u].arrows.size() + minlen + paths[w].arrows.size() > L) continue;
                std::vector<V> row(np, f.zero());
                bool any = false;
                for (const auto& t : q.relations[r]) {
                    std::vector<std::size_t> arr = paths[u].arrows;
                    arr.insert(arr.end(), t.path.begin(), t.path.end());
                    arr.insert(arr.end(), paths[w].arrows.begin(), paths[w].arrows.end());
                    if (arr.size() > L) continue;
                    auto idx = index_of(arr);
                    if (!idx) continue;
                    auto c = col_of[*idx];
                    row[c] = f.add(row[c], t.coeff);
                    any = true;
                }
                if (any) gens.append_row(row);
            }
        }
    }
    if (gens.rows() == 0) gens = Matrix<F>(f, 0, np);
    auto piv = rref_inplace(gens);
    std::vector<long> pivot_row(np, -1);
    for (std::size_t k = 0; k < piv.size(); ++k) pivot_row[piv[k]] = static_cast<long>(k);

    // every path of length L must lie in the ideal
    for (std::size_t i = 0; i < np; ++i)
        if (paths[i].arrows.size() == L && L > 0 && pivot_row[col_of[i]] < 0)
            throw NotFiniteDimensional(q.name + ": dimension not stabilised within max_path_len=" + std::to_string(L));

    // basis: non-pivot paths in enumeration order (vertices first, then by length)
    std::vector<std::size_t> basis_paths;
    std::vector<long> basis_index(np, -1);
    for (std::size_t i = 0; i < np; ++i)
        if (pivot_row[col_of[i]] < 0) {
            basis_index[i] = static_cast<long>(basis_paths.size());
            basis_paths.push_back(i);
        }
    for (std::size_t v = 0; v < nv; ++v)
        if (basis_index[vertex_path[v]] < 0) throw MalformedRelation("a relation kills a vertex idempotent");

    auto normal_form = [&](std::size_t pi) {
        Sparse<F> out;
        if (basis_index[pi] >= 0) {
            out.push_back({static_cast<std::uint32_t>(basis_index[pi]), f.one()});
            return out;
        }
        long rrow = pivot_row[col_of[pi]];
        for (std::size_t c = 0; c < np; ++c) {
            if (c == col_of[pi]) continue;
            const V& x = gens(static_cast<std::size_t>(rrow), c);
            if (f.is_zero(x)) continue;
            auto pth = order[c];
            out.push_back({static_cast<std::uint32_t>(basis_index[pth]), f.neg(x)});
        }
        std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
        return out;
    };

    Algebra<F> A;
    A.field = f;
    A.name = q.name;
    A.vertex_labels = q.vertices;
    const std::size_t d = basis_paths.size();
    for (auto pi : basis_paths) {
        A.labels.push_back(detail::path_label(q.vertices, q.arrows, paths[pi]));
        A.lv.push_back(paths[pi].from);
        A.rv.push_back(paths[pi].to);
        A.in_rad.push_back(paths[pi].arrows.empty() ? 0 : 1);
    }
    for (std::size_t v = 0; v < nv; ++v) A.idem.push_back(static_cast<std::size_t>(basis_index[vertex_path[v]]));
    A.table.assign(d, std::vector<Sparse<F>>(d));
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) {
            const auto& p1 = paths[basis_paths[i]];
            const auto& p2 = paths[basis_paths[j]];
            if (p1.to != p2.from) continue;
            if (p1.arrows.empty()) { A.table[i][j] = {{static_cast<std::uint32_t>(j), f.one()}}; continue; }
            if (p2.arrows.empty()) { A.table[i][j] = {{static_cast<std::uint32_t>(i), f.one()}}; continue; }
            std::vector<std::size_t> arr = p1.arrows;
            arr.insert(arr.end(), p2.arrows.begin(), p2.arrows.end());
            if (arr.size() > L) continue;
            auto idx = index_of(arr);
            if (!idx) continue;
            A.table[i][j] = normal_form(*idx);
        }
    A.finalize();
    return A;
}

// ---------------------------------------------------------------------------
// Table-born algebras

/// Change of basis to an adapted basis.  `idempotents` are coordinate vectors
/// of a complete set of primitive orthogonal idempotents; the algebra must be
/// basic and split.  If `to_new` is set it receives the matrix taking old
/// coordinates to new ones.
template <class F>
Algebra<F> adapt_basis(const F& f, const std::string& name, const std::vector<std::string>& labels,
                       const std::vector<std::vector<Sparse<F>>>& table,
                       const std::vector<std::vector<typename F::value_type>>& idempotents,
                       const std::optional<std::vector<typename F::value_type>>& trace = std::nullopt,
                       Matrix<F>* to_new = nullptr) {
    using V = typename F::value_type;
    using Vec = std::vector<V>;
    Algebra<F> raw;
    raw.field = f;
    raw.name = name;
    raw.labels = labels;
    raw.table = table;
    const std::size_t d = labels.size();
    const std::size_t r = idempotents.size();
    if (r == 0) throw AlgebraError(name + ": no idempotents supplied (non-split input rejected)");
    for (const auto& e : idempotents)
        if (e.size() != d) throw AlgebraError(name + ": idempotent has wrong length");
    {
        Vec s(d, f.zero());
        for (const auto& e : idempotents)
            for (std::size_t k = 0; k < d; ++k) s[k] = f.add(s[k], e[k]);
        // the unit is the sum of the idempotents; check it acts as identity
        for (std::size_t i = 0; i < d; ++i) {
            Vec b(d, f.zero());
            b[i] = f.one();
            if (raw.mul(s, b) != b || raw.mul(b, s) != b)
                throw AlgebraError(name + ": idempotents do not sum to the unit");
        }
        for (std::size_t u = 0; u < r; ++u)
            for (std::size_t w = 0; w < r; ++w) {
                Vec p = raw.mul(idempotents[u], idempotents[w]);
                Vec expect = u == w ? idempotents[u] : Vec(d, f.zero());
                if (p != expect) throw AlgebraError(name + ": idempotents are not orthogonal");
            }
    }
    // new basis: for each (u,w) a basis of e_u A e_w; for u == w start with e_u
    // and continue with a basis of the radical of the local corner
    std::vector<Vec> newb;
    std::vector<std::string> newl;
    std::vector<std::size_t> lv, rv, idem(r);
    std::vector<char> in_rad;
    auto label_of = [&](const Vec& v) {
        std::string s;
        std::size_t nz = 0, last = 0;
        for (std::size_t k = 0; k < d; ++k)
            if (!f.is_zero(v[k])) { ++nz; last = k; }
        if (nz == 1 && f.is_one(v[last])) return labels[last];
        for (std::size_t k = 0; k < d; ++k) {
            if (f.is_zero(v[k])) continue;
            if (!s.empty()) s += "+";
            if (!f.is_one(v[k])) s += f.to_string(v[k]) + ".";
            s += labels[k];
        }
        return s;
    };
    for (std::size_t u = 0; u < r; ++u)
        for (std::size_t w = 0; w < r; ++w) {
            Matrix<F> proj = raw.lmul_matrix(idempotents[u]) * raw.rmul_matrix(idempotents[w]);
            Matrix<F> sp = column_space(proj);
            std::vector<Vec> corner;
            for (std::size_t c = 0; c < sp.cols(); ++c) corner.push_back(sp.col(c));
            if (u != w) {
                for (auto& v : corner) {
                    newb.push_back(v);
                    lv.push_back(u); rv.push_back(w); in_rad.push_back(1);
                }
                continue;
            }
            // radical of a local split corner: kernel of the character chi,
            // where left multiplication by x is chi(x) + nilpotent
            const std::size_t m = corner.size();
            Matrix<F> cb = Matrix<F>::from_columns(f, d, corner);
            // left-inverse of cb via solve
            auto chi = [&](const Vec& x) -> V {
                Matrix<F> Lx = solve(cb, raw.lmul_matrix(x) * cb);  // m x m
                if (f.characteristic() == 0) {
                    V tr = f.zero();
                    for (std::size_t k = 0; k < m; ++k) tr = f.add(tr, Lx(k, k));
                    return f.div(tr, f.from_int(static_cast<long long>(m)));
                }
                std::uint64_t q = f.characteristic();
                Matrix<F> pw = Lx;
                while (q < m) {
                    // pw <- pw^p
                    Matrix<F> acc = Matrix<F>::identity(f, m);
                    for (std::uint32_t t = 0; t < f.characteristic(); ++t) acc = acc * pw;
                    pw = acc;
                    q *= f.characteristic();
                }
                {
                    Matrix<F> acc = Matrix<F>::identity(f, m);
                    for (std::uint32_t t = 0; t < f.characteristic(); ++t) acc = acc * pw;
                    pw = acc;
                }
                for (std::size_t i2 = 0; i2 < m; ++i2)
                    for (std::size_t j2 = 0; j2 < m; ++j2)
                        if (i2 != j2 && !f.is_zero(pw(i2, j2)))
                            throw AlgebraError(name + ": corner algebra is not local (idempotent not primitive)");
                return pw(0, 0);
            };
            Matrix<F> chirow(f, 1, m);
            for (std::size_t k = 0; k < m; ++k) chirow(0, k) = chi(corner[k]);
            Matrix<F> ker = kernel_basis(chirow);
            idem[u] = newb.size();
            newb.push_back(idempotents[u]);
            lv.push_back(u); rv.push_back(u); in_rad.push_back(0);
            for (std::size_t c = 0; c < ker.cols(); ++c) {
                Vec v(d, f.zero());
                for (std::size_t k = 0; k < m; ++k) axpy(f, v, ker(k, c), corner[k]);
                newb.push_back(v);
                lv.push_back(u); rv.push_back(u); in_rad.push_back(1);
            }
        }
    if (newb.size() != d) throw AlgebraError(name + ": idempotents do not decompose the algebra");
    Matrix<F> Bm = Matrix<F>::from_columns(f, d, newb);
    Matrix<F> Binv = invert(Bm);
    if (to_new) *to_new = Binv;
    Algebra<F> A;
    A.field = f;
    A.name = name;
    for (const auto& v : newb) A.labels.push_back(label_of(v));
    A.lv = lv; A.rv = rv; A.in_rad = in_rad; A.idem = idem;
    A.table.assign(d, std::vector<Sparse<F>>(d));
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) {
            Vec p = Binv.apply(raw.mul(newb[i], newb[j]));
            for (std::size_t k = 0; k < d; ++k)
                if (!f.is_zero(p[k])) A.table[i][j].push_back({static_cast<std::uint32_t>(k), p[k]});
        }
    if (trace) {
        if (trace->size() != d) throw AlgebraError(name + ": trace form has wrong length");
        Vec t(d, f.zero());
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t k = 0; k < d; ++k) t[i] = f.add(t[i], f.mul((*trace)[k], newb[i][k]));
        A.trace = t;
    }
    A.finalize();
    return A;
}

// ---------------------------------------------------------------------------
// Constructions

template <class F>
Algebra<F> opposite(const Algebra<F>& a) {
    Algebra<F> o;
    o.field = a.field;
    o.name = a.name + "^op";
    o.labels = a.labels;
    o.vertex_labels = a.vertex_labels;
    o.idem = a.idem;
    o.lv = a.rv;
    o.rv = a.lv;
    o.in_rad = a.in_rad;
    o.vclass = a.vclass;
    o.trace = a.trace;
    const std::size_t d = a.dim();
    o.table.assign(d, std::vector<Sparse<F>>(d));
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) o.table[i][j] = a.table[j][i];
    o.finalize(false);
    return o;
}

/// B (x) C with componentwise product; basis index i*dim(C)+j.
template <class F>
Algebra<F> tensor_algebra(const Algebra<F>& b, const Algebra<F>& c, bool check = false) {
    const F& f = b.field;
    Algebra<F> t;
    t.field = f;
    t.name = b.name + "(x)" + c.name;
    const std::size_t db = b.dim(), dc = c.dim();
    for (std::size_t i = 0; i < db; ++i)
        for (std::size_t j = 0; j < dc; ++j) {
            t.labels.push_back(b.labels[i] + "|" + c.labels[j]);
            t.lv.push_back(b.lv[i] * c.nverts() + c.lv[j]);
            t.rv.push_back(b.rv[i] * c.nverts() + c.rv[j]);
            t.in_rad.push_back(b.in_rad[i] || c.in_rad[j]);
        }
    for (std::size_t u = 0; u < b.nverts(); ++u)
        for (std::size_t w = 0; w < c.nverts(); ++w) {
            t.idem.push_back(b.idem[u] * dc + c.idem[w]);
            t.vertex_labels.push_back(b.vertex_labels[u] + "|" + c.vertex_labels[w]);
            t.vclass.push_back(b.vclass[u] * c.nverts() + c.vclass[w]);
        }
    const std::size_t d = db * dc;
    t.table.assign(d, std::vector<Sparse<F>>(d));
    for (std::size_t i1 = 0; i1 < db; ++i1)
        for (std::size_t j1 = 0; j1 < dc; ++j1)
            for (std::size_t i2 = 0; i2 < db; ++i2) {
                const auto& pb = b.table[i1][i2];
                if (pb.empty()) continue;
                for (std::size_t j2 = 0; j2 < dc; ++j2) {
                    const auto& pc = c.table[j1][j2];
                    if (pc.empty()) continue;
                    Sparse<F> out;
                    for (const auto& [x, vx] : pb)
                        for (const auto& [y, vy] : pc)
                            out.push_back({static_cast<std::uint32_t>(x * dc + y), f.mul(vx, vy)});
                    std::sort(out.begin(), out.end(), [](const auto& p, const auto& q) { return p.first < q.first; });
                    t.table[i1 * dc + j1][i2 * dc + j2] = std::move(out);
                }
            }
    if (b.trace && c.trace) {
        std::vector<typename F::value_type> tr(d, f.zero());
        for (std::size_t i = 0; i < db; ++i)
            for (std::size_t j = 0; j < dc; ++j) tr[i * dc + j] = f.mul((*b.trace)[i], (*c.trace)[j]);
        t.trace = tr;
    }
    // radical generators: arrows(B)|idem(C) and idem(B)|arrows(C)
    std::vector<std::size_t> arrows;
    for (auto a : b.arrows)
        for (auto e : c.idem) arrows.push_back(a * dc + e);
    for (auto e : b.idem)
        for (auto a : c.arrows) arrows.push_back(e * dc + a);
    std::sort(arrows.begin(), arrows.end());
    t.finalize(check, &arrows);
    return t;
}

/// A (x) A^op: left modules are A-A-bimodules, (a|b).m = a m b.
template <class F>
Algebra<F> enveloping(const Algebra<F>& a, bool check = false) {
    Algebra<F> e = tensor_algebra(a, opposite(a), check);
    e.name = a.name + "^en";
    return e;
}

/// Product algebra A x B (block diagonal).
template <class F>
Algebra<F> product_algebra(const Algebra<F>& a, const Algebra<F>& b) {
    const F& f = a.field;
    Algebra<F> p;
    p.field = f;
    p.name = a.name + "x" + b.name;
    const std::size_t da = a.dim(), db = b.dim(), ra = a.nverts();
    p.labels = a.labels;
    for (const auto& l : b.labels) p.labels.push_back(l + "'");
    p.lv = a.lv; p.rv = a.rv; p.in_rad = a.in_rad;
    for (std::size_t i = 0; i < db; ++i) {
        p.lv.push_back(b.lv[i] + ra);
        p.rv.push_back(b.rv[i] + ra);
        p.in_rad.push_back(b.in_rad[i]);
    }
    p.idem = a.idem;
    for (auto i : b.idem) p.idem.push_back(i + da);
    p.vertex_labels = a.vertex_labels;
    for (const auto& l : b.vertex_labels) p.vertex_labels.push_back(l + "'");
    p.vclass = a.vclass;
    for (auto c : b.vclass) p.vclass.push_back(c + ra);
    p.table.assign(da + db, std::vector<Sparse<F>>(da + db));
    for (std::size_t i = 0; i < da; ++i)
        for (std::size_t j = 0; j < da; ++j) p.table[i][j] = a.table[i][j];
    for (std::size_t i = 0; i < db; ++i)
        for (std::size_t j = 0; j < db; ++j) {
            Sparse<F> s = b.table[i][j];
            for (auto& [k, v] : s) k += static_cast<std::uint32_t>(da);
            p.table[da + i][da + j] = std::move(s);
        }
    if (a.trace && b.trace) {
        auto t = *a.trace;
        t.insert(t.end(), b.trace->begin(), b.trace->end());
        p.trace = t;
    }
    p.finalize();
    return p;
}

/// An algebra E together with a realisation of each basis element as a basis
/// element of A and each vertex as a vertex of A, such that right
/// multiplication by x in e_a E e_b is right multiplication by real[x] from
/// A e_{vreal[a]} to A e_{vreal[b]}.  Used for E = End_A(P)^op.
template <class F>
struct Realised {
    Algebra<F> alg;
    std::vector<std::size_t> basis_to_host;
    std::vector<std::size_t> vertex_to_host;
};

/// e_J A e_J, which is End_A(A e_J)^op: Hom(A e_a, A e_b) = e_a A e_b acting by
/// right multiplication.
template <class F>
Realised<F> corner_algebra(const Algebra<F>& a, const std::vector<std::size_t>& J) {
    Realised<F> out;
    std::vector<long> vpos(a.nverts(), -1);
    for (std::size_t k = 0; k < J.size(); ++k) {
        if (J[k] >= a.nverts()) throw AlgebraError("vertex out of range");
        if (vpos[J[k]] >= 0) throw AlgebraError("repeated vertex in corner");
        vpos[J[k]] = static_cast<long>(k);
    }
    std::vector<long> bpos(a.dim(), -1);
    Algebra<F>& e = out.alg;
    e.field = a.field;
    e.name = "End(P)^op";
    for (std::size_t i = 0; i < a.dim(); ++i)
        if (vpos[a.lv[i]] >= 0 && vpos[a.rv[i]] >= 0) {
            bpos[i] = static_cast<long>(out.basis_to_host.size());
            out.basis_to_host.push_back(i);
            e.labels.push_back(a.labels[i]);
            e.lv.push_back(static_cast<std::size_t>(vpos[a.lv[i]]));
            e.rv.push_back(static_cast<std::size_t>(vpos[a.rv[i]]));
            e.in_rad.push_back(a.in_rad[i]);
        }
    for (auto v : J) {
        e.idem.push_back(static_cast<std::size_t>(bpos[a.idem[v]]));
        e.vertex_labels.push_back(a.vertex_labels[v]);
        out.vertex_to_host.push_back(v);
    }
    std::vector<std::size_t> cls;
    for (auto v : J) cls.push_back(a.vclass[v]);
    e.vclass.clear();
    for (std::size_t k = 0; k < J.size(); ++k) {
        std::size_t c = k;
        for (std::size_t l = 0; l < k; ++l)
            if (cls[l] == cls[k]) { c = e.vclass[l]; break; }
        e.vclass.push_back(c);
    }
    const std::size_t d = out.basis_to_host.size();
    e.table.assign(d, std::vector<Sparse<F>>(d));
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) {
            for (const auto& [k, v] : a.table[out.basis_to_host[i]][out.basis_to_host[j]]) {
                if (bpos[k] < 0) throw AlgebraError("corner is not closed under multiplication");
                e.table[i][j].push_back({static_cast<std::uint32_t>(bpos[k]), v});
            }
        }
    if (a.trace) {
        std::vector<typename F::value_type> t;
        for (auto i : out.basis_to_host) t.push_back((*a.trace)[i]);
        e.trace = t;
    }
    e.finalize();
    return out;
}

/// M_n(E) = End(P^n)^op for E = End(P)^op, realised through E's realisation.
template <class F>
Realised<F> matrix_algebra(const Realised<F>& er, std::size_t n) {
    const Algebra<F>& e = er.alg;
    const F& f = e.field;
    Realised<F> out;
    Algebra<F>& m = out.alg;
    m.field = f;
    m.name = "M" + std::to_string(n) + "(" + e.name + ")";
    const std::size_t de = e.dim(), r = e.nverts();
    auto idx = [&](std::size_t s, std::size_t t, std::size_t b) { return (s * n + t) * de + b; };
    for (std::size_t s = 0; s < n; ++s)
        for (std::size_t t = 0; t < n; ++t)
            for (std::size_t b = 0; b < de; ++b) {
                m.labels.push_back("E" + std::to_string(s + 1) + std::to_string(t + 1) + "." + e.labels[b]);
                m.lv.push_back(s * r + e.lv[b]);
                m.rv.push_back(t * r + e.rv[b]);
                m.in_rad.push_back(e.in_rad[b]);
                out.basis_to_host.push_back(er.basis_to_host[b]);
            }
    for (std::size_t s = 0; s < n; ++s)
        for (std::size_t v = 0; v < r; ++v) {
            m.idem.push_back(idx(s, s, e.idem[v]));
            m.vertex_labels.push_back(e.vertex_labels[v] + "#" + std::to_string(s + 1));
            m.vclass.push_back(e.vclass[v]);
            out.vertex_to_host.push_back(er.vertex_to_host[v]);
        }
    const std::size_t d = n * n * de;
    m.table.assign(d, std::vector<Sparse<F>>(d));
    for (std::size_t s = 0; s < n; ++s)
        for (std::size_t t = 0; t < n; ++t)
            for (std::size_t u = 0; u < n; ++u)
                for (std::size_t b = 0; b < de; ++b)
                    for (std::size_t c = 0; c < de; ++c) {
                        Sparse<F> p;
                        for (const auto& [k, v] : e.table[b][c])
                            p.push_back({static_cast<std::uint32_t>(idx(s, u, k)), v});
                        m.table[idx(s, t, b)][idx(t, u, c)] = std::move(p);
                    }
    if (e.trace) {
        std::vector<typename F::value_type> tr(d, f.zero());
        for (std::size_t s = 0; s < n; ++s)
            for (std::size_t b = 0; b < de; ++b) tr[idx(s, s, b)] = (*e.trace)[b];
        m.trace = tr;
    }
    m.finalize();
    return out;
}

// ---------------------------------------------------------------------------
// Symmetrising forms

enum class FormStatus { Found, NotSymmetric, Undetermined };

template <class F>
struct FormResult {
    FormStatus status = FormStatus::Undetermined;
    std::vector<typename F::value_type> phi;
    std::size_t solution_dim = 0;
    std::size_t candidates_tried = 0;
};

/// Solve phi(b_i b_j) = phi(b_j b_i), then look for a nondegenerate point:
/// basis vectors, pairwise sums, then seeded random combinations.  Over a
/// finite field whose solution space has at most `budget` points the scan is
/// exhaustive and a negative answer is certain.
template <class F>
FormResult<F> find_symmetric_form(const Algebra<F>& a, std::uint64_t seed, std::size_t budget = 4096) {
    using V = typename F::value_type;
    const F& f = a.field;
    const std::size_t d = a.dim();
    Matrix<F> sys(f, 0, d);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = i + 1; j < d; ++j) {
            std::vector<V> row(d, f.zero());
            for (const auto& [k, v] : a.table[i][j]) row[k] = f.add(row[k], v);
            for (const auto& [k, v] : a.table[j][i]) row[k] = f.sub(row[k], v);
            if (!is_zero_vec(f, row)) sys.append_row(row);
        }
    Matrix<F> sol = kernel_basis(sys);
    FormResult<F> res;
    res.solution_dim = sol.cols();
    const std::size_t m = sol.cols();
    auto combo = [&](const std::vector<V>& c) {
        std::vector<V> phi(d, f.zero());
        for (std::size_t t = 0; t < m; ++t) axpy(f, phi, c[t], sol.col(t));
        return phi;
    };
    auto test = [&](const std::vector<V>& c) {
        ++res.candidates_tried;
        auto phi = combo(c);
        if (rank(a.gram(phi)) == d) {
            res.status = FormStatus::Found;
            res.phi = phi;
            return true;
        }
        return false;
    };
    if (m == 0) {
        res.status = d == 0 ? FormStatus::Found : FormStatus::NotSymmetric;
        return res;
    }
    // exhaustive when small
    std::uint64_t q = f.size();
    if (q != 0) {
        std::uint64_t total = 1;
        bool small = true;
        for (std::size_t t = 0; t < m; ++t) {
            total *= q;
            if (total > budget) { small = false; break; }
        }
        if (small) {
            for (std::uint64_t code = 1; code < total; ++code) {
                std::vector<V> c(m);
                std::uint64_t x = code;
                for (std::size_t t = 0; t < m; ++t) { c[t] = f.element(x % q); x /= q; }
                if (test(c)) return res;
            }
            res.status = FormStatus::NotSymmetric;
            return res;
        }
    }
    for (std::size_t t = 0; t < m; ++t) {
        std::vector<V> c(m, f.zero());
        c[t] = f.one();
        if (test(c)) return res;
    }
    for (std::size_t s = 0; s < m; ++s)
        for (std::size_t t = s + 1; t < m; ++t) {
            std::vector<V> c(m, f.zero());
            c[s] = f.one();
            c[t] = f.one();
            if (test(c)) return res;
        }
    Rng rng(seed);
    for (std::size_t k = 0; k < budget; ++k) {
        std::vector<V> c(m);
        for (auto& x : c) x = f.random(rng);
        if (test(c)) return res;
    }
    res.status = FormStatus::Undetermined;
    return res;
}

// ---------------------------------------------------------------------------
// Morphisms

template <class F>
struct MorphismCheck {
    bool ok = true;
    std::string failure;  // empty when ok
    long first_i = -1, first_j = -1;
};

/// f is dim(target) x dim(source); columns are images of source basis elements.
template <class F>
MorphismCheck<F> check_morphism(const Algebra<F>& src, const Algebra<F>& tgt, const Matrix<F>& f) {
    MorphismCheck<F> r;
    if (f.rows() != tgt.dim() || f.cols() != src.dim()) {
        r.ok = false;
        r.failure = "matrix shape does not match the algebras";
        return r;
    }
    if (f.apply(src.unit()) != tgt.unit()) {
        r.ok = false;
        r.failure = "not unital";
        return r;
    }
    std::vector<std::vector<typename F::value_type>> img(src.dim());
    for (std::size_t i = 0; i < src.dim(); ++i) img[i] = f.col(i);
    for (std::size_t i = 0; i < src.dim(); ++i)
        for (std::size_t j = 0; j < src.dim(); ++j) {
            auto lhs = f.apply(src.to_dense(src.table[i][j]));
            auto rhs = tgt.mul(img[i], img[j]);
            if (lhs != rhs) {
                r.ok = false;
                r.first_i = static_cast<long>(i);
                r.first_j = static_cast<long>(j);
                r.failure = "not multiplicative at (" + src.labels[i] + "," + src.labels[j] + ")";
                return r;
            }
        }
    return r;
}

/// Connected components of the vertex graph u ~ w when e_u A e_w != 0.
template <class F>
std::vector<std::vector<std::size_t>> algebra_blocks(const Algebra<F>& a) {
    const std::size_t r = a.nverts();
    std::vector<std::size_t> comp(r);
    for (std::size_t v = 0; v < r; ++v) comp[v] = v;
    std::function<std::size_t(std::size_t)> find = [&](std::size_t x) {
        return comp[x] == x ? x : comp[x] = find(comp[x]);
    };
    for (std::size_t i = 0; i < a.dim(); ++i) comp[find(a.lv[i])] = find(a.rv[i]);
    std::map<std::size_t, std::vector<std::size_t>> groups;
    for (std::size_t v = 0; v < r; ++v) groups[find(v)].push_back(v);
    std::vector<std::vector<std::size_t>> out;
    for (auto& [k, g] : groups) out.push_back(g);
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace ptw
