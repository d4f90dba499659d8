#pragma once

// Named example algebras.

#include <array>
#include <optional>
#include <regex>
#include <string>

#include "ptw/algebra.hpp"

namespace ptw {

/// phi = 1 on every radical loop basis element annihilated on both sides by
/// the radical (the socle of each local corner), 0 elsewhere.
template <class F>
std::vector<typename F::value_type> socle_trace(const Algebra<F>& a) {
    const F& f = a.field;
    std::vector<typename F::value_type> phi(a.dim(), f.zero());
    for (std::size_t i = 0; i < a.dim(); ++i) {
        if (!a.in_rad[i] || a.lv[i] != a.rv[i]) continue;
        bool soc = true;
        for (auto r : a.arrows)
            if (!a.table[i][r].empty() || !a.table[r][i].empty()) soc = false;
        if (soc) phi[i] = f.one();
    }
    return phi;
}

template <class F>
Algebra<F> with_trace(Algebra<F> a, std::vector<typename F::value_type> phi) {
    a.trace = std::move(phi);
    a.finalize(false);
    return a;
}

/// k[x]/(x^{n+1}).
template <class F>
Algebra<F> truncated_polynomial(const F& f, std::size_t n) {
    QuiverPresentation<F> q;
    q.name = "k[x]/(x^" + std::to_string(n + 1) + ")";
    q.vertices = {"1"};
    q.arrows = {{"x", 0, 0}};
    q.relations = {{{f.one(), std::vector<std::size_t>(n + 1, 0)}}};
    q.max_path_len = n + 1;
    auto a = build_from_quiver(f, q);
    return with_trace(a, socle_trace(a));
}

/// Trivial extension of the A2 path algebra: a:1->2, b:2->1, aba = bab = 0.
template <class F>
Algebra<F> a2_trivial_extension(const F& f) {
    QuiverPresentation<F> q;
    q.name = "A2-trivial-extension";
    q.vertices = {"1", "2"};
    q.arrows = {{"a", 0, 1}, {"b", 1, 0}};
    q.relations = {{{f.one(), {0, 1, 0}}}, {{f.one(), {1, 0, 1}}}};
    q.max_path_len = 4;
    auto a = build_from_quiver(f, q);
    return with_trace(a, socle_trace(a));
}

/// Brauer tree algebra of the line with three vertices:
/// a:1->2, b:2->1, c:2->3, d:3->2 with aba = bab = dcd = cdc = 0,
/// ac = db = 0 and ba = cd.
template <class F>
QuiverPresentation<F> brauer_line_3_presentation(const F& f) {
    QuiverPresentation<F> q;
    q.name = "brauer-line-3";
    q.vertices = {"1", "2", "3"};
    q.arrows = {{"a", 0, 1}, {"b", 1, 0}, {"c", 1, 2}, {"d", 2, 1}};
    q.relations = {
        {{f.one(), {0, 1, 0}}}, {{f.one(), {1, 0, 1}}}, {{f.one(), {3, 2, 3}}}, {{f.one(), {2, 3, 2}}},
        {{f.one(), {0, 2}}},    {{f.one(), {3, 1}}},    {{f.one(), {1, 0}}, {f.neg(f.one()), {2, 3}}},
    };
    q.max_path_len = 5;
    return q;
}

template <class F>
Algebra<F> brauer_line_3(const F& f) {
    auto a = build_from_quiver(f, brauer_line_3_presentation(f));
    return with_trace(a, socle_trace(a));
}

/// Path algebra of 1 -> 2 (upper triangular 2x2 matrices); not symmetric.
template <class F>
Algebra<F> upper_triangular_2(const F& f) {
    QuiverPresentation<F> q;
    q.name = "upper-triangular-2";
    q.vertices = {"1", "2"};
    q.arrows = {{"a", 0, 1}};
    q.max_path_len = 2;
    return build_from_quiver(f, q);
}

namespace detail {
// quaternion units: index 0..7 = 1, i, j, k, -1, -i, -j, -k
inline std::size_t q8_mul(std::size_t x, std::size_t y) {
    static const int unit[4][4] = {{0, 1, 2, 3}, {1, 0, 3, 2}, {2, 3, 0, 1}, {3, 2, 1, 0}};
    static const int sign[4][4] = {{0, 0, 0, 0}, {0, 1, 0, 1}, {0, 1, 1, 0}, {0, 0, 1, 1}};
    std::size_t ux = x % 4, uy = y % 4;
    std::size_t s = (x / 4 + y / 4 + static_cast<std::size_t>(sign[ux][uy])) % 2;
    return static_cast<std::size_t>(unit[ux][uy]) + 4 * s;
}
}  // namespace detail

/// Group algebra of the quaternion group of order 8, re-based so that the
/// identity is the vertex idempotent and the rest spans the augmentation ideal.
/// `elements`, if set, receives the coordinates of 1, i, j, k, -1, -i, -j, -k.
template <class F>
Algebra<F> quaternion_group_algebra(const F& f, std::vector<std::vector<typename F::value_type>>* elements = nullptr) {
    static const char* names[8] = {"1", "i", "j", "k", "-1", "-i", "-j", "-k"};
    std::vector<std::string> labels(names, names + 8);
    std::vector<std::vector<Sparse<F>>> table(8, std::vector<Sparse<F>>(8));
    for (std::size_t x = 0; x < 8; ++x)
        for (std::size_t y = 0; y < 8; ++y)
            table[x][y] = {{static_cast<std::uint32_t>(detail::q8_mul(x, y)), f.one()}};
    std::vector<typename F::value_type> one(8, f.zero()), tr(8, f.zero());
    one[0] = f.one();
    tr[0] = f.one();
    Matrix<F> to_new(f, 0, 0);
    auto a = adapt_basis(f, "kQ8", labels, table, {one}, tr, &to_new);
    if (elements) {
        elements->clear();
        for (std::size_t g = 0; g < 8; ++g) elements->push_back(to_new.col(g));
    }
    return a;
}

struct FixtureName {
    std::string kind;  // kxn, a2_te, brauer_line_3, kq8
    std::uint32_t p = 2;
    std::size_t n = 1;
};

/// Parse kx2_p2, kx2_p3, kxn_p{p}_n{n}, a2_te_p{p}, brauer_line_3_p{p}, kq8_p2.
inline std::optional<FixtureName> parse_fixture_name(const std::string& s) {
    std::smatch m;
    if (std::regex_match(s, m, std::regex("kx2_p(\\d+)")))
        return FixtureName{"kxn", static_cast<std::uint32_t>(std::stoul(m[1])), 1};
    if (std::regex_match(s, m, std::regex("kxn_p(\\d+)_n(\\d+)")))
        return FixtureName{"kxn", static_cast<std::uint32_t>(std::stoul(m[1])), std::stoul(m[2])};
    if (std::regex_match(s, m, std::regex("a2_te_p(\\d+)")))
        return FixtureName{"a2_te", static_cast<std::uint32_t>(std::stoul(m[1])), 0};
    if (std::regex_match(s, m, std::regex("brauer_line_3_p(\\d+)")))
        return FixtureName{"brauer_line_3", static_cast<std::uint32_t>(std::stoul(m[1])), 0};
    if (std::regex_match(s, m, std::regex("kq8_p(\\d+)")))
        return FixtureName{"kq8", static_cast<std::uint32_t>(std::stoul(m[1])), 0};
    return std::nullopt;
}

template <class F>
Algebra<F> make_fixture(const F& f, const FixtureName& fx) {
    if (fx.kind == "kxn") {
        if (fx.n == 0 || fx.n > 16) throw AlgebraError("kxn: n must be in 1..16");
        return truncated_polynomial(f, fx.n);
    }
    if (fx.kind == "a2_te") return a2_trivial_extension(f);
    if (fx.kind == "brauer_line_3") return brauer_line_3(f);
    if (fx.kind == "kq8") return quaternion_group_algebra(f);
    throw AlgebraError("unknown fixture kind " + fx.kind);
}

}  // namespace ptw
