#pragma once

// Algebra text files and JSON serialisation.
//
//   # comment
//   [algebra]
//   name = brauer
//   p = 3                      (0 means the rationals)
//   [quiver]
//   vertices = 1, 2
//   arrow = a 1 2
//   arrow = b 2 1
//   relation = a*b*a
//   relation = b*a*b - 2 b*a*b
//   max_path_len = 4
//
// or, instead of [quiver],
//
//   [table]
//   basis = e1, e2, x
//   product = x * x = 0        (omitted products are zero)
//   product = e1 * x = x
//   unit = e1 + e2
//   idempotents = e1, e2
//   trace = x                  (optional symmetrising form, phi(b) = coefficient)
//
// Paths compose left to right: a*b is a followed by b.

#include <fstream>
#include <regex>
#include <sstream>

#include <json.hpp>

#include "ptw/algebra.hpp"
#include "ptw/complex.hpp"
#include "ptw/periodicity.hpp"

namespace ptw {

struct ParseError : std::runtime_error {
    std::size_t line, column;
    ParseError(std::size_t l, std::size_t c, const std::string& msg)
        : std::runtime_error("line " + std::to_string(l) + ", column " + std::to_string(c) + ": " + msg), line(l),
          column(c) {}
};

/// A relation or basis element with a location, e.g. "a*q" at line 7 column 12.
struct LocatedMalformedRelation : MalformedRelation {
    std::size_t line, column;
    LocatedMalformedRelation(std::size_t l, std::size_t c, const std::string& msg)
        : MalformedRelation("MalformedRelation at line " + std::to_string(l) + ", column " + std::to_string(c) + ": " +
                            msg),
          line(l), column(c) {}
};

struct NonSplitInput : AlgebraError {
    using AlgebraError::AlgebraError;
};

struct TextTerm {
    std::string coeff = "1";  // possibly with a leading '-'
    std::vector<std::string> names;
    std::vector<std::size_t> columns;
    std::size_t column = 0;
};

struct TextComb {
    std::vector<TextTerm> terms;
    std::size_t line = 0, column = 0;
};

struct AlgebraText {
    std::string name = "algebra";
    long p = -1;
    std::size_t algebra_line = 0;
    enum class Kind { None, Quiver, Table } kind = Kind::None;
    std::size_t kind_line = 0;

    struct ArrowDecl {
        std::string name, from, to;
        std::size_t line, column;
    };
    std::vector<std::string> vertices;
    std::size_t vertices_line = 0;
    std::vector<ArrowDecl> arrows;
    std::vector<TextComb> relations;
    std::size_t max_path_len = 8;

    struct Product {
        std::string left, right;
        TextComb value;
        std::size_t line, column;
    };
    std::vector<std::string> basis;
    std::size_t basis_line = 0;
    std::vector<Product> products;
    std::optional<TextComb> unit, trace;
    std::vector<TextComb> idempotents;
};

namespace detail {

inline bool name_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\''; }

inline std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

/// Split on commas, tracking the 1-based column of each trimmed piece.
inline std::vector<std::pair<std::string, std::size_t>> split_list(const std::string& s, std::size_t col0, char sep = ',') {
    std::vector<std::pair<std::string, std::size_t>> out;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= s.size(); ++i) {
        if (i < s.size() && s[i] != sep) continue;
        std::string piece = s.substr(start, i - start);
        auto lead = piece.find_first_not_of(" \t\r");
        if (lead != std::string::npos) out.push_back({trim(piece), col0 + start + lead});
        start = i + 1;
    }
    return out;
}

/// Linear combination such as "2 a*b - c*d + 1/2 e" or "0".
inline TextComb parse_comb(const std::string& s, std::size_t line, std::size_t col0) {
    TextComb c;
    c.line = line;
    c.column = col0;
    std::size_t i = 0;
    auto skip = [&] {
        while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\r')) ++i;
    };
    auto err = [&](const std::string& m) { return ParseError(line, col0 + i, m); };
    skip();
    if (trim(s) == "0") return c;
    bool first = true;
    while (true) {
        skip();
        if (i >= s.size()) {
            if (first) throw err("expected a linear combination");
            break;
        }
        TextTerm t;
        t.column = col0 + i;
        bool neg = false;
        if (s[i] == '+' || s[i] == '-') {
            neg = s[i] == '-';
            ++i;
            skip();
        } else if (!first) {
            throw err("expected '+' or '-'");
        }
        first = false;
        std::string coeff;
        if (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) {
            std::size_t b = i;
            while (i < s.size() && (std::isdigit(static_cast<unsigned char>(s[i])) || s[i] == '/')) ++i;
            coeff = s.substr(b, i - b);
            skip();
            if (i < s.size() && s[i] == '*') {
                ++i;
                skip();
            }
        }
        // a bare number followed by a name is a coefficient; a bare number at
        // the end of a term is a scalar multiple of nothing, which is an error
        while (i < s.size() && name_char(s[i])) {
            std::size_t b = i;
            while (i < s.size() && name_char(s[i])) ++i;
            t.names.push_back(s.substr(b, i - b));
            t.columns.push_back(col0 + b);
            skip();
            if (i < s.size() && s[i] == '*') {
                ++i;
                skip();
                if (i >= s.size() || !name_char(s[i])) throw err("expected a name after '*'");
            } else {
                break;
            }
        }
        if (t.names.empty()) throw err("expected a name");
        if (coeff.empty()) coeff = "1";
        t.coeff = neg ? "-" + coeff : coeff;
        c.terms.push_back(std::move(t));
        skip();
    }
    return c;
}

}  // namespace detail

inline AlgebraText parse_algebra_text(const std::string& text) {
    AlgebraText t;
    std::istringstream in(text);
    std::string raw;
    std::size_t ln = 0;
    enum class Sec { None, Algebra, Quiver, Table } sec = Sec::None;
    while (std::getline(in, raw)) {
        ++ln;
        std::string line = raw;
        if (auto h = line.find('#'); h != std::string::npos) line = line.substr(0, h);
        if (detail::trim(line).empty()) continue;
        const std::size_t indent = line.find_first_not_of(" \t") + 1;
        std::string s = detail::trim(line);
        if (s.front() == '[') {
            if (s.back() != ']') throw ParseError(ln, indent, "unterminated section header");
            std::string name = s.substr(1, s.size() - 2);
            if (name == "algebra") {
                sec = Sec::Algebra;
                t.algebra_line = ln;
            } else if (name == "quiver" || name == "table") {
                auto k = name == "quiver" ? AlgebraText::Kind::Quiver : AlgebraText::Kind::Table;
                if (t.kind != AlgebraText::Kind::None && t.kind != k)
                    throw ParseError(ln, indent, "a file has either a [quiver] or a [table] section, not both");
                t.kind = k;
                t.kind_line = ln;
                sec = name == "quiver" ? Sec::Quiver : Sec::Table;
            } else {
                throw ParseError(ln, indent, "unknown section [" + name + "]");
            }
            continue;
        }
        auto eq = line.find('=');
        if (eq == std::string::npos) throw ParseError(ln, indent, "expected 'key = value'");
        std::string key = detail::trim(line.substr(0, eq));
        std::string value = line.substr(eq + 1);
        const std::size_t vcol = eq + 2;  // 1-based column of the first value character
        auto vstart = [&] {
            auto p = value.find_first_not_of(" \t");
            return p == std::string::npos ? vcol : vcol + p;
        };
        switch (sec) {
            case Sec::None: throw ParseError(ln, indent, "key '" + key + "' outside a section");
            case Sec::Algebra:
                if (key == "name") {
                    t.name = detail::trim(value);
                } else if (key == "p") {
                    try {
                        std::size_t pos = 0;
                        auto v = detail::trim(value);
                        t.p = std::stol(v, &pos);
                        if (pos != v.size() || t.p < 0) throw std::invalid_argument("p");
                    } catch (const std::exception&) {
                        throw ParseError(ln, vstart(), "p must be 0 or a prime");
                    }
                } else {
                    throw ParseError(ln, indent, "unknown key '" + key + "' in [algebra]");
                }
                break;
            case Sec::Quiver:
                if (key == "vertices") {
                    t.vertices_line = ln;
                    for (auto& [v, c] : detail::split_list(value, vcol)) {
                        for (char ch : v)
                            if (!detail::name_char(ch)) throw ParseError(ln, c, "bad vertex name '" + v + "'");
                        t.vertices.push_back(v);
                    }
                } else if (key == "arrow") {
                    auto parts = detail::split_list(value, vcol, ' ');
                    if (parts.size() != 3) throw ParseError(ln, vstart(), "an arrow is 'name from to'");
                    for (auto& [v, c] : parts)
                        for (char ch : v)
                            if (!detail::name_char(ch)) throw ParseError(ln, c, "bad name '" + v + "'");
                    t.arrows.push_back({parts[0].first, parts[1].first, parts[2].first, ln, parts[0].second});
                } else if (key == "relation") {
                    auto c = detail::parse_comb(value, ln, vcol);
                    if (c.terms.empty()) throw ParseError(ln, vstart(), "a relation cannot be 0");
                    t.relations.push_back(std::move(c));
                } else if (key == "max_path_len") {
                    try {
                        t.max_path_len = std::stoul(detail::trim(value));
                    } catch (const std::exception&) {
                        throw ParseError(ln, vstart(), "max_path_len must be a nonnegative integer");
                    }
                } else {
                    throw ParseError(ln, indent, "unknown key '" + key + "' in [quiver]");
                }
                break;
            case Sec::Table:
                if (key == "basis") {
                    t.basis_line = ln;
                    for (auto& [v, c] : detail::split_list(value, vcol)) {
                        for (char ch : v)
                            if (!detail::name_char(ch)) throw ParseError(ln, c, "bad basis label '" + v + "'");
                        if (std::isdigit(static_cast<unsigned char>(v[0])))
                            throw ParseError(ln, c, "basis labels start with a letter");
                        t.basis.push_back(v);
                    }
                } else if (key == "product") {
                    auto eq2 = value.find('=');
                    if (eq2 == std::string::npos) throw ParseError(ln, vstart(), "a product is 'x * y = combination'");
                    auto lhs = detail::split_list(value.substr(0, eq2), vcol, '*');
                    if (lhs.size() != 2) throw ParseError(ln, vstart(), "a product is 'x * y = combination'");
                    t.products.push_back({lhs[0].first, lhs[1].first,
                                          detail::parse_comb(value.substr(eq2 + 1), ln, vcol + eq2 + 1), ln,
                                          lhs[0].second});
                } else if (key == "unit") {
                    t.unit = detail::parse_comb(value, ln, vcol);
                } else if (key == "idempotents") {
                    for (auto& [v, c] : detail::split_list(value, vcol)) t.idempotents.push_back(detail::parse_comb(v, ln, c));
                } else if (key == "trace") {
                    t.trace = detail::parse_comb(value, ln, vcol);
                } else {
                    throw ParseError(ln, indent, "unknown key '" + key + "' in [table]");
                }
                break;
        }
    }
    if (t.p < 0) throw ParseError(t.algebra_line ? t.algebra_line : 1, 1, "[algebra] must set p");
    if (t.kind == AlgebraText::Kind::None) throw ParseError(ln ? ln : 1, 1, "missing [quiver] or [table] section");
    return t;
}

inline AlgebraText read_algebra_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_algebra_text(ss.str());
}

namespace detail {

template <class F>
typename F::value_type parse_scalar(const F& f, const TextTerm& t, std::size_t line) {
    try {
        return f.parse(t.coeff);
    } catch (const std::exception& e) {
        throw ParseError(line, t.column, e.what());
    }
}

/// Dense coordinates of a combination of basis labels (each term one label).
template <class F>
std::vector<typename F::value_type> comb_vector(const F& f, const TextComb& c, const std::vector<std::string>& basis) {
    std::vector<typename F::value_type> v(basis.size(), f.zero());
    for (const auto& t : c.terms) {
        if (t.names.size() != 1) throw ParseError(c.line, t.columns[1], "table entries are combinations of basis labels");
        auto it = std::find(basis.begin(), basis.end(), t.names[0]);
        if (it == basis.end()) throw ParseError(c.line, t.columns[0], "unknown basis label '" + t.names[0] + "'");
        auto k = static_cast<std::size_t>(it - basis.begin());
        v[k] = f.add(v[k], parse_scalar(f, t, c.line));
    }
    return v;
}

}  // namespace detail

/// Build the algebra over f.  Symmetrising forms are not searched here.
template <class F>
Algebra<F> build_algebra(const F& f, const AlgebraText& t) {
    if (t.kind == AlgebraText::Kind::Quiver) {
        QuiverPresentation<F> q;
        q.name = t.name;
        q.vertices = t.vertices;
        q.max_path_len = t.max_path_len;
        if (t.vertices.empty()) throw ParseError(t.kind_line, 1, "the quiver needs vertices");
        std::map<std::string, std::size_t> vix, aix;
        for (std::size_t v = 0; v < t.vertices.size(); ++v)
            if (!vix.emplace(t.vertices[v], v).second)
                throw ParseError(t.vertices_line, 1, "duplicate vertex '" + t.vertices[v] + "'");
        for (const auto& a : t.arrows) {
            auto fr = vix.find(a.from), to = vix.find(a.to);
            if (fr == vix.end()) throw ParseError(a.line, a.column, "arrow " + a.name + ": unknown vertex '" + a.from + "'");
            if (to == vix.end()) throw ParseError(a.line, a.column, "arrow " + a.name + ": unknown vertex '" + a.to + "'");
            if (!aix.emplace(a.name, q.arrows.size()).second)
                throw ParseError(a.line, a.column, "duplicate arrow '" + a.name + "'");
            q.arrows.push_back({a.name, fr->second, to->second});
        }
        for (const auto& rel : t.relations) {
            std::vector<RelationTerm<F>> terms;
            for (const auto& term : rel.terms) {
                RelationTerm<F> rt;
                rt.coeff = detail::parse_scalar(f, term, rel.line);
                for (std::size_t k = 0; k < term.names.size(); ++k) {
                    auto it = aix.find(term.names[k]);
                    if (it == aix.end())
                        throw LocatedMalformedRelation(rel.line, term.columns[k],
                                                       "'" + term.names[k] + "' is not an arrow");
                    rt.path.push_back(it->second);
                }
                if (!f.is_zero(rt.coeff)) terms.push_back(std::move(rt));
            }
            if (terms.empty()) throw LocatedMalformedRelation(rel.line, rel.column, "relation is zero over this field");
            q.relations.push_back(std::move(terms));
        }
        try {
            return build_from_quiver(f, q);
        } catch (const MalformedRelation& e) {
            // "relation k ..." carries the index; point at its line
            std::string m = e.what();
            std::smatch sm;
            if (std::regex_search(m, sm, std::regex("^relation (\\d+)"))) {
                auto k = std::stoul(sm[1]) - 1;
                if (k < t.relations.size())
                    throw LocatedMalformedRelation(t.relations[k].line, t.relations[k].column, m);
            }
            throw;
        }
    }
    const std::size_t d = t.basis.size();
    if (d == 0) throw ParseError(t.kind_line, 1, "the table needs a basis");
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = i + 1; j < d; ++j)
            if (t.basis[i] == t.basis[j]) throw ParseError(t.basis_line, 1, "duplicate basis label '" + t.basis[i] + "'");
    if (t.idempotents.empty())
        throw NonSplitInput("NonSplitInput (line " + std::to_string(t.kind_line) +
                            "): a table needs its primitive orthogonal idempotents; they are not computed from the "
                            "table, so a non-split algebra cannot be entered");
    std::vector<std::vector<Sparse<F>>> table(d, std::vector<Sparse<F>>(d));
    std::vector<std::vector<char>> seen(d, std::vector<char>(d, 0));
    auto index = [&](const std::string& s, std::size_t line, std::size_t col) {
        auto it = std::find(t.basis.begin(), t.basis.end(), s);
        if (it == t.basis.end()) throw ParseError(line, col, "unknown basis label '" + s + "'");
        return static_cast<std::size_t>(it - t.basis.begin());
    };
    for (const auto& pr : t.products) {
        auto i = index(pr.left, pr.line, pr.column), j = index(pr.right, pr.line, pr.column);
        if (seen[i][j]) throw ParseError(pr.line, pr.column, "product " + pr.left + " * " + pr.right + " given twice");
        seen[i][j] = 1;
        auto v = detail::comb_vector(f, pr.value, t.basis);
        for (std::size_t k = 0; k < d; ++k)
            if (!f.is_zero(v[k])) table[i][j].push_back({static_cast<std::uint32_t>(k), v[k]});
    }
    std::vector<std::vector<typename F::value_type>> idem;
    for (const auto& e : t.idempotents) idem.push_back(detail::comb_vector(f, e, t.basis));
    if (t.unit) {
        auto u = detail::comb_vector(f, *t.unit, t.basis);
        std::vector<typename F::value_type> s(d, f.zero());
        for (const auto& e : idem)
            for (std::size_t k = 0; k < d; ++k) s[k] = f.add(s[k], e[k]);
        if (u != s) throw ParseError(t.unit->line, t.unit->column, "the unit is not the sum of the idempotents");
    }
    std::optional<std::vector<typename F::value_type>> trace;
    if (t.trace) trace = detail::comb_vector(f, *t.trace, t.basis);
    return adapt_basis(f, t.name, t.basis, table, idem, trace);
}

// ---------------------------------------------------------------------------
// JSON

using Json = nlohmann::ordered_json;

template <class F>
Json matrix_json(const Matrix<F>& m, const F& f) {
    Json rows = Json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(f.to_string(m(i, j)));
        rows.push_back(std::move(row));
    }
    return rows;
}

template <class F>
Json vector_json(const std::vector<typename F::value_type>& v, const F& f) {
    Json a = Json::array();
    for (const auto& x : v) a.push_back(f.to_string(x));
    return a;
}

template <class F>
std::string field_name(const F& f) {
    return f.size() == 0 ? "Q" : "F" + std::to_string(f.size());
}

/// Canonical form: labels, dense structure constants table[i][j][k] with
/// b_i b_j = sum_k table[i][j][k] b_k, idempotent indices, and phi.
template <class F>
Json algebra_json(const Algebra<F>& a) {
    const F& f = a.field;
    Json j;
    j["name"] = a.name;
    j["field"] = field_name(f);
    j["dim"] = a.dim();
    j["labels"] = a.labels;
    j["vertices"] = a.vertex_labels;
    j["idempotents"] = a.idem;
    Json table = Json::array();
    for (std::size_t i = 0; i < a.dim(); ++i) {
        Json row = Json::array();
        for (std::size_t k = 0; k < a.dim(); ++k) row.push_back(vector_json(a.to_dense(a.table[i][k]), f));
        table.push_back(std::move(row));
    }
    j["table"] = std::move(table);
    j["phi"] = a.trace ? vector_json(*a.trace, f) : Json(nullptr);
    return j;
}

template <class F>
Json complex_json(const Complex<F>& X) {
    const F& f = X.field();
    Json j;
    j["lo"] = X.lo;
    j["hi"] = X.terms.empty() ? X.lo - 1 : X.hi();
    Json terms = Json::array();
    for (int i = X.lo; i <= X.hi(); ++i) {
        Json t;
        t["degree"] = i;
        Json blocks = Json::array();
        for (const auto& b : X.blocks(i)) {
            if (b.kind == BlockKind::Proj) {
                if (X.base) {
                    const std::size_t r = X.base->nverts();
                    blocks.push_back("P" + X.base->vertex_labels[b.v / r] + "(x)P" + X.base->vertex_labels[b.v % r] + "^v");
                } else {
                    blocks.push_back("P" + X.ring->vertex_labels[b.v]);
                }
            } else if (b.kind == BlockKind::Diag) {
                blocks.push_back("A");
            } else {
                blocks.push_back("M" + std::to_string(b.mod->dim));
            }
        }
        t["blocks"] = std::move(blocks);
        t["dim"] = X.dim(i);
        terms.push_back(std::move(t));
    }
    j["terms"] = std::move(terms);
    Json d = Json::array();
    for (int i = X.lo; i < X.hi(); ++i) d.push_back(matrix_json(X.diff(i), f));
    j["differentials"] = std::move(d);
    return j;
}

inline Json report_json(const VerifyReport& r) {
    Json a = Json::array();
    for (const auto& c : r.checks) a.push_back(Json{{"name", c.name}, {"ok", c.ok}, {"detail", c.detail}});
    return a;
}

template <class F>
Json resolution_json(const TruncatedResolution<F>& t) {
    const F& f = t.E->field;
    Json j;
    j["period"] = t.n;
    Json perm = Json::array();
    for (auto v : t.perm) perm.push_back(t.E->vertex_labels[v]);
    j["sigma_vertices"] = std::move(perm);
    j["sigma"] = matrix_json(t.sigma, f);
    j["complex"] = complex_json(t.Y);
    j["augmentation"] = matrix_json(t.aug, f);
    j["kernel_generator"] = vector_json(t.k, f);
    j["kernel_embedding"] = matrix_json(t.theta, f);
    return j;
}

}  // namespace ptw
