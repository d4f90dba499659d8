// Command-line front end: algebra-check, resolve, periodicity, twist, compose,
// inverse, tilt, circle, verify-all.
//
// Exit codes: 0 every check passed, 1 a check failed, 2 bad input,
// 3 only undetermined results (a search budget ran out).

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>

#include "ptw/fixtures.hpp"
#include "ptw/io.hpp"
#include "ptw/tilting.hpp"

using namespace ptw;

namespace {

struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Job {
    std::string command, fixture, file, J, with_J, then_J, compare_J, module, out, inject;
    std::string format = "json";
    std::size_t steps = 0, max_period = 8;
    std::optional<std::size_t> budget;
    std::uint64_t seed = 0;
};

struct Outcome {
    Json data = Json::object();
    VerifyReport checks;
    std::vector<std::string> text;  // summary lines for --format text
};

bool undetermined(const CheckLine& c) {
    for (const char* s : {"UNDETERMINED", "Undetermined", "DepthExceeded", "within budget"})
        if (c.detail.find(s) != std::string::npos) return true;
    return false;
}

int exit_code(const VerifyReport& r) {
    bool undet = false;
    for (const auto& c : r.checks) {
        if (c.ok) continue;
        if (!undetermined(c)) return 1;
        undet = true;
    }
    return undet ? 3 : 0;
}

std::string status_name(int code) { return code == 0 ? "pass" : code == 1 ? "fail" : "undetermined"; }

template <class F>
std::vector<std::size_t> parse_vertices(const Algebra<F>& A, const std::string& s, char sep = ',') {
    std::vector<std::size_t> out;
    for (auto& [tok, col] : detail::split_list(s, 1, sep)) {
        (void)col;
        auto it = std::find(A.vertex_labels.begin(), A.vertex_labels.end(), tok);
        if (it != A.vertex_labels.end()) {
            out.push_back(static_cast<std::size_t>(it - A.vertex_labels.begin()));
            continue;
        }
        std::size_t pos = 0;
        unsigned long v = 0;
        try {
            v = std::stoul(tok, &pos);
        } catch (const std::exception&) {
            pos = 0;
        }
        if (pos != tok.size() || v == 0 || v > A.nverts())
            throw InputError("'" + tok + "' is not a vertex of " + A.name);
        out.push_back(v - 1);
    }
    if (out.empty()) throw InputError("empty vertex list");
    return out;
}

template <class F>
std::vector<std::size_t> require_J(const Job& job, const Algebra<F>& A) {
    if (job.J.empty()) throw InputError(job.command + " needs --J");
    return parse_vertices(A, job.J);
}

template <class F>
Json vertex_list(const Algebra<F>& A, const std::vector<std::size_t>& vs) {
    Json a = Json::array();
    for (auto v : vs) a.push_back(A.vertex_labels[v]);
    return a;
}

std::size_t budget_or(const Job& job, std::size_t fallback) { return job.budget ? *job.budget : fallback; }

template <class F>
Json map_json(const std::map<int, std::size_t>& m) {
    Json j = Json::object();
    for (const auto& [k, v] : m) j[std::to_string(k)] = v;
    return j;
}

template <class F>
bool valid_module(const Module<F>& m, std::string& why) {
    const auto& A = *m.alg;
    if (m.act.size() != A.dim()) {
        why = "expected " + std::to_string(A.dim()) + " action matrices";
        return false;
    }
    for (const auto& a : m.act)
        if (a.rows() != m.dim || a.cols() != m.dim) {
            why = "action matrices must be square of the module dimension";
            return false;
        }
    if (m.rho(A.unit()) != Matrix<F>::identity(A.field, m.dim)) {
        why = "the unit does not act as the identity";
        return false;
    }
    for (std::size_t i = 0; i < A.dim(); ++i)
        for (std::size_t j = 0; j < A.dim(); ++j)
            if (m.act[i] * m.act[j] != m.rho(A.to_dense(A.table[i][j]))) {
                why = "action is not multiplicative at (" + A.labels[i] + ", " + A.labels[j] + ")";
                return false;
            }
    return true;
}

/// "projective:i", "simple:i", "regular" or a JSON array of action matrices.
template <class F>
Module<F> parse_module(AlgebraPtr<F> A, const std::string& spec) {
    auto vertex = [&](const std::string& s) { return parse_vertices(*A, s).at(0); };
    if (spec == "regular") return regular_module(A);
    if (spec.rfind("projective:", 0) == 0) return projective(A, vertex(spec.substr(11)));
    if (spec.rfind("simple:", 0) == 0) return simple(A, vertex(spec.substr(7)));
    Json j;
    try {
        j = Json::parse(spec);
    } catch (const std::exception& e) {
        throw InputError(std::string("module spec is neither a keyword nor JSON: ") + e.what());
    }
    if (!j.is_array() || j.empty()) throw InputError("inline module: expected an array of action matrices");
    Module<F> m;
    m.alg = A;
    m.dim = j[0].size();
    for (const auto& mat : j) {
        Matrix<F> a(A->field, m.dim, m.dim);
        if (mat.size() != m.dim) throw InputError("inline module: ragged matrices");
        for (std::size_t r = 0; r < m.dim; ++r) {
            if (mat[r].size() != m.dim) throw InputError("inline module: ragged matrices");
            for (std::size_t c = 0; c < m.dim; ++c) {
                const auto& x = mat[r][c];
                try {
                    a(r, c) = A->field.parse(x.is_string() ? x.get<std::string>() : x.dump());
                } catch (const std::exception& e) {
                    throw InputError(std::string("inline module: ") + e.what());
                }
            }
        }
        m.act.push_back(std::move(a));
    }
    std::string why;
    if (!valid_module(m, why)) throw InputError("inline module: " + why);
    return m;
}

// ---------------------------------------------------------------------------
// Commands

template <class F>
Outcome cmd_algebra_check(const Job& job, AlgebraPtr<F> A) {
    Outcome o;
    const F& f = A->field;
    auto ax = A->check_axioms();
    o.checks.checks.push_back({"associativity and unit", ax.empty(), ax.empty() ? "structure constants define a unital associative algebra" : ax});
    o.data["dim"] = A->dim();
    o.data["basis"] = A->labels;
    o.data["vertices"] = A->vertex_labels;
    Json cartan = Json::array();
    for (std::size_t u = 0; u < A->nverts(); ++u) {
        Json row = Json::array();
        for (std::size_t w = 0; w < A->nverts(); ++w) row.push_back(A->cartan(u, w));
        cartan.push_back(row);
    }
    o.data["cartan"] = cartan;
    auto form = find_symmetric_form(*A, job.seed, budget_or(job, 4096));
    const char* st = form.status == FormStatus::Found ? "symmetric" : form.status == FormStatus::NotSymmetric ? "not symmetric" : "undetermined";
    o.data["symmetric_form"] = st;
    o.data["symmetric_forms_dim"] = form.solution_dim;
    if (form.status == FormStatus::Found) {
        o.data["phi"] = vector_json(form.phi, f);
        o.data["gram"] = matrix_json(A->gram(form.phi), f);
    }
    o.data["algebra"] = algebra_json(*A);
    o.text.push_back("dim: " + std::to_string(A->dim()) + ", vertices: " + std::to_string(A->nverts()));
    o.text.push_back(std::string("symmetric form: ") + st);
    return o;
}

template <class F>
Outcome cmd_resolve(const Job& job, AlgebraPtr<F> A) {
    Outcome o;
    const std::size_t depth = job.steps ? job.steps : 4;
    if (!job.module.empty()) {
        auto M = parse_module(A, job.module);
        Json steps = Json::array();
        Module<F> cur = M;
        for (std::size_t s = 0; s < depth && cur.dim > 0; ++s) {
            auto st = syzygy_step(cur);
            bool onto = rank(st.cover.epi) == cur.dim;
            o.checks.checks.push_back({"cover " + std::to_string(s), onto,
                                       onto ? "projective cover maps onto Omega^" + std::to_string(s)
                                            : "cover of Omega^" + std::to_string(s) + " is not surjective"});
            steps.push_back(Json{{"cover", vertex_list(*A, st.cover.vertices)},
                                 {"cover_dim", st.cover.module.dim},
                                 {"syzygy_dim", st.kernel.dim}});
            o.text.push_back("Omega^" + std::to_string(s) + " (dim " + std::to_string(cur.dim) + ") covered by dim " +
                             std::to_string(st.cover.module.dim));
            cur = st.kernel;
        }
        o.data["module_dim"] = M.dim;
        o.data["steps"] = steps;
        return o;
    }
    auto br = bimodule_resolution(A, depth);
    auto err = check_complex(br.Y);
    o.checks.checks.push_back({"complex", err.empty(), err.empty() ? "d o d = 0 and bimodule maps" : err});
    auto h = homology_dims(br.Y);
    std::string bad;
    for (const auto& [deg, d] : h) {
        if (deg == 0 && d == A->dim()) continue;
        if (deg == br.Y.lo && d == br.kernels.back().cols()) continue;
        bad += (bad.empty() ? "" : ", ") + std::to_string(d) + " in degree " + std::to_string(deg);
    }
    o.checks.checks.push_back({"exact", bad.empty(), bad.empty() ? "homology is A in degree 0 and the last kernel" : "unexpected homology " + bad});
    o.data["complex"] = complex_json(br.Y);
    Json k = Json::array();
    for (const auto& K : br.kernels) k.push_back(K.cols());
    o.data["kernel_dims"] = k;
    o.text.push_back(describe(br.Y));
    return o;
}

template <class F>
Outcome cmd_periodicity(const Job& job, AlgebraPtr<F> A) {
    Outcome o;
    const F& f = A->field;
    auto screen = simple_screen(A, job.max_period, job.seed, budget_or(job, 2000));
    Json sj = Json::array();
    for (const auto& e : screen) {
        Json x;
        x["vertex"] = A->vertex_labels[e.vertex];
        x["period"] = e.period ? Json(*e.period) : Json(nullptr);
        x["projective"] = e.projective;
        x["cover_dims"] = e.cover_dims;
        x["verdict"] = verdict_name(e.verdict);
        if (e.witness) x["witness"] = matrix_json(*e.witness, f);
        sj.push_back(std::move(x));
        std::string cd;
        for (auto d : e.cover_dims) cd += (cd.empty() ? "" : ",") + std::to_string(d);
        o.text.push_back("simple " + A->vertex_labels[e.vertex] + ": " +
                         (e.period ? "Omega-period " + std::to_string(*e.period) : std::string(verdict_name(e.verdict))) +
                         ", cover dims (" + cd + ")");
    }
    o.data["screen"] = sj;
    auto cr = certify_twisted_periodicity(A, job.max_period, job.seed, budget_or(job, 4096));
    o.data["log"] = cr.log;
    std::string log;
    for (const auto& l : cr.log) log += (log.empty() ? "" : "; ") + l;
    if (!cr.res) {
        o.checks.checks.push_back({"twisted periodic", false,
                                   std::string(verdict_name(cr.verdict)) + ": no period up to " + std::to_string(job.max_period) + " (" + log + ")"});
        return o;
    }
    auto t = *cr.res;
    o.checks.checks.push_back({"twisted periodic", true, "period " + std::to_string(t.n)});
    if (job.inject == "corrupt-differential") {
        const int bottom = -static_cast<int>(t.n - 1);
        std::string where;
        if (t.n >= 2) {
            // zero the columns of the first generator block of the lowest term
            Matrix<F>& d = t.Y.d.front();
            const std::size_t w = t.Y.block_dim(t.Y.blocks(bottom).front());
            for (std::size_t r = 0; r < d.rows(); ++r)
                for (std::size_t c = 0; c < w; ++c) d(r, c) = f.zero();
            where = "first block of the differential out of degree " + std::to_string(bottom);
        } else {
            for (std::size_t r = 0; r < t.aug.rows(); ++r) t.aug(r, 0) = f.zero();
            where = "first column of the augmentation";
        }
        o.data["injected"] = "zeroed the " + where;
    }
    auto rep = verify_truncated(t, job.seed, budget_or(job, 400));
    for (const auto& c : rep.checks) o.checks.checks.push_back(c);
    o.data["resolution"] = resolution_json(t);
    std::string perm;
    for (auto v : t.perm) perm += (perm.empty() ? "" : " ") + A->vertex_labels[v];
    o.text.push_back("certified period " + std::to_string(t.n) + ", sigma on vertices: " + perm);
    o.text.push_back("resolution: " + describe(t.Y));
    return o;
}

template <class F>
std::vector<std::size_t> wrong_sigma(const TwistData<F>& t) {
    auto s = t.sigma;
    if (t.J.size() >= 2) {
        // rotate sigma along J
        auto first = s[t.J.front()];
        for (std::size_t k = 0; k + 1 < t.J.size(); ++k) s[t.J[k]] = s[t.J[k + 1]];
        s[t.J.back()] = first;
        if (s != t.sigma) return s;
    }
    for (std::size_t v = 0; v < t.A->nverts(); ++v)
        if (v != s[t.J.front()]) {
            s[t.J.front()] = v;
            return s;
        }
    throw InputError("wrong-sigma needs an algebra with at least two vertices");
}

template <class F>
Json twist_data(const TwistData<F>& t) {
    Json j;
    j["J"] = vertex_list(*t.A, t.J);
    j["period"] = t.n;
    Json s = Json::object();
    for (auto v : t.J) s[t.A->vertex_labels[v]] = t.A->vertex_labels[t.sigma[v]];
    j["sigma"] = s;
    j["corner"] = algebra_json(t.corner.alg);
    j["resolution"] = resolution_json(t.res);
    j["X"] = complex_json(t.X);
    return j;
}

template <class F>
TwistData<F> setup(const Job& job, AlgebraPtr<F> A, const std::vector<std::size_t>& J, AlgebraPtr<F> Aen = nullptr) {
    return twist_setup(A, J, job.max_period, job.seed, budget_or(job, 4096), Aen);
}

template <class F>
Outcome cmd_twist(const Job& job, AlgebraPtr<F> A) {
    Outcome o;
    auto t = setup(job, A, require_J(job, *A));
    TwistOptions<F> opt;
    opt.seed = job.seed + 1;
    opt.budget = budget_or(job, 400);
    if (job.inject == "wrong-sigma") {
        opt.claimed_sigma = wrong_sigma(t);
        Json s = Json::object();
        for (auto v : t.J) s[A->vertex_labels[v]] = A->vertex_labels[(*opt.claimed_sigma)[v]];
        o.data["injected"] = Json{{"claimed_sigma", s}};
    }
    auto rep = verify_twist(t, opt);
    o.checks = rep.checks;
    o.data["twist"] = twist_data(t);
    o.data["x_dims"] = map_json<F>(rep.x_dims);
    o.text.push_back("period " + std::to_string(t.n) + ", X: " + describe(t.X));
    return o;
}

template <class F>
Outcome cmd_inverse(const Job& job, AlgebraPtr<F> A) {
    Outcome o;
    auto t = setup(job, A, require_J(job, *A));
    auto inv = twist_inverse(t, job.seed + 1, budget_or(job, 400));
    o.checks = inv.report;
    o.data["J"] = vertex_list(*A, t.J);
    o.data["period"] = t.n;
    o.data["X_inverse"] = complex_json(inv.Xp);
    o.text.push_back("X': " + describe(inv.Xp));
    return o;
}

template <class F>
Outcome cmd_compose(const Job& job, AlgebraPtr<F> A) {
    Outcome o;
    auto Aen = share_algebra(enveloping(*A));
    auto J = require_J(job, *A);
    std::map<std::vector<std::size_t>, TwistData<F>> cache;
    auto twist = [&](const std::vector<std::size_t>& K) -> const TwistData<F>& {
        auto key = K;
        std::sort(key.begin(), key.end());
        key.erase(std::unique(key.begin(), key.end()), key.end());
        auto it = cache.find(key);
        if (it == cache.end()) it = cache.emplace(key, setup(job, A, key, Aen)).first;
        return it->second;
    };
    const std::uint64_t seed = job.seed + 1;
    const std::size_t budget = budget_or(job, 400);
    if (job.with_J.empty()) {
        if (!job.then_J.empty() || !job.compare_J.empty()) throw InputError("--then-J and --compare-J need --with-J");
        const auto& t = twist(J);
        auto c = compose_twists(t, t, seed, budget);
        bool ok = c.eq.verdict == Verdict::Yes;
        o.checks.checks.push_back({"splice = X (x) X", ok,
                                   std::string(verdict_name(c.eq.verdict)) + ": twist of the spliced resolution (period " +
                                       std::to_string(c.spliced.n) + ") against X (x) X" + (ok ? "" : " (" + c.eq.reason + ")")});
        o.data["period"] = c.spliced.n;
        o.data["product"] = complex_json(c.product);
        o.text.push_back("X (x) X: " + describe(c.product));
        return o;
    }
    // word in application order
    std::vector<std::vector<std::size_t>> word{J, parse_vertices(*A, job.with_J)};
    if (!job.then_J.empty()) word.push_back(parse_vertices(*A, job.then_J));
    auto product = [&](const std::vector<std::vector<std::size_t>>& w) {
        std::vector<const Complex<F>*> xs;
        for (auto it = w.rbegin(); it != w.rend(); ++it) xs.push_back(&twist(*it).X);
        return tensor_word<F>(xs);
    };
    auto word_name = [&](const std::vector<std::vector<std::size_t>>& w) {
        std::string s;
        for (const auto& K : w) {
            std::string k;
            for (auto v : K) k += (k.empty() ? "" : "+") + A->vertex_labels[v];
            s += (s.empty() ? "" : ",") + k;
        }
        return s;
    };
    auto lhs = product(word);
    auto err = check_complex(lhs);
    o.checks.checks.push_back({"composite complex", err.empty(), err.empty() ? describe(lhs) : err});
    o.data["word"] = word_name(word);
    o.data["composite"] = complex_json(lhs);
    o.text.push_back(word_name(word) + ": " + describe(lhs));
    if (!job.compare_J.empty()) {
        std::vector<std::vector<std::size_t>> other;
        for (auto& [tok, col] : detail::split_list(job.compare_J, 1)) {
            (void)col;
            other.push_back(parse_vertices(*A, tok, '+'));
        }
        auto rhs = product(other);
        auto eq = homotopy_equivalent(lhs, rhs, seed, budget);
        bool ok = eq.verdict == Verdict::Yes;
        o.checks.checks.push_back({"equivalent to " + word_name(other), ok,
                                   std::string(verdict_name(eq.verdict)) +
                                       (ok ? ": homotopy equivalence found" : ": " + describe(eq.min_x) + " vs " + describe(eq.min_y) + " (" + eq.reason + ")")});
        o.data["compare_word"] = word_name(other);
        o.data["compare"] = complex_json(rhs);
        o.text.push_back(word_name(other) + ": " + describe(rhs));
    }
    return o;
}

template <class F>
Json tilt_json(const TiltStep<F>& st) {
    Json j;
    const auto& A = *st.A;
    Json T = Json::array();
    for (std::size_t v = 0; v < st.T.size(); ++v)
        T.push_back(Json{{"vertex", A.vertex_labels[v]}, {"shape", describe(st.T[v])}, {"complex", complex_json(st.T[v])}});
    j["T"] = T;
    j["algebra"] = algebra_json(*st.B);
    return j;
}

template <class F>
Outcome cmd_tilt(const Job& job, AlgebraPtr<F> A) {
    Outcome o;
    auto J = require_J(job, *A);
    TiltStep<F> st;
    try {
        st = tilt(A, J, job.seed);
    } catch (const TiltError& e) {
        std::string m = e.what();
        if (m.rfind("T is not self-orthogonal", 0) != 0) throw;
        o.checks.checks.push_back({"self-orthogonal", false, m});
        return o;
    }
    o.checks.checks.push_back({"self-orthogonal", true, "Hom(T, T[1]) = Hom(T, T[-1]) = 0"});
    for (std::size_t v = 0; v < A->nverts(); ++v) {
        if (std::binary_search(st.J.begin(), st.J.end(), v)) continue;
        const auto& ap = st.approx[v];
        bool ok = ap.minimal && ap.cokernel_ok;
        o.checks.checks.push_back({"approximation P_" + A->vertex_labels[v], ok,
                                   ok ? "right minimal, T = " + describe(st.T[v])
                                      : std::string(ap.cokernel_ok ? "not minimal" : "not onto e_J A e_i")});
    }
    auto ax = st.B->check_axioms();
    o.checks.checks.push_back({"endomorphism algebra", ax.empty(), ax.empty() ? "dim " + std::to_string(st.B->dim()) : ax});
    o.checks.checks.push_back({"endomorphism algebra symmetric", st.symmetric,
                               st.symmetric ? "symmetrising form found" : "no symmetrising form found (Undetermined)"});
    o.data["J"] = vertex_list(*A, st.J);
    o.data["tilt"] = tilt_json(st);
    for (std::size_t v = 0; v < st.T.size(); ++v) o.text.push_back("T_" + A->vertex_labels[v] + ": " + describe(st.T[v]));
    o.text.push_back("End(T) has dimension " + std::to_string(st.B->dim()));
    return o;
}

template <class F>
Outcome cmd_circle(const Job& job, AlgebraPtr<F> A) {
    Outcome o;
    auto t = setup(job, A, require_J(job, *A));
    std::size_t steps = job.steps ? job.steps : t.n;
    if (job.inject == "wrong-period") {
        steps = t.n + 1;
        o.data["injected"] = "steps set to period + 1 = " + std::to_string(steps);
    }
    auto run = iterate_tilts(A, t.J, steps, job.seed, budget_or(job, 1u << 16));
    auto rep = circle_vs_twist(t, run, job.seed + 1, budget_or(job, 400));
    o.checks = rep.checks;
    o.data["J"] = vertex_list(*A, t.J);
    o.data["period"] = t.n;
    o.data["steps"] = steps;
    o.data["verdict"] = iso_verdict_name(run.iso->verdict);
    if (run.iso->witness) {
        o.data["witness"] = matrix_json(*run.iso->witness, A->field);
        o.data["vertex_map"] = vertex_list(*A, run.iso->vertex_map);
    }
    Json js = Json::array();
    for (const auto& st : run.steps) js.push_back(tilt_json(st));
    o.data["steps_detail"] = js;
    o.text.push_back("A^(" + std::to_string(steps) + ") against A: " + iso_verdict_name(run.iso->verdict));
    return o;
}

template <class F>
Outcome dispatch(const Job& job, AlgebraPtr<F> A);

std::vector<std::string> default_fixtures() {
    return {"kx2_p2",   "kx2_p3",   "kxn_p2_n2",        "kxn_p3_n3",        "kxn_p5_n3",
            "a2_te_p2", "a2_te_p3", "brauer_line_3_p2", "brauer_line_3_p3", "kq8_p2"};
}

template <class F>
Outcome cmd_verify_all(const Job& job, AlgebraPtr<F> A) {
    Outcome o;
    Json runs = Json::array();
    auto sub = [&](const std::string& cmd, const std::string& J) {
        Job j = job;
        j.command = cmd;
        j.J = J;
        j.inject.clear();
        Outcome r;
        try {
            r = dispatch(j, A);
        } catch (const std::exception& e) {
            r.checks.checks.push_back({cmd, false, e.what()});
        }
        std::string name = cmd + (J.empty() ? "" : " J=" + J);
        for (const auto& c : r.checks.checks) o.checks.checks.push_back({name + ": " + c.name, c.ok, c.detail});
        runs.push_back(Json{{"command", cmd}, {"J", J}, {"status", status_name(exit_code(r.checks))}, {"checks", report_json(r.checks)}});
    };
    sub("algebra-check", "");
    sub("periodicity", "");
    const std::size_t r = A->nverts();
    bool basic = true;
    for (std::size_t v = 0; v < r; ++v) basic = basic && A->vclass[v] == v;
    std::vector<std::string> Js;
    for (std::size_t v = 0; v < r; ++v) Js.push_back(A->vertex_labels[v]);
    for (std::size_t u = 0; u < r && r > 2; ++u)
        for (std::size_t w = u + 1; w < r; ++w) Js.push_back(A->vertex_labels[u] + "," + A->vertex_labels[w]);
    for (const auto& J : Js) {
        sub("twist", J);
        sub("inverse", J);
        if (basic && r > 1) sub("circle", J);
    }
    o.data["runs"] = runs;
    for (const auto& run : runs) o.text.push_back(run["command"].get<std::string>() + (run["J"].get<std::string>().empty() ? "" : " J=" + run["J"].get<std::string>()) + ": " + run["status"].get<std::string>());
    return o;
}

template <class F>
Outcome dispatch(const Job& job, AlgebraPtr<F> A) {
    const auto& c = job.command;
    if (!job.inject.empty()) {
        static const std::map<std::string, std::string> where{
            {"corrupt-differential", "periodicity"}, {"wrong-sigma", "twist"}, {"wrong-period", "circle"}};
        auto it = where.find(job.inject);
        if (it == where.end()) throw InputError("unknown --inject value '" + job.inject + "'");
        if (it->second != c) throw InputError("--inject " + job.inject + " applies to the " + it->second + " command");
    }
    if (c == "algebra-check") return cmd_algebra_check(job, A);
    if (c == "resolve") return cmd_resolve(job, A);
    if (c == "periodicity") return cmd_periodicity(job, A);
    if (c == "twist") return cmd_twist(job, A);
    if (c == "inverse") return cmd_inverse(job, A);
    if (c == "compose") return cmd_compose(job, A);
    if (c == "tilt") return cmd_tilt(job, A);
    if (c == "circle") return cmd_circle(job, A);
    if (c == "verify-all") return cmd_verify_all(job, A);
    throw InputError("unknown command " + c);
}

struct Emitted {
    Json report;
    std::vector<std::string> text;
    int code = 0;
};

template <class F>
Emitted run_on(const Job& job, AlgebraPtr<F> A, const std::string& source) {
    auto o = dispatch(job, A);
    Emitted e;
    e.code = exit_code(o.checks);
    e.report["command"] = job.command;
    e.report["source"] = source;
    e.report["algebra"] = A->name;
    e.report["field"] = field_name(A->field);
    e.report["seed"] = job.seed;
    for (auto& [k, v] : o.data.items()) e.report[k] = v;
    e.report["checks"] = report_json(o.checks);
    e.report["status"] = status_name(e.code);
    e.text.push_back("command: " + job.command);
    e.text.push_back("algebra: " + A->name + " over " + field_name(A->field) + " (" + source + ")");
    for (auto& l : o.text) e.text.push_back(l);
    for (const auto& c : o.checks.checks) e.text.push_back(std::string(c.ok ? "[PASS] " : "[FAIL] ") + c.name + ": " + c.detail);
    for (const auto& c : o.checks.checks)
        if (!c.ok) std::cerr << "FAIL " << c.name << ": " << c.detail << "\n";
    return e;
}

template <class F>
AlgebraPtr<F> prepare(Algebra<F> a, const Job& job) {
    if (!a.trace) {
        auto form = find_symmetric_form(a, job.seed, budget_or(job, 4096));
        if (form.status == FormStatus::Found) a.trace = form.phi;
    }
    return share_algebra(std::move(a));
}

Emitted run_job(const Job& job, const std::string& fixture) {
    if (!fixture.empty()) {
        auto fx = parse_fixture_name(fixture);
        if (!fx) throw InputError("unknown fixture '" + fixture + "'");
        Fp f(fx->p);
        return run_on(job, share_algebra(make_fixture(f, *fx)), "fixture " + fixture);
    }
    auto text = read_algebra_file(job.file);
    if (text.p == 0) return run_on(job, prepare(build_algebra(Q{}, text), job), "file " + job.file);
    if (text.p > 0xffffffffL) throw InputError("p is too large");
    Fp f(static_cast<std::uint32_t>(text.p));
    return run_on(job, prepare(build_algebra(f, text), job), "file " + job.file);
}

void write_output(const Job& job, const std::string& s) {
    if (job.out.empty()) {
        std::cout << s;
        return;
    }
    // write next to the target, then rename over it
    std::string tmp = job.out + ".tmp";
    {
        std::ofstream o(tmp, std::ios::binary);
        if (!o) throw InputError("cannot write " + tmp);
        o << s;
    }
    std::filesystem::rename(tmp, job.out);
}

int execute(Job job) {
    auto start = std::chrono::steady_clock::now();
    Emitted e;
    if (job.command == "verify-all" && job.fixture.empty() && job.file.empty()) {
        Json all = Json::array();
        e.code = 0;
        for (const auto& fx : default_fixtures()) {
            auto one = run_job(job, fx);
            all.push_back(one.report);
            for (auto& l : one.text) e.text.push_back(l);
            if (one.code == 1 || (one.code == 3 && e.code == 0)) e.code = one.code;
        }
        e.report["command"] = "verify-all";
        e.report["seed"] = job.seed;
        e.report["fixtures"] = all;
        e.report["status"] = status_name(e.code);
    } else {
        e = run_job(job, job.fixture);
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (job.format == "json") {
        write_output(job, e.report.dump(2) + "\n");
    } else {
        std::string s;
        for (auto& l : e.text) s += l + "\n";
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.2f", secs);
        s += "status: " + status_name(e.code) + " (" + buf + " s)\n";
        write_output(job, s);
    }
    return e.code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Periodic twists, tilting complexes and their verification"};
    app.require_subcommand(1);
    Job job;
    const std::vector<std::pair<std::string, std::string>> commands{
        {"algebra-check", "structure checks and symmetrising form"},
        {"resolve", "minimal projective resolution of A as a bimodule, or of --module"},
        {"periodicity", "simple-module screen and twisted periodicity certificate"},
        {"twist", "build the periodic twist at --J and verify its contracts"},
        {"compose", "splice against composition, or compare tensor words of twists"},
        {"inverse", "build the inverse twist and verify it"},
        {"tilt", "two-term tilting complex at --J and its endomorphism algebra"},
        {"circle", "iterate tilts at --J and compare with the twist"},
        {"verify-all", "run the checks on one algebra, or on every fixture"},
    };
    for (const auto& [name, help] : commands) {
        auto* sc = app.add_subcommand(name, help);
        auto* fx = sc->add_option("--fixture", job.fixture, "bundled algebra, e.g. brauer_line_3_p2");
        auto* fl = sc->add_option("--file", job.file, "algebra text file");
        fx->excludes(fl);
        sc->add_option("--J", job.J, "vertex set, comma separated (labels or 1-based indices)");
        sc->add_option("--steps", job.steps, "tilt steps (circle) or resolution depth (resolve)");
        sc->add_option("--max-period", job.max_period, "largest period tried")->check(CLI::PositiveNumber);
        sc->add_option("--seed", job.seed, "seed for randomised searches");
        sc->add_option("--budget", job.budget, "search budget");
        sc->add_option("--out", job.out, "write the report here instead of stdout");
        sc->add_option("--format", job.format, "json or text")->check(CLI::IsMember({"json", "text"}));
        if (name == "compose") {
            sc->add_option("--with-J", job.with_J, "second twist of the word");
            sc->add_option("--then-J", job.then_J, "third twist of the word");
            sc->add_option("--compare-J", job.compare_J, "word to compare with, e.g. 2,1,2 (1+2 is the set {1,2})");
        }
        if (name == "resolve") sc->add_option("--module", job.module, "projective:i, simple:i, regular or JSON matrices");
        sc->add_option("--inject", job.inject, "negative control: corrupt-differential, wrong-sigma, wrong-period")
            ->group("");
        sc->callback([&job, name = name] { job.command = name; });
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }
    if (job.fixture.empty() && job.file.empty() && job.command != "verify-all") {
        std::cerr << "error: give --fixture or --file\n";
        return 2;
    }
    try {
        return execute(job);
    } catch (const PeriodicityError& e) {
        std::string m = e.what();
        std::cerr << "error: " << m << "\n";
        return m.rfind("DepthExceeded", 0) == 0 ? 3 : 1;
    } catch (const TwistError& e) {
        std::string m = e.what();
        std::cerr << "error: " << m << "\n";
        return m.rfind("NotCertified", 0) == 0 ? (m.find("UNDETERMINED") != std::string::npos ? 3 : 1) : 2;
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const AlgebraError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const TiltError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
