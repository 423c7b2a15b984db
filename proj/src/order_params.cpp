#include "spinelab/order_params.hpp"

#include "spinelab/solver.hpp"
#include "spinelab/structure.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <deque>
#include <functional>
#include <numeric>
#include <ostream>
#include <set>

namespace spinelab {

namespace {

// The formula and the universe expressed over one template set.
struct Aligned {
    Formula formula;
    std::vector<Constraint> universe;
};

Aligned align(const Formula& f, const ConstraintUniverse& u) {
    if (u.num_vars() != f.num_vars())
        throw ContractError("universe and formula disagree on the number of variables");
    if (u.templates().domain() != f.domain() || u.templates().arity() != f.arity())
        throw ContractError("universe and formula disagree on domain or arity");
    if (u.template_ptr() == f.template_ptr())
        return {f, u.constraints()};

    int max_f = 0;
    int min_u = 0;
    for (const auto& t : f.templates().templates())
        max_f = std::max(max_f, t.id());
    for (const auto& t : u.templates().templates())
        min_u = std::min(min_u, t.id());
    const int offset = max_f + 1 - min_u;
    std::vector<ConstraintTemplate> all = f.templates().templates();
    for (const auto& t : u.templates().templates())
        all.emplace_back(t.id() + offset, t.domain(), t.arity(), t.table());
    auto ts = std::make_shared<const TemplateSet>(f.domain(), f.arity(), std::move(all));
    std::vector<Constraint> moved = u.constraints();
    for (auto& c : moved)
        c.template_id += offset;
    return {Formula(f.num_vars(), ts, f.constraints()), std::move(moved)};
}

struct Candidate {
    std::vector<Clause> holds;
    std::vector<Clause> violated;
    std::function<bool(const Assignment&)> satisfied;
};

// Decides spine membership of candidates against one formula. For a
// satisfiable formula a candidate is a member iff it is inconsistent with the
// whole formula. Otherwise a member needs a satisfiable Ξ ⊆ Φ with Ξ ∧ C
// unsatisfiable; maximal satisfiable subsets found along the way are cached.
class SpineEngine {
  public:
    SpineEngine(const Formula& f, std::uint64_t max_calls) : f_(f), enc_(f), max_calls_(max_calls) {
        for (const auto& c : f.constraints())
            groups_.push_back(enc_.holds(c));
        all_.resize(f.size());
        std::iota(all_.begin(), all_.end(), 0);
        if (auto m = query(all_, {})) {
            sat_ = true;
            pool_.push_back(std::move(*m));
        }
    }

    bool formula_sat() const { return sat_; }
    std::uint64_t calls() const { return calls_; }
    const Encoding& encoding() const { return enc_; }

    Candidate constraint_candidate(const Constraint& c) const {
        const TemplateSet* ts = &f_.templates();
        return {enc_.holds(c), enc_.violated(c), [ts, c](const Assignment& a) { return constraint_satisfied(*ts, c, a); }};
    }

    static Candidate literal_candidate(Lit l) {
        return {{Clause{l}}, {Clause{~l}}, [l](const Assignment& a) { return l.holds(a[l.var()]); }};
    }

    /// For satisfiable formulas: which values each variable can take in some model.
    const std::vector<std::vector<std::uint8_t>>& possible_values() {
        if (!sat_)
            throw Error("internal: possible_values on an unsatisfiable formula");
        if (!possible_.empty())
            return possible_;
        const int n = f_.num_vars();
        const int t = f_.domain();
        possible_.assign(static_cast<std::size_t>(n), std::vector<std::uint8_t>(static_cast<std::size_t>(t), 0));
        for (const auto& m : pool_)
            mark(m);
        for (int v = 0; v < n; ++v)
            for (int d = 0; d < t; ++d) {
                if (possible_[static_cast<std::size_t>(v)][static_cast<std::size_t>(d)])
                    continue;
                Clause unit{enc_.value_literal(v, d)};
                if (auto m = query(all_, std::span<const Clause>(&unit, 1))) {
                    mark(*m);
                    pool_.push_back(std::move(*m));
                }
            }
        return possible_;
    }

    bool member(const Candidate& c) { return sat_ ? member_sat(c) : member_unsat(c); }

  private:
    struct Witness {
        std::vector<std::size_t> members;
        std::vector<std::size_t> complement;
        std::vector<Assignment> models;
    };

    void mark(const Assignment& m) {
        if (possible_.empty())
            return;
        for (int v = 0; v < m.size(); ++v)
            possible_[static_cast<std::size_t>(v)][static_cast<std::size_t>(m[v])] = 1;
    }

    void count_call() {
        ++calls_;
        if (max_calls_ != 0 && calls_ > max_calls_)
            throw BudgetExceeded("spine: SAT-call budget of " + std::to_string(max_calls_) + " exhausted");
    }

    std::optional<Assignment> query(std::span<const std::size_t> subset, std::span<const Clause> extra) {
        count_call();
        DpllSolver solver(enc_.engine_vars(), enc_.base());
        for (auto i : subset)
            solver.add_clauses(groups_[i]);
        solver.add_clauses(extra);
        auto r = solver.solve();
        if (!r.sat)
            return std::nullopt;
        return enc_.decode(r.model);
    }

    std::vector<std::uint8_t> satisfied_set(const Assignment& a) const {
        std::vector<std::uint8_t> in(f_.size(), 0);
        for (std::size_t i = 0; i < f_.size(); ++i)
            in[i] = f_.satisfied(i, a) ? 1 : 0;
        return in;
    }

    Witness grow(const Assignment& start) {
        Assignment model = start;
        auto in = satisfied_set(model);
        std::vector<std::size_t> trial;
        for (std::size_t d = 0; d < f_.size(); ++d) {
            if (in[d])
                continue;
            trial.clear();
            for (std::size_t i = 0; i < f_.size(); ++i)
                if (in[i] || i == d)
                    trial.push_back(i);
            if (auto m = query(trial, {})) {
                auto now = satisfied_set(*m);
                for (std::size_t i = 0; i < f_.size(); ++i)
                    in[i] = static_cast<std::uint8_t>(in[i] | now[i]);
                model = std::move(*m);
            }
        }
        Witness w;
        for (std::size_t i = 0; i < f_.size(); ++i)
            (in[i] ? w.members : w.complement).push_back(i);
        w.models.push_back(std::move(model));
        return w;
    }

    bool member_sat(const Candidate& c) {
        for (auto it = pool_.rbegin(); it != pool_.rend(); ++it)
            if (c.satisfied(*it))
                return false;
        if (auto m = query(all_, c.holds)) {
            mark(*m);
            pool_.push_back(std::move(*m));
            return false;
        }
        return true;
    }

    bool member_unsat(const Candidate& c) {
        // Every stored model τ satisfying C rules out any σ with Sat(σ) ⊆ Sat(τ).
        std::vector<const std::vector<std::size_t>*> blocked;
        for (auto& w : mss_) {
            bool excluded = std::any_of(w.models.begin(), w.models.end(), [&](const Assignment& m) { return c.satisfied(m); });
            if (!excluded) {
                auto t = query(w.members, c.holds);
                if (!t)
                    return true;
                w.models.push_back(std::move(*t));
            }
            blocked.push_back(&w.complement);
        }

        const int base_vars = enc_.engine_vars();
        const int m = static_cast<int>(f_.size());
        for (;;) {
            count_call();
            DpllSolver solver(base_vars + m, enc_.base());
            solver.add_clauses(c.violated);
            for (int d = 0; d < m; ++d) {
                const Lit selector = Lit::pos(base_vars + d);
                for (const auto& clause : groups_[static_cast<std::size_t>(d)]) {
                    Clause guarded = clause;
                    guarded.push_back(~selector);
                    if (normalize_clause(guarded))
                        solver.add_clause(std::move(guarded));
                }
            }
            for (const auto* complement : blocked) {
                Clause any;
                for (auto d : *complement)
                    any.push_back(Lit::pos(base_vars + static_cast<int>(d)));
                normalize_clause(any);
                solver.add_clause(std::move(any));
            }
            auto r = solver.solve();
            if (!r.sat)
                return false;

            mss_.push_back(grow(enc_.decode(r.model)));
            auto& w = mss_.back();
            auto t = query(w.members, c.holds);
            if (!t)
                return true;
            w.models.push_back(std::move(*t));
            blocked.push_back(&w.complement);
        }
    }

    const Formula& f_;
    Encoding enc_;
    std::uint64_t max_calls_;
    std::uint64_t calls_ = 0;
    bool sat_ = false;
    std::vector<std::vector<Clause>> groups_;
    std::vector<std::size_t> all_;
    std::vector<Assignment> pool_;
    std::deque<Witness> mss_;
    std::vector<std::vector<std::uint8_t>> possible_;
};

bool is_clause_template(const ConstraintTemplate& t) {
    return t.domain() == 2 && t.satisfying_count() + 1 == t.tuple_count();
}

// Every constraint is a k-clause and the universe holds all C(n,k) 2^k of them.
bool full_clause_universe(const Formula& f, const std::vector<Constraint>& universe) {
    if (f.domain() != 2)
        return false;
    for (std::size_t i = 0; i < f.size(); ++i)
        if (!is_clause_template(f.relation(i)))
            return false;
    for (const auto& c : universe)
        if (!is_clause_template(f.templates().by_id(c.template_id)))
            return false;
    const auto expected = binomial(f.num_vars(), f.arity()) << f.arity();
    return static_cast<std::int64_t>(universe.size()) == expected;
}

// Value tuple (per position of c.vars) that falsifies a clause constraint.
std::vector<int> falsifying_values(const TemplateSet& ts, const Constraint& c) {
    const auto& tpl = ts.by_id(c.template_id);
    for (std::size_t idx = 0; idx < tpl.tuple_count(); ++idx)
        if (!tpl.accepts(idx)) {
            auto tuple = tpl.tuple_at(idx);
            for (std::size_t j = 0; j < tuple.size(); ++j)
                tuple[j] ^= c.neg(j) ? 1 : 0;
            return tuple;
        }
    return {};
}

class VarSet {
  public:
    explicit VarSet(int n) : in_(static_cast<std::size_t>(n), 0) {}
    void add(int v) {
        if (!in_[static_cast<std::size_t>(v)]) {
            in_[static_cast<std::size_t>(v)] = 1;
            ++count_;
        }
    }
    bool contains(int v) const { return in_[static_cast<std::size_t>(v)] != 0; }
    std::size_t size() const { return count_; }
    std::vector<int> sorted() const {
        std::vector<int> out;
        for (std::size_t v = 0; v < in_.size(); ++v)
            if (in_[v])
                out.push_back(static_cast<int>(v));
        return out;
    }

  private:
    std::vector<std::uint8_t> in_;
    std::size_t count_ = 0;
};

Rational fraction(std::size_t num, std::int64_t den) {
    if (den <= 0)
        return Rational(0);
    return Rational(static_cast<std::int64_t>(num), den);
}

void finish(SpineReport& r, const VarSet& s, int n, std::size_t universe_size, const std::vector<std::uint8_t>* members) {
    r.variables = s.sorted();
    r.f_S = fraction(s.size(), n);
    if (members && r.constraints_computed) {
        for (std::size_t i = 0; i < members->size(); ++i)
            if ((*members)[i])
                r.constraints.push_back(i);
        r.f_SC = fraction(r.constraints.size(), static_cast<std::int64_t>(universe_size));
    }
}

bool reached(const SpineOptions& o, const VarSet& s) { return o.stop_at_vars != 0 && s.size() >= o.stop_at_vars; }

std::optional<SpineReport> clause_fast_path(const Aligned& a, SpineEngine& engine, const SpineOptions& options) {
    const Formula& f = a.formula;
    const int n = f.num_vars();
    const int k = f.arity();
    SpineReport r;
    r.formula_sat = engine.formula_sat();
    r.method = "clause-fast-path";
    VarSet s(n);

    if (engine.formula_sat()) {
        // x is in S iff x is frozen and at least k variables are frozen.
        const auto& possible = engine.possible_values();
        std::vector<int> frozen_value(static_cast<std::size_t>(n), kUnassigned);
        std::vector<int> frozen;
        for (int v = 0; v < n; ++v) {
            const auto& p = possible[static_cast<std::size_t>(v)];
            if (p[0] + p[1] == 1) {
                frozen_value[static_cast<std::size_t>(v)] = p[1] ? 1 : 0;
                frozen.push_back(v);
            }
        }
        if (static_cast<int>(frozen.size()) >= k)
            for (int v : frozen)
                s.add(v);
        std::vector<std::uint8_t> members;
        if (options.constraint_spine) {
            members.assign(a.universe.size(), 0);
            for (std::size_t i = 0; i < a.universe.size(); ++i) {
                const auto& c = a.universe[i];
                auto bad = falsifying_values(f.templates(), c);
                bool all = true;
                for (std::size_t j = 0; j < c.vars.size() && all; ++j)
                    all = frozen_value[static_cast<std::size_t>(c.vars[j])] == bad[j];
                members[i] = all ? 1 : 0;
            }
            r.constraints_computed = true;
        }
        r.sat_calls = engine.calls();
        finish(r, s, n, a.universe.size(), &members);
        return r;
    }

    // Unsatisfiable: x is in S iff x or its negation is in the literal spine.
    if (options.constraint_spine)
        return std::nullopt;
    auto mus = mus_extract(f);
    for (const auto& c : mus.subformula.constraints())
        for (int v : c.vars)
            s.add(v);
    r.complete = !reached(options, s);
    for (int v = 0; v < n && r.complete; ++v) {
        if (s.contains(v))
            continue;
        for (bool negative : {false, true})
            if (engine.member(SpineEngine::literal_candidate(Lit::make(v, negative)))) {
                s.add(v);
                break;
            }
        if (reached(options, s) && v + 1 < n)
            r.complete = false;
    }
    r.sat_calls = engine.calls();
    finish(r, s, n, a.universe.size(), nullptr);
    return r;
}

} // namespace

BackboneReport backbone(const Formula& f, const ConstraintUniverse& u, const BackboneOptions& options) {
    auto a = align(f, u);
    BackboneReport r;
    auto base = opt(a.formula);
    r.opt = base.value;
    std::vector<Assignment> pool{base.witness};
    VarSet b(f.num_vars());
    for (std::size_t i = 0; i < a.universe.size(); ++i) {
        const auto& c = a.universe[i];
        const auto& ts = a.formula.templates();
        if (std::any_of(pool.rbegin(), pool.rend(), [&](const Assignment& s) { return constraint_satisfied(ts, c, s); }))
            continue;
        ++r.opt_calls;
        if (options.max_opt_calls != 0 && r.opt_calls > options.max_opt_calls)
            throw BudgetExceeded("backbone: opt-call budget of " + std::to_string(options.max_opt_calls) + " exhausted");
        // opt(Φ ∪ C) is opt(Φ) or opt(Φ) + 1; look for a witness of the former.
        if (auto better = opt_below(a.formula.with(c), r.opt + 1)) {
            pool.push_back(std::move(better->witness));
            continue;
        }
        r.constraints.push_back(i);
        for (int v : c.vars)
            b.add(v);
    }
    r.variables = b.sorted();
    r.f_B = fraction(b.size(), f.num_vars());
    r.f_BC = fraction(r.constraints.size(), static_cast<std::int64_t>(a.universe.size()));
    return r;
}

SpineReport spine(const Formula& f, const ConstraintUniverse& u, const SpineOptions& options) {
    auto a = align(f, u);
    SpineEngine engine(a.formula, options.max_sat_calls);
    if (options.fast_path && full_clause_universe(a.formula, a.universe))
        if (auto r = clause_fast_path(a, engine, options))
            return *r;

    const int n = f.num_vars();
    SpineReport r;
    r.formula_sat = engine.formula_sat();
    r.method = "general";
    r.constraints_computed = options.constraint_spine;
    VarSet s(n);
    std::vector<std::uint8_t> members(a.universe.size(), 0);

    auto add_member = [&](std::size_t i) {
        members[i] = 1;
        for (int v : a.universe[i].vars)
            s.add(v);
    };

    if (engine.formula_sat()) {
        engine.possible_values();
    } else {
        // Every constraint of a minimal unsatisfiable core is a member.
        auto mus = mus_extract(a.formula);
        for (const auto& c : mus.subformula.constraints())
            if (auto idx = u.find(semantic_key(a.formula.templates(), c)))
                add_member(*idx);
    }

    r.complete = !reached(options, s);
    for (std::size_t i = 0; i < a.universe.size() && r.complete; ++i) {
        if (members[i])
            continue;
        const auto& c = a.universe[i];
        if (!options.constraint_spine && std::all_of(c.vars.begin(), c.vars.end(), [&](int v) { return s.contains(v); }))
            continue;
        if (engine.member(engine.constraint_candidate(c)))
            add_member(i);
        if (reached(options, s) && i + 1 < a.universe.size())
            r.complete = false;
    }
    r.sat_calls = engine.calls();
    if (!r.complete)
        r.constraints_computed = false;
    finish(r, s, n, a.universe.size(), &members);
    return r;
}

std::vector<Lit> literal_spine(const Formula& f, const SpineOptions& options) {
    if (f.domain() != 2)
        throw UnsupportedError("literal_spine requires t = 2");
    SpineEngine engine(f, options.max_sat_calls);
    std::vector<Lit> out;
    if (engine.formula_sat()) {
        const auto& possible = engine.possible_values();
        for (int v = 0; v < f.num_vars(); ++v)
            for (int d = 0; d < 2; ++d)
                if (!possible[static_cast<std::size_t>(v)][static_cast<std::size_t>(d)])
                    out.push_back(engine.encoding().value_literal(v, d));
    } else {
        for (int v = 0; v < f.num_vars(); ++v)
            for (bool negative : {false, true})
                if (engine.member(SpineEngine::literal_candidate(Lit::make(v, negative))))
                    out.push_back(Lit::make(v, negative));
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<VertexPair> col3_spine(const Graph& g, const SpineOptions& options) {
    auto f = coloring_formula(g, 3);
    ConstraintUniverse u(g.num_vertices(), f.template_ptr());
    SpineOptions o = options;
    o.constraint_spine = true;
    o.stop_at_vars = 0;
    auto r = spine(f, u, o);
    std::vector<VertexPair> out;
    for (auto i : r.constraints) {
        const auto& vars = u.constraints()[i].vars;
        out.emplace_back(std::min(vars[0], vars[1]), std::max(vars[0], vars[1]));
    }
    std::sort(out.begin(), out.end());
    return out;
}

namespace {

void require_even(const Graph& g, const char* what) {
    if (g.num_vertices() % 2 != 0)
        throw ContractError(std::string(what) + ": graph bisection needs an even number of vertices");
}

bool packable(const std::vector<int>& sizes, int half) {
    std::vector<std::uint8_t> reach(static_cast<std::size_t>(half) + 1, 0);
    reach[0] = 1;
    for (int s : sizes)
        for (int x = half; x >= s; --x)
            if (reach[static_cast<std::size_t>(x - s)])
                reach[static_cast<std::size_t>(x)] = 1;
    return reach[static_cast<std::size_t>(half)] != 0;
}

std::vector<int> component_sizes(const std::vector<int>& labels) {
    std::vector<int> sizes;
    for (int l : labels) {
        if (l >= static_cast<int>(sizes.size()))
            sizes.resize(static_cast<std::size_t>(l) + 1, 0);
        ++sizes[static_cast<std::size_t>(l)];
    }
    return sizes;
}

// Calls visit(side) for every balanced bipartition with vertex 0 on side 0.
template <class Visit>
void for_each_bisection(int n, Visit&& visit) {
    const int half = n / 2;
    std::vector<std::uint8_t> side(static_cast<std::size_t>(n), 0);
    auto rec = [&](auto&& self, int v, int left) -> void {
        if (left == 0) {
            visit(side);
            return;
        }
        if (n - v < left)
            return;
        side[static_cast<std::size_t>(v)] = 1;
        self(self, v + 1, left - 1);
        side[static_cast<std::size_t>(v)] = 0;
        self(self, v + 1, left);
    };
    rec(rec, 1, half);
}

std::size_t pair_index(int u, int v, int n) {
    return static_cast<std::size_t>(u) * static_cast<std::size_t>(n) + static_cast<std::size_t>(v);
}

} // namespace

bool gbp_bisectable(const Graph& g) {
    require_even(g, "gbp_bisectable");
    return packable(component_sizes(g.component_labels()), g.num_vertices() / 2);
}

std::vector<VertexPair> gbp_spine_fast_path(const Graph& g) {
    require_even(g, "gbp_spine_fast_path");
    const int n = g.num_vertices();
    auto labels = g.component_labels();
    auto sizes = component_sizes(labels);
    std::vector<VertexPair> out;
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v)
            if (labels[static_cast<std::size_t>(u)] == labels[static_cast<std::size_t>(v)] &&
                2 * sizes[static_cast<std::size_t>(labels[static_cast<std::size_t>(u)])] > n)
                out.emplace_back(u, v);
    return out;
}

std::vector<VertexPair> gbp_spine(const Graph& g, int budget_n) {
    require_even(g, "gbp_spine");
    const int n = g.num_vertices();
    if (n > budget_n)
        throw BudgetExceeded(fmt::format("gbp_spine: n = {} exceeds the enumeration budget {}", n, budget_n));
    if (n == 0)
        return {};
    // (u, v) is a member iff some balanced P leaves the uncut edges bisectable
    // and adding (u, v) to them is not.
    std::vector<std::uint8_t> member(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), 0);
    std::set<std::vector<int>> seen;
    for_each_bisection(n, [&](const std::vector<std::uint8_t>& side) {
        std::vector<std::pair<int, int>> uncut;
        for (auto [u, v] : g.edges())
            if (side[static_cast<std::size_t>(u)] == side[static_cast<std::size_t>(v)])
                uncut.emplace_back(u, v);
        auto labels = Graph(n, std::move(uncut)).component_labels();
        if (!seen.insert(labels).second)
            return;
        auto sizes = component_sizes(labels);
        const int comps = static_cast<int>(sizes.size());
        for (int x = 0; x < comps; ++x)
            for (int y = x + 1; y < comps; ++y) {
                std::vector<int> merged;
                for (int z = 0; z < comps; ++z)
                    if (z != x && z != y)
                        merged.push_back(sizes[static_cast<std::size_t>(z)]);
                merged.push_back(sizes[static_cast<std::size_t>(x)] + sizes[static_cast<std::size_t>(y)]);
                if (packable(merged, n / 2))
                    continue;
                for (int u = 0; u < n; ++u)
                    for (int v = u + 1; v < n; ++v) {
                        const int lu = labels[static_cast<std::size_t>(u)];
                        const int lv = labels[static_cast<std::size_t>(v)];
                        if ((lu == x && lv == y) || (lu == y && lv == x))
                            member[pair_index(u, v, n)] = 1;
                    }
            }
    });
    std::vector<VertexPair> out;
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v)
            if (member[pair_index(u, v, n)])
                out.emplace_back(u, v);
    return out;
}

GbpBackbone gbp_backbone_exact(const Graph& g, int budget_n) {
    require_even(g, "gbp_backbone_exact");
    const int n = g.num_vertices();
    if (n > budget_n)
        throw BudgetExceeded(fmt::format("gbp_backbone_exact: n = {} exceeds the enumeration budget {}", n, budget_n));
    GbpBackbone out;
    if (n < 2)
        return out;
    std::size_t best = static_cast<std::size_t>(-1);
    std::vector<std::uint8_t> separated(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), 0);
    for_each_bisection(n, [&](const std::vector<std::uint8_t>& side) {
        std::size_t cut = 0;
        for (auto [u, v] : g.edges())
            cut += side[static_cast<std::size_t>(u)] != side[static_cast<std::size_t>(v)] ? 1 : 0;
        if (cut > best)
            return;
        if (cut < best) {
            best = cut;
            out.optimal_partitions = 0;
            for (int u = 0; u < n; ++u)
                for (int v = u + 1; v < n; ++v)
                    separated[pair_index(u, v, n)] = side[static_cast<std::size_t>(u)] != side[static_cast<std::size_t>(v)];
        } else {
            for (int u = 0; u < n; ++u)
                for (int v = u + 1; v < n; ++v)
                    if (side[static_cast<std::size_t>(u)] == side[static_cast<std::size_t>(v)])
                        separated[pair_index(u, v, n)] = 0;
        }
        ++out.optimal_partitions;
    });
    out.opt = best;
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v)
            if (separated[pair_index(u, v, n)])
                out.pairs.emplace_back(u, v);
    out.fraction = fraction(out.pairs.size(), binomial(n, 2));
    return out;
}

std::string format_fraction(Rational r) {
    return fmt::format("{}/{} {:.6f}", r.numerator(), r.denominator(), boost::rational_cast<double>(r));
}

namespace {

void write_constraint(std::ostream& out, const Constraint& c) {
    out << "e " << c.template_id;
    for (int v : c.vars)
        out << ' ' << v + 1;
    if (c.is_signed())
        for (std::size_t j = 0; j < c.vars.size(); ++j)
            out << ' ' << (c.neg(j) ? '-' : '+');
    out << '\n';
}

} // namespace

void write_report(std::ostream& out, const ConstraintUniverse& u, const BackboneReport& r) {
    out << "backbone opt " << r.opt << '\n';
    for (auto i : r.constraints)
        write_constraint(out, u.constraints()[i]);
    for (int v : r.variables)
        out << "x " << v + 1 << '\n';
    out << "f_B " << format_fraction(r.f_B) << '\n';
    out << "f_BC " << format_fraction(r.f_BC) << '\n';
}

void write_report(std::ostream& out, const ConstraintUniverse& u, const SpineReport& r) {
    out << "spine " << (r.formula_sat ? "sat" : "unsat") << ' ' << r.method << (r.complete ? "" : " partial") << '\n';
    if (r.constraints_computed)
        for (auto i : r.constraints)
            write_constraint(out, u.constraints()[i]);
    for (int v : r.variables)
        out << "x " << v + 1 << '\n';
    out << "f_S " << format_fraction(r.f_S) << '\n';
    if (r.constraints_computed)
        out << "f_SC " << format_fraction(r.f_SC) << '\n';
    else
        out << "f_SC absent\n";
}

void write_pairs(std::ostream& out, const std::vector<VertexPair>& pairs, int n, const std::string& label) {
    out << label << '\n';
    for (auto [u, v] : pairs)
        out << "p " << u + 1 << ' ' << v + 1 << '\n';
    out << "fraction " << format_fraction(fraction(pairs.size(), binomial(n, 2))) << '\n';
}

} // namespace spinelab
