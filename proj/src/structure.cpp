#include "spinelab/structure.hpp"

#include "flow.hpp"
#include "spinelab/solver.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <numeric>

namespace spinelab {

MusResult mus_extract(const Formula& f) {
    SubsetSolver solver(f);
    std::vector<std::size_t> current(f.size());
    std::iota(current.begin(), current.end(), 0);
    if (solver.satisfiable(current))
        throw ContractError("mus_extract: input formula is satisfiable");

    std::vector<std::pair<std::size_t, Assignment>> kept;
    std::vector<std::size_t> trial;
    for (std::size_t pos = 0; pos < current.size();) {
        const std::size_t candidate = current[pos];
        trial.clear();
        for (auto i : current)
            if (i != candidate)
                trial.push_back(i);
        if (auto m = solver.model(trial)) {
            kept.emplace_back(candidate, std::move(*m));
            ++pos;
        } else {
            current = trial;
        }
    }

    MusResult out{current, f.subformula(current), {}};
    // A certificate found earlier still satisfies the smaller remainder.
    for (auto i : current)
        for (auto& [idx, model] : kept)
            if (idx == i) {
                out.certificates.push_back(model);
                break;
            }
    return out;
}

namespace {

detail::ClosureProblem closure_of(const Formula& f, std::int64_t constraint_profit, std::int64_t variable_cost) {
    detail::ClosureProblem p;
    p.item_profit.assign(f.size(), constraint_profit);
    p.resource_cost.assign(static_cast<std::size_t>(f.num_vars()), variable_cost);
    p.item_needs.reserve(f.size());
    for (const auto& c : f.constraints())
        p.item_needs.push_back(c.vars);
    return p;
}

std::size_t distinct_vars(const Formula& f, const std::vector<std::size_t>& subset) {
    std::vector<int> vars;
    for (auto i : subset)
        vars.insert(vars.end(), f[i].vars.begin(), f[i].vars.end());
    std::sort(vars.begin(), vars.end());
    return static_cast<std::size_t>(std::unique(vars.begin(), vars.end()) - vars.begin());
}

std::vector<std::size_t> to_indices(const std::vector<int>& items) {
    return {items.begin(), items.end()};
}

} // namespace

DensityReport c_star(const Formula& f) {
    if (f.empty())
        throw ContractError("c_star: empty formula");
    DensityReport report;
    std::vector<std::size_t> witness(f.size());
    std::iota(witness.begin(), witness.end(), 0);
    Rational ratio(static_cast<std::int64_t>(f.size()), static_cast<std::int64_t>(distinct_vars(f, witness)));
    // Dinkelbach iteration: each improving closure has a strictly larger ratio.
    for (;;) {
        auto problem = closure_of(f, ratio.denominator(), ratio.numerator());
        auto sol = detail::max_closure(problem);
        if (sol.value <= 0 || sol.items.empty())
            break;
        witness = to_indices(sol.items);
        ratio = Rational(static_cast<std::int64_t>(witness.size()), static_cast<std::int64_t>(sol.resources.size()));
    }
    report.c_star = ratio;
    report.c_star_witness = witness;
    return report;
}

DensityReport delta_star(const Formula& f, Rational r) {
    if (r < 1)
        throw ContractError("delta_star requires r >= 1");
    if (f.empty())
        throw ContractError("delta_star: empty formula");
    DensityReport report;
    report.r = r;
    const std::int64_t p = r.numerator();
    const std::int64_t q = r.denominator();
    auto problem = closure_of(f, p, 2 * q);
    auto best = detail::max_closure(problem);
    if (best.items.empty()) {
        // The empty set won; the best nonempty set must contain some constraint.
        bool have = false;
        for (std::size_t i = 0; i < f.size(); ++i) {
            problem.forced = {static_cast<int>(i)};
            auto sol = detail::max_closure(problem);
            if (!have || sol.value > best.value) {
                best = sol;
                have = true;
            }
        }
    }
    report.delta_star = Rational(best.value, q);
    report.delta_star_witness = to_indices(best.items);
    return report;
}

Hypergraph formula_hypergraph(const Formula& f) {
    Hypergraph h;
    h.n = f.num_vars();
    for (const auto& c : f.constraints()) {
        auto e = c.vars;
        std::sort(e.begin(), e.end());
        h.edges.push_back(std::move(e));
    }
    return h;
}

namespace {

// Enumerates vertex sets of size 1..max_size; returns the first violating one.
std::optional<std::vector<int>> exhaustive_violation(const Hypergraph& h, int max_size, Rational y) {
    std::vector<std::uint64_t> masks;
    for (const auto& e : h.edges) {
        std::uint64_t m = 0;
        for (int v : e)
            m |= std::uint64_t{1} << v;
        masks.push_back(m);
    }
    std::vector<int> chosen;
    std::optional<std::vector<int>> found;
    auto recurse = [&](auto&& self, int start, std::uint64_t set, int target) -> bool {
        if (static_cast<int>(chosen.size()) == target) {
            std::int64_t inside = 0;
            for (auto m : masks)
                if ((m & ~set) == 0)
                    ++inside;
            if (Rational(inside) > y * static_cast<std::int64_t>(target)) {
                found = chosen;
                return true;
            }
            return false;
        }
        for (int v = start; v < h.n; ++v) {
            chosen.push_back(v);
            if (self(self, v + 1, set | (std::uint64_t{1} << v), target))
                return true;
            chosen.pop_back();
        }
        return false;
    };
    for (int s = 1; s <= max_size; ++s)
        if (recurse(recurse, 0, 0, s))
            return found;
    return std::nullopt;
}

} // namespace

SparsityVerdict is_xy_sparse(const Hypergraph& h, Rational x, Rational y, std::uint64_t enumeration_budget) {
    if (x <= 0 || y <= 0)
        throw ContractError("is_xy_sparse requires x, y > 0");
    SparsityVerdict verdict;
    verdict.x = x;
    verdict.y = y;
    const Rational limit = x * static_cast<std::int64_t>(h.n);
    const int max_size = static_cast<int>(boost::rational_cast<double>(limit) + 1e-9);

    // Flow search over vertex cost lambda >= y: max (edges inside) - lambda |S|.
    auto closure = [&](Rational lambda) {
        detail::ClosureProblem p;
        p.item_profit.assign(h.edges.size(), lambda.denominator());
        p.item_needs = h.edges;
        p.resource_cost.assign(static_cast<std::size_t>(h.n), lambda.numerator());
        return detail::max_closure(p);
    };
    auto sol = closure(y);
    if (sol.value <= 0) {
        verdict.sparse = true;
        verdict.method = "min-cut";
        return verdict;
    }
    // Raising lambda to the density of the current maximizer shrinks it; any
    // maximizer with positive value at lambda >= y also violates at y.
    for (;;) {
        if (static_cast<int>(sol.resources.size()) <= max_size) {
            verdict.sparse = false;
            verdict.violating_set = sol.resources;
            verdict.method = "min-cut";
            return verdict;
        }
        Rational density(static_cast<std::int64_t>(sol.items.size()), static_cast<std::int64_t>(sol.resources.size()));
        auto next = closure(density);
        if (next.value <= 0 || next.items.empty())
            break;
        sol = next;
    }

    std::uint64_t candidates = 0;
    for (int s = 1; s <= max_size; ++s)
        candidates += static_cast<std::uint64_t>(binomial(h.n, s));
    if (h.n > 64 || candidates > enumeration_budget)
        throw BudgetExceeded("is_xy_sparse: flow search inconclusive and " + std::to_string(candidates) +
                             " candidate sets exceed the enumeration budget");
    verdict.method = "exhaustive";
    if (auto v = exhaustive_violation(h, max_size, y)) {
        verdict.sparse = false;
        verdict.violating_set = *v;
    }
    return verdict;
}

double x_bound(double y, double c, int k) {
    const double exponent_den = y * (k - 1) - 1.0;
    if (!(exponent_den > 0.0))
        throw ContractError("x_bound: requires y > 1/(k-1)");
    if (!(c > 0.0))
        throw ContractError("x_bound: requires c > 0");
    const double e = std::numbers::e;
    const double base = (1.0 / (2.0 * e)) * std::pow(y / (c * e), y);
    return std::pow(base, 1.0 / exponent_den);
}

std::vector<Clause> implicate_check(const ConstraintTemplate& tpl, int max_len) {
    if (tpl.domain() != 2)
        throw UnsupportedError("implicate_check requires t = 2");
    if (max_len < 1 || max_len > 2)
        throw ContractError("implicate_check supports max_len 1 or 2");
    const int k = tpl.arity();
    std::vector<std::vector<int>> sat;
    for (std::size_t idx = 0; idx < tpl.tuple_count(); ++idx)
        if (tpl.accepts(idx))
            sat.push_back(tpl.tuple_at(idx));
    auto entailed = [&](const Clause& clause) {
        return std::all_of(sat.begin(), sat.end(), [&](const std::vector<int>& tuple) {
            return std::any_of(clause.begin(), clause.end(),
                               [&](Lit l) { return l.holds(tuple[static_cast<std::size_t>(l.var())]); });
        });
    };
    std::vector<Clause> out;
    for (int i = 0; i < k; ++i)
        for (bool neg : {false, true}) {
            Clause c{Lit::make(i, neg)};
            if (entailed(c))
                out.push_back(c);
        }
    if (max_len == 2)
        for (int i = 0; i < k; ++i)
            for (int j = i + 1; j < k; ++j)
                for (bool ni : {false, true})
                    for (bool nj : {false, true}) {
                        Clause c{Lit::make(i, ni), Lit::make(j, nj)};
                        if (entailed(c))
                            out.push_back(c);
                    }
    return out;
}

VariableRoles variable_roles(const Formula& f) {
    std::vector<int> count(static_cast<std::size_t>(f.num_vars()), 0);
    for (const auto& c : f.constraints())
        for (int v : c.vars)
            ++count[static_cast<std::size_t>(v)];
    VariableRoles roles;
    for (const auto& c : f.constraints()) {
        std::vector<int> priv;
        for (int v : c.vars)
            if (count[static_cast<std::size_t>(v)] == 1)
                priv.push_back(v);
        roles.private_vars.push_back(std::move(priv));
    }
    return roles;
}

std::optional<PeelingOrder> free_private_ordering(const Formula& f) {
    const int need = std::max(0, f.arity() - 2);
    std::vector<int> count(static_cast<std::size_t>(f.num_vars()), 0);
    for (const auto& c : f.constraints())
        for (int v : c.vars)
            ++count[static_cast<std::size_t>(v)];
    std::vector<std::uint8_t> removed(f.size(), 0);
    std::vector<std::size_t> peeled;
    // Removing a constraint never lowers another's private count, so greedy peeling is complete.
    while (peeled.size() < f.size()) {
        bool progress = false;
        for (std::size_t i = 0; i < f.size(); ++i) {
            if (removed[i])
                continue;
            int priv = 0;
            for (int v : f[i].vars)
                priv += count[static_cast<std::size_t>(v)] == 1 ? 1 : 0;
            if (priv < need)
                continue;
            removed[i] = 1;
            for (int v : f[i].vars)
                --count[static_cast<std::size_t>(v)];
            peeled.push_back(i);
            progress = true;
            break;
        }
        if (!progress)
            return std::nullopt;
    }
    std::reverse(peeled.begin(), peeled.end());
    return PeelingOrder{peeled};
}

std::vector<std::vector<int>> free_variables(const Formula& f, const PeelingOrder& order) {
    std::vector<std::uint8_t> seen(static_cast<std::size_t>(f.num_vars()), 0);
    std::vector<std::vector<int>> out;
    for (auto i : order.order) {
        std::vector<int> fresh;
        for (int v : f[i].vars)
            if (!seen[static_cast<std::size_t>(v)])
                fresh.push_back(v);
        for (int v : f[i].vars)
            seen[static_cast<std::size_t>(v)] = 1;
        out.push_back(std::move(fresh));
    }
    return out;
}

std::optional<Assignment> greedy_witness(const Formula& f, const PeelingOrder& order) {
    if (f.domain() != 2)
        throw UnsupportedError("greedy_witness requires t = 2");
    for (const auto& tpl : f.templates().templates())
        if (!implicate_check(tpl, 2).empty())
            throw ContractError("greedy_witness: template " + std::to_string(tpl.id()) +
                                " has an implicate of length <= 2");
    if (order.order.size() != f.size())
        throw ContractError("greedy_witness: ordering does not cover the formula");

    Assignment a(f.num_vars(), kUnassigned);
    for (auto i : order.order) {
        const auto& c = f[i];
        const auto& tpl = f.relation(i);
        int bound = 0;
        for (int v : c.vars)
            bound += a.assigned(v) ? 1 : 0;
        if (bound > 2)
            throw ContractError("greedy_witness: constraint " + std::to_string(i) + " has " + std::to_string(bound) +
                                " bound variables");
        bool placed = false;
        for (std::size_t idx = 0; idx < tpl.tuple_count() && !placed; ++idx) {
            if (!tpl.accepts(idx))
                continue;
            auto tuple = tpl.tuple_at(idx);
            bool consistent = true;
            for (std::size_t j = 0; j < tuple.size() && consistent; ++j) {
                const int value = tuple[j] ^ (c.neg(j) ? 1 : 0);
                if (a.assigned(c.vars[j]) && a[c.vars[j]] != value)
                    consistent = false;
            }
            if (!consistent)
                continue;
            for (std::size_t j = 0; j < tuple.size(); ++j)
                a[c.vars[j]] = tuple[j] ^ (c.neg(j) ? 1 : 0);
            placed = true;
        }
        if (!placed)
            return std::nullopt;
    }
    for (auto& v : a.values)
        if (v == kUnassigned)
            v = 0;
    if (!f.satisfied_by(a))
        return std::nullopt;
    return a;
}

std::size_t mu(const Formula& f, const Clause& clause) {
    if (f.domain() != 2)
        throw UnsupportedError("mu requires t = 2");
    const std::size_t m = f.size();
    if (m > 20)
        throw BudgetExceeded("mu: brute force limited to 20 constraints");
    Clause c = clause;
    if (!normalize_clause(c))
        return 0;

    std::vector<int> vars = f.variables();
    for (Lit l : c)
        vars.push_back(l.var());
    std::sort(vars.begin(), vars.end());
    vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
    if (vars.size() > 24)
        throw BudgetExceeded("mu: brute force limited to 24 variables");

    const std::size_t subsets = std::size_t{1} << m;
    // bad[S]: some assignment falsifying the clause satisfies every constraint of S.
    std::vector<std::uint8_t> bad(subsets, 0);
    Assignment a(f.num_vars(), 0);
    for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << vars.size()); ++bits) {
        for (std::size_t j = 0; j < vars.size(); ++j)
            a[vars[j]] = static_cast<int>((bits >> j) & 1U);
        bool falsified = std::none_of(c.begin(), c.end(), [&](Lit l) { return l.holds(a[l.var()]); });
        if (!falsified)
            continue;
        std::size_t mask = 0;
        for (std::size_t i = 0; i < m; ++i)
            if (f.satisfied(i, a))
                mask |= std::size_t{1} << i;
        bad[mask] = 1;
    }
    for (std::size_t b = 0; b < m; ++b)
        for (std::size_t s = 0; s < subsets; ++s)
            if (!(s >> b & 1U) && bad[s | (std::size_t{1} << b)])
                bad[s] = 1;
    std::size_t best = kMuInfinity;
    for (std::size_t s = 0; s < subsets; ++s)
        if (!bad[s])
            best = std::min<std::size_t>(best, static_cast<std::size_t>(std::popcount(s)));
    return best;
}

} // namespace spinelab
