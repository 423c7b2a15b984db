#include "spinelab/solver.hpp"

#include "spinelab/structure.hpp"

#include <algorithm>
#include <numeric>

namespace spinelab {

SubsetSolver::SubsetSolver(const Formula& f) : formula_(f), encoding_(f) {
    groups_.reserve(f.size());
    for (const auto& c : f.constraints())
        groups_.push_back(encoding_.holds(c));
}

std::optional<Assignment> SubsetSolver::model(std::span<const std::size_t> subset, std::span<const Clause> extra) const {
    DpllSolver solver(encoding_.engine_vars(), encoding_.base());
    for (auto i : subset)
        solver.add_clauses(groups_[i]);
    solver.add_clauses(extra);
    auto r = solver.solve();
    if (!r.sat)
        return std::nullopt;
    return encoding_.decode(r.model);
}

std::optional<Assignment> SubsetSolver::model_all(std::span<const Clause> extra) const {
    std::vector<std::size_t> all(formula_.size());
    std::iota(all.begin(), all.end(), 0);
    return model(all, extra);
}

DecideResult decide(const Formula& f) {
    SubsetSolver solver(f);
    auto m = solver.model_all();
    if (!m)
        return {false, {}};
    return {true, std::move(*m)};
}

namespace {

// Branch and bound over CSP variables. The bound counts constraints that no
// extension of the current partial assignment can satisfy.
class BranchAndBound {
  public:
    BranchAndBound(const Formula& f, std::size_t bound) : f_(f), best_(bound), a_(f.num_vars(), kUnassigned) {
        const auto n = static_cast<std::size_t>(f.num_vars());
        touching_.resize(n);
        for (std::size_t i = 0; i < f.size(); ++i)
            for (int v : f[i].vars)
                touching_[static_cast<std::size_t>(v)].push_back(i);
        for (int v = 0; v < f.num_vars(); ++v)
            if (!touching_[static_cast<std::size_t>(v)].empty())
                order_.push_back(v);
        std::stable_sort(order_.begin(), order_.end(), [&](int x, int y) {
            return touching_[static_cast<std::size_t>(x)].size() > touching_[static_cast<std::size_t>(y)].size();
        });
        dead_.assign(f.size(), 0);
        accepted_.resize(f.size());
        for (std::size_t i = 0; i < f.size(); ++i) {
            const auto& tpl = f.relation(i);
            for (std::size_t idx = 0; idx < tpl.tuple_count(); ++idx)
                if (tpl.accepts(idx))
                    accepted_[i].push_back(tpl.tuple_at(idx));
        }
    }

    std::optional<OptResult> run() {
        // Constraints with empty relations are dead from the start.
        for (std::size_t i = 0; i < f_.size(); ++i)
            if (accepted_[i].empty()) {
                dead_[i] = 1;
                ++cost_;
            }
        search(0);
        if (!found_)
            return std::nullopt;
        return OptResult{best_, witness_};
    }

  private:
    bool is_dead(std::size_t i) const {
        const auto& c = f_[i];
        for (const auto& tuple : accepted_[i]) {
            bool ok = true;
            for (std::size_t j = 0; j < tuple.size() && ok; ++j) {
                const int value = a_[c.vars[j]];
                if (value != kUnassigned && (tuple[j] ^ (c.neg(j) ? 1 : 0)) != value)
                    ok = false;
            }
            if (ok)
                return false;
        }
        return true;
    }

    std::size_t count_new_dead(int v) const {
        std::size_t count = 0;
        for (auto i : touching_[static_cast<std::size_t>(v)])
            if (!dead_[i] && is_dead(i))
                ++count;
        return count;
    }

    void search(std::size_t pos) {
        if (cost_ >= best_)
            return;
        if (pos == order_.size()) {
            best_ = cost_;
            found_ = true;
            witness_ = a_;
            for (auto& value : witness_.values)
                if (value == kUnassigned)
                    value = 0;
            return;
        }
        const int v = order_[pos];
        const int t = f_.domain();
        std::vector<std::pair<std::size_t, int>> choices;
        for (int d = 0; d < t; ++d) {
            a_[v] = d;
            choices.emplace_back(count_new_dead(v), d);
        }
        std::stable_sort(choices.begin(), choices.end());
        std::vector<std::size_t> marked;
        for (auto [added, d] : choices) {
            if (cost_ + added >= best_)
                break;
            a_[v] = d;
            marked.clear();
            for (auto i : touching_[static_cast<std::size_t>(v)])
                if (!dead_[i] && is_dead(i)) {
                    dead_[i] = 1;
                    marked.push_back(i);
                }
            cost_ += marked.size();
            search(pos + 1);
            cost_ -= marked.size();
            for (auto i : marked)
                dead_[i] = 0;
        }
        a_[v] = kUnassigned;
    }

    const Formula& f_;
    std::size_t best_;
    bool found_ = false;
    std::size_t cost_ = 0;
    Assignment a_;
    Assignment witness_;
    std::vector<int> order_;
    std::vector<std::vector<std::size_t>> touching_;
    std::vector<std::uint8_t> dead_;
    std::vector<std::vector<std::vector<int>>> accepted_;
};

} // namespace

std::optional<OptResult> opt_below(const Formula& f, std::size_t bound) {
    return BranchAndBound(f, bound).run();
}

OptResult opt(const Formula& f) {
    auto r = opt_below(f, f.size() + 1);
    return std::move(*r);
}

MusRefutation refute_via_mus(const Formula& f, const DpllOptions& options) {
    if (f.domain() != 2)
        throw UnsupportedError("refute_via_mus requires t = 2");
    MusRefutation out;
    if (decide(f).sat) {
        out.sat = true;
        return out;
    }
    auto mus = mus_extract(f);
    out.mus_indices = mus.indices;
    out.mus = mus.subformula;
    auto cnf = to_cnf(*out.mus);
    auto r = dpll_refute(cnf, options);
    if (r.sat)
        throw Error("internal: extracted MUS is satisfiable");
    out.trace = std::move(r.trace);
    return out;
}

} // namespace spinelab
