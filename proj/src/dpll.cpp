#include "spinelab/dpll.hpp"

#include <algorithm>
#include <string>

namespace spinelab {

namespace {
constexpr int kDecision = -1;
constexpr int kAssumption = -2;
constexpr int kNoConflict = -1;
} // namespace

std::string_view to_string(Branching b) {
    switch (b) {
    case Branching::moms:
        return "moms";
    case Branching::lexicographic:
        return "lex";
    }
    return "?";
}

Branching parse_branching(std::string_view name) {
    if (name == "moms")
        return Branching::moms;
    if (name == "lex")
        return Branching::lexicographic;
    throw ContractError("unknown branching policy '" + std::string(name) + "'");
}

namespace {

void check_structure(const ResolutionProof& proof, const CnfFormula* cnf) {
    for (std::size_t i = 0; i < proof.steps.size(); ++i) {
        const auto& s = proof.steps[i];
        const std::string where = "invalid proof: step " + std::to_string(i);
        Clause normalized = s.clause;
        if (!normalize_clause(normalized))
            throw Error(where + " stores a tautology");
        if (normalized != s.clause)
            throw Error(where + " clause is not in canonical order");
        if (s.kind == ProofStep::Kind::axiom) {
            if (!cnf)
                continue;
            if (s.origin >= cnf->clauses.size())
                throw Error(where + " cites a missing axiom");
            Clause axiom = cnf->clauses[s.origin];
            normalize_clause(axiom);
            if (axiom != s.clause)
                throw Error(where + " does not match its axiom");
            continue;
        }
        if (s.left >= i || s.right >= i)
            throw Error(where + " uses a later or own step");
        const auto& a = proof.steps[s.left].clause;
        const auto& b = proof.steps[s.right].clause;
        const bool a_pos = clause_contains(a, Lit::pos(s.pivot)) && clause_contains(b, Lit::neg(s.pivot));
        const bool a_neg = clause_contains(a, Lit::neg(s.pivot)) && clause_contains(b, Lit::pos(s.pivot));
        if (!a_pos && !a_neg)
            throw Error(where + " pivot does not occur with opposite signs");
        Clause expected = resolve(a, b, s.pivot);
        Clause check = expected;
        if (!normalize_clause(check))
            throw Error(where + " resolvent is a tautology");
        if (expected != s.clause)
            throw Error(where + " resolvent mismatch");
    }
}

} // namespace

void check_proof(const CnfFormula& cnf, const ResolutionProof& proof, bool require_refutation) {
    if (proof.steps.empty())
        throw Error("invalid proof: no steps");
    check_structure(proof, &cnf);
    if (require_refutation && !proof.final_clause().empty())
        throw Error("invalid proof: final clause is not empty");
}

ProofMetrics proof_metrics(const ResolutionProof& proof) {
    if (proof.steps.empty())
        throw Error("invalid proof: no steps");
    check_structure(proof, nullptr);
    if (!proof.final_clause().empty())
        throw Error("invalid proof: final clause is not empty");
    ProofMetrics m;
    m.size = proof.steps.size();
    for (const auto& s : proof.steps)
        m.width = std::max(m.width, s.clause.size());
    return m;
}

DpllSolver::DpllSolver(int num_vars)
    : num_vars_(num_vars), occurs_(static_cast<std::size_t>(2 * num_vars)), value_(static_cast<std::size_t>(num_vars), -1),
      reason_(static_cast<std::size_t>(num_vars), kDecision), score_pos_(static_cast<std::size_t>(num_vars), 0),
      score_neg_(static_cast<std::size_t>(num_vars), 0) {}

DpllSolver::DpllSolver(int num_vars, std::span<const Clause> clauses) : DpllSolver(num_vars) { add_clauses(clauses); }

void DpllSolver::add_clauses(std::span<const Clause> clauses) {
    for (const auto& c : clauses)
        add_clause(c);
}

void DpllSolver::add_clause(Clause clause) {
    const bool proper = normalize_clause(clause);
    for (Lit l : clause)
        if (l.var() < 0 || l.var() >= num_vars_)
            throw ContractError("clause literal out of range");
    const auto idx = static_cast<std::uint32_t>(clauses_.size());
    clauses_.push_back(std::move(clause));
    // A tautology is permanently satisfied and never indexed.
    true_count_.push_back(proper ? 0 : 1);
    false_count_.push_back(0);
    if (proper)
        for (Lit l : clauses_.back())
            occurs_[l.code].push_back(idx);
}

int DpllSolver::assign(Lit l, int reason) {
    const auto v = static_cast<std::size_t>(l.var());
    value_[v] = l.negative() ? 0 : 1;
    reason_[v] = reason;
    trail_.push_back(l);
    for (auto c : occurs_[l.code])
        ++true_count_[c];
    int conflict = kNoConflict;
    for (auto c : occurs_[(~l).code]) {
        const auto f = ++false_count_[c];
        if (true_count_[c] != 0)
            continue;
        const auto size = clauses_[c].size();
        if (f == size) {
            if (conflict == kNoConflict)
                conflict = static_cast<int>(c);
        } else if (f + 1 == size) {
            pending_.push_back(c);
        }
    }
    return conflict;
}

int DpllSolver::propagate() {
    std::size_t head = 0;
    while (head < pending_.size()) {
        const auto c = pending_[head++];
        if (true_count_[c] != 0)
            continue;
        const auto& clause = clauses_[c];
        if (false_count_[c] == clause.size()) {
            pending_.clear();
            return static_cast<int>(c);
        }
        for (Lit l : clause) {
            if (value_[static_cast<std::size_t>(l.var())] < 0) {
                int conflict = assign(l, static_cast<int>(c));
                if (conflict != kNoConflict) {
                    pending_.clear();
                    return conflict;
                }
                break;
            }
        }
    }
    pending_.clear();
    return kNoConflict;
}

void DpllSolver::undo_to(std::size_t trail_size) {
    while (trail_.size() > trail_size) {
        Lit l = trail_.back();
        trail_.pop_back();
        for (auto c : occurs_[l.code])
            --true_count_[c];
        for (auto c : occurs_[(~l).code])
            --false_count_[c];
        value_[static_cast<std::size_t>(l.var())] = -1;
    }
}

std::optional<Lit> DpllSolver::pick_branch() {
    if (options_.branching == Branching::lexicographic) {
        int best = -1;
        for (std::size_t c = 0; c < clauses_.size(); ++c) {
            if (true_count_[c] != 0)
                continue;
            for (Lit l : clauses_[c])
                if (value_[static_cast<std::size_t>(l.var())] < 0 && (best < 0 || l.var() < best))
                    best = l.var();
        }
        if (best < 0)
            return std::nullopt;
        return Lit::pos(best);
    }

    std::size_t shortest = SIZE_MAX;
    for (std::size_t c = 0; c < clauses_.size(); ++c)
        if (true_count_[c] == 0)
            shortest = std::min(shortest, clauses_[c].size() - false_count_[c]);
    if (shortest == SIZE_MAX)
        return std::nullopt;

    std::vector<int> touched;
    for (std::size_t c = 0; c < clauses_.size(); ++c) {
        if (true_count_[c] != 0 || clauses_[c].size() - false_count_[c] != shortest)
            continue;
        for (Lit l : clauses_[c]) {
            const auto v = static_cast<std::size_t>(l.var());
            if (value_[v] >= 0)
                continue;
            if (score_pos_[v] == 0 && score_neg_[v] == 0)
                touched.push_back(l.var());
            ++(l.negative() ? score_neg_[v] : score_pos_[v]);
        }
    }
    int best = -1;
    std::uint32_t best_score = 0;
    for (int v : touched) {
        const auto s = score_pos_[static_cast<std::size_t>(v)] + score_neg_[static_cast<std::size_t>(v)];
        if (s > best_score || (s == best_score && v < best)) {
            best = v;
            best_score = s;
        }
    }
    const bool positive = score_pos_[static_cast<std::size_t>(best)] >= score_neg_[static_cast<std::size_t>(best)];
    for (int v : touched)
        score_pos_[static_cast<std::size_t>(v)] = score_neg_[static_cast<std::size_t>(v)] = 0;
    return positive ? Lit::pos(best) : Lit::neg(best);
}

std::size_t DpllSolver::push_axiom(std::size_t clause) {
    ProofStep s;
    s.kind = ProofStep::Kind::axiom;
    s.clause = clauses_[clause];
    s.origin = clause;
    proof_.steps.push_back(std::move(s));
    return proof_.steps.size() - 1;
}

std::size_t DpllSolver::push_resolvent(std::size_t a, std::size_t b, int pivot) {
    ProofStep s;
    s.kind = ProofStep::Kind::resolve;
    s.clause = resolve(proof_.steps[a].clause, proof_.steps[b].clause, pivot);
    s.left = a;
    s.right = b;
    s.pivot = pivot;
    proof_.steps.push_back(std::move(s));
    return proof_.steps.size() - 1;
}

// Resolves away every literal falsified by a propagation made at this level,
// newest first, leaving a clause falsified by decisions and earlier levels.
std::size_t DpllSolver::derive_level_clause(std::size_t derived, std::size_t level_start, bool has_decision) {
    const std::size_t first = level_start + (has_decision ? 1 : 0);
    for (std::size_t i = trail_.size(); i-- > first;) {
        Lit assigned = trail_[i];
        if (!clause_contains(proof_.steps[derived].clause, ~assigned))
            continue;
        const int reason = reason_[static_cast<std::size_t>(assigned.var())];
        if (reason < 0)
            throw Error("internal: proof extraction reached an assumption");
        derived = push_resolvent(derived, push_axiom(static_cast<std::size_t>(reason)), assigned.var());
    }
    return derived;
}

DpllSolver::Refutation DpllSolver::search(std::optional<Lit> decision) {
    ++nodes_;
    if (options_.node_limit != 0 && nodes_ > options_.node_limit)
        throw BudgetExceeded("DPLL node limit " + std::to_string(options_.node_limit) + " exceeded");

    const std::size_t level_start = trail_.size();
    int conflict = kNoConflict;
    if (decision)
        conflict = assign(*decision, kDecision);
    if (conflict == kNoConflict)
        conflict = propagate();
    else
        pending_.clear();

    if (conflict == kNoConflict) {
        auto branch = pick_branch();
        if (!branch) {
            model_.assign(static_cast<std::size_t>(num_vars_), 0);
            for (int v = 0; v < num_vars_; ++v)
                model_[static_cast<std::size_t>(v)] = value_[static_cast<std::size_t>(v)] > 0 ? 1 : 0;
            return {true, 0};
        }
        const bool proving = proving_;
        Refutation left = search(*branch);
        if (left.sat)
            return left;
        const bool need_right = proving && clause_contains(proof_.steps[left.step].clause, ~*branch);
        // The second branch is always explored so node counts do not depend on proof logging.
        proving_ = need_right;
        Refutation right = search(~*branch);
        proving_ = proving;
        if (right.sat)
            return right;
        if (!proving) {
            undo_to(level_start);
            return {false, 0};
        }
        std::size_t derived;
        if (!need_right)
            derived = left.step;
        else if (!clause_contains(proof_.steps[right.step].clause, *branch))
            derived = right.step;
        else
            derived = push_resolvent(left.step, right.step, branch->var());
        derived = derive_level_clause(derived, level_start, decision.has_value());
        undo_to(level_start);
        return {false, derived};
    }

    if (!proving_) {
        undo_to(level_start);
        return {false, 0};
    }
    std::size_t derived = push_axiom(static_cast<std::size_t>(conflict));
    derived = derive_level_clause(derived, level_start, decision.has_value());
    undo_to(level_start);
    return {false, derived};
}

namespace {

ResolutionProof compact(const ResolutionProof& proof, std::size_t root) {
    std::vector<std::uint8_t> keep(proof.steps.size(), 0);
    std::vector<std::size_t> stack{root};
    while (!stack.empty()) {
        auto i = stack.back();
        stack.pop_back();
        if (keep[i])
            continue;
        keep[i] = 1;
        if (proof.steps[i].kind == ProofStep::Kind::resolve) {
            stack.push_back(proof.steps[i].left);
            stack.push_back(proof.steps[i].right);
        }
    }
    std::vector<std::size_t> renumber(proof.steps.size(), 0);
    ResolutionProof out;
    for (std::size_t i = 0; i <= root; ++i) {
        if (!keep[i])
            continue;
        renumber[i] = out.steps.size();
        ProofStep s = proof.steps[i];
        if (s.kind == ProofStep::Kind::resolve) {
            s.left = renumber[s.left];
            s.right = renumber[s.right];
        }
        out.steps.push_back(std::move(s));
    }
    return out;
}

} // namespace

DpllResult DpllSolver::solve(const DpllOptions& options, std::span<const Lit> assumptions) {
    options_ = options;
    proving_ = options.build_proof && assumptions.empty();
    nodes_ = 0;
    proof_.steps.clear();
    model_.clear();
    pending_.clear();
    undo_to(0);

    DpllResult result;
    // Root: empty clauses, assumptions, then unit clauses.
    int conflict = kNoConflict;
    for (std::size_t c = 0; c < clauses_.size() && conflict == kNoConflict; ++c)
        if (clauses_[c].empty())
            conflict = static_cast<int>(c);
    for (Lit a : assumptions) {
        if (conflict != kNoConflict)
            break;
        const int current = value_[static_cast<std::size_t>(a.var())];
        if (current >= 0) {
            if (a.holds(current))
                continue;
            conflict = -2;
            break;
        }
        conflict = assign(a, kAssumption);
    }
    if (conflict == kNoConflict)
        for (std::size_t c = 0; c < clauses_.size(); ++c)
            if (true_count_[c] == 0 && clauses_[c].size() - false_count_[c] == 1)
                pending_.push_back(static_cast<std::uint32_t>(c));

    if (conflict != kNoConflict) {
        result.trace.nodes = 1;
        if (proving_ && conflict >= 0) {
            push_axiom(static_cast<std::size_t>(conflict));
            result.trace.proof = proof_;
        }
        pending_.clear();
        undo_to(0);
        return result;
    }

    Refutation r = search(std::nullopt);
    result.trace.nodes = nodes_;
    if (r.sat) {
        result.sat = true;
        result.model = model_;
    } else if (proving_) {
        result.trace.proof = compact(proof_, r.step);
    }
    undo_to(0);
    proof_.steps.clear();
    return result;
}

DpllResult dpll_refute(const CnfFormula& cnf, const DpllOptions& options) {
    DpllSolver solver(cnf.num_vars, cnf.clauses);
    return solver.solve(options);
}

} // namespace spinelab
