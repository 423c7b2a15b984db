#pragma once

#include "spinelab/cnf.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace spinelab {

enum class Branching {
    /// Most occurrences in shortest open clauses; ties go to the lowest variable.
    moms,
    /// Lowest unassigned variable occurring in an open clause, true branch first.
    lexicographic,
};

std::string_view to_string(Branching b);
Branching parse_branching(std::string_view name);

struct ProofStep {
    enum class Kind { axiom, resolve };

    Kind kind = Kind::axiom;
    Clause clause;
    /// Index into the input CNF for axioms.
    std::size_t origin = 0;
    /// Earlier step indices for resolution steps.
    std::size_t left = 0;
    std::size_t right = 0;
    int pivot = -1;
};

/// Tree-like resolution derivation; a refutation ends in the empty clause.
struct ResolutionProof {
    std::vector<ProofStep> steps;

    bool empty() const { return steps.empty(); }
    const Clause& final_clause() const { return steps.back().clause; }
};

struct ProofMetrics {
    std::size_t size = 0;
    std::size_t width = 0;
};

/// Step-by-step check against the input CNF. Throws Error naming the first bad step.
void check_proof(const CnfFormula& cnf, const ResolutionProof& proof, bool require_refutation = true);

/// Size and width of a proof; validates resolvent structure and the final empty clause.
ProofMetrics proof_metrics(const ResolutionProof& proof);

struct DpllTrace {
    std::uint64_t nodes = 0;
    ResolutionProof proof;
};

struct DpllOptions {
    Branching branching = Branching::moms;
    bool build_proof = false;
    /// 0 means unlimited; otherwise BudgetExceeded once exceeded.
    std::uint64_t node_limit = 0;
};

struct DpllResult {
    bool sat = false;
    /// 0/1 per variable when sat; free variables are 0.
    std::vector<int> model;
    DpllTrace trace;
};

/// Plain DPLL (unit propagation, no learning) over a fixed clause database.
/// Clauses may be appended between solves; assumptions are asserted at the root.
class DpllSolver {
  public:
    explicit DpllSolver(int num_vars);
    DpllSolver(int num_vars, std::span<const Clause> clauses);

    int num_vars() const { return num_vars_; }
    std::size_t num_clauses() const { return clauses_.size(); }
    void add_clause(Clause clause);
    void add_clauses(std::span<const Clause> clauses);

    DpllResult solve(const DpllOptions& options = {}, std::span<const Lit> assumptions = {});

  private:
    struct Refutation {
        bool sat = false;
        std::size_t step = 0; // proof step holding the derived clause
    };

    Refutation search(std::optional<Lit> decision);
    int assign(Lit l, int reason);
    int propagate();
    void undo_to(std::size_t trail_size);
    std::optional<Lit> pick_branch();
    std::size_t derive_level_clause(std::size_t derived, std::size_t level_start, bool has_decision);
    std::size_t push_axiom(std::size_t clause);
    std::size_t push_resolvent(std::size_t a, std::size_t b, int pivot);

    int num_vars_;
    std::vector<Clause> clauses_;
    std::vector<std::vector<std::uint32_t>> occurs_;
    std::vector<int> value_;
    std::vector<int> reason_;
    std::vector<std::uint32_t> true_count_;
    std::vector<std::uint32_t> false_count_;
    std::vector<Lit> trail_;
    std::vector<std::uint32_t> pending_;
    std::vector<std::uint32_t> score_pos_;
    std::vector<std::uint32_t> score_neg_;

    DpllOptions options_;
    bool proving_ = false;
    std::uint64_t nodes_ = 0;
    std::vector<int> model_;
    ResolutionProof proof_;
};

/// Unsat/sat decision with optional proof, honouring the CNF's clause list as-is.
DpllResult dpll_refute(const CnfFormula& cnf, const DpllOptions& options = {});

} // namespace spinelab
