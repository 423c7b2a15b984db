#pragma once

#include "spinelab/cnf.hpp"
#include "spinelab/core.hpp"
#include "spinelab/dpll.hpp"

#include <optional>
#include <span>
#include <vector>

namespace spinelab {

/// Satisfiability of subsets of one formula's constraints, optionally
/// conjoined with extra clauses over the same engine variables.
class SubsetSolver {
  public:
    explicit SubsetSolver(const Formula& f);

    const Formula& formula() const { return formula_; }
    const Encoding& encoding() const { return encoding_; }
    const std::vector<Clause>& group(std::size_t i) const { return groups_[i]; }

    std::optional<Assignment> model(std::span<const std::size_t> subset, std::span<const Clause> extra = {}) const;
    std::optional<Assignment> model_all(std::span<const Clause> extra = {}) const;
    bool satisfiable(std::span<const std::size_t> subset, std::span<const Clause> extra = {}) const {
        return model(subset, extra).has_value();
    }

  private:
    Formula formula_;
    Encoding encoding_;
    std::vector<std::vector<Clause>> groups_;
};

struct DecideResult {
    bool sat = false;
    Assignment witness;
};

DecideResult decide(const Formula& f);

struct OptResult {
    std::size_t value = 0;
    Assignment witness;
};

/// Minimum number of violated constraints over total assignments (branch and bound).
OptResult opt(const Formula& f);

/// Best assignment violating fewer than `bound` constraints, if one exists.
std::optional<OptResult> opt_below(const Formula& f, std::size_t bound);

struct MusRefutation {
    bool sat = false;
    DpllTrace trace;
    std::vector<std::size_t> mus_indices;
    std::optional<Formula> mus;
};

/// Unsat inputs are first shrunk to a minimally unsatisfiable subformula and
/// only its CNF is refuted, so the search tree spans Var(MUS) alone.
MusRefutation refute_via_mus(const Formula& f, const DpllOptions& options = {.build_proof = true});

} // namespace spinelab
