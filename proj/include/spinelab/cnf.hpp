#pragma once

#include "spinelab/core.hpp"

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <vector>

namespace spinelab {

/// Boolean literal: code = 2 * var + negative.
struct Lit {
    std::uint32_t code = 0;

    static Lit make(int var, bool negative) {
        return Lit{static_cast<std::uint32_t>(var) * 2U + (negative ? 1U : 0U)};
    }
    static Lit pos(int var) { return make(var, false); }
    static Lit neg(int var) { return make(var, true); }

    int var() const { return static_cast<int>(code >> 1); }
    bool negative() const { return (code & 1U) != 0; }
    Lit operator~() const { return Lit{code ^ 1U}; }
    /// True iff the literal holds when its variable takes `value` (0/1).
    bool holds(int value) const { return (value != 0) != negative(); }

    /// DIMACS form: 1-indexed, negative for negated literals.
    int dimacs() const { return negative() ? -(var() + 1) : var() + 1; }

    auto operator<=>(const Lit&) const = default;
};

/// Sorted, duplicate-free literal list; the empty clause is the contradiction.
using Clause = std::vector<Lit>;

/// Sorts, drops repeated literals. Returns false if the clause is a tautology.
bool normalize_clause(Clause& c);
bool clause_contains(const Clause& c, Lit l);
/// Resolvent of a (containing pivot) and b (containing ~pivot) on pivot's variable.
Clause resolve(const Clause& a, const Clause& b, int pivot_var);

struct CnfFormula {
    int num_vars = 0;
    std::vector<Clause> clauses;
    /// Source constraint index of every clause (empty for hand-built CNFs).
    std::vector<std::size_t> origin;
};

/// Canonical maxterm CNF: one clause per falsifying tuple of each constraint (t = 2).
CnfFormula to_cnf(const Formula& f);

/// Clauses forbidding the falsifying tuples of a single constraint (t = 2).
std::vector<Clause> constraint_clauses(const ConstraintTemplate& tpl, const Constraint& c);

bool cnf_satisfied(const CnfFormula& cnf, const std::vector<int>& values);

void write_dimacs(std::ostream& out, const CnfFormula& cnf);
CnfFormula read_dimacs(std::istream& in);

/// Clause-group view of a CSP instance for the boolean engine. Boolean
/// formulas map variable v to engine variable v. Larger domains use a one-hot
/// encoding (engine variable v * t + d means "v takes d") plus exactly-one
/// side clauses in `base`.
class Encoding {
  public:
    explicit Encoding(const Formula& f);
    Encoding(int n, TemplateSetPtr templates);

    int engine_vars() const { return engine_vars_; }
    int domain() const { return t_; }
    const std::vector<Clause>& base() const { return base_; }

    /// Clauses true exactly when the constraint holds.
    std::vector<Clause> holds(const Constraint& c) const;
    /// Clauses true exactly when the constraint is violated.
    std::vector<Clause> violated(const Constraint& c) const;
    /// Clauses fixing CSP variable v to value d.
    Lit value_literal(int v, int d) const;

    Assignment decode(const std::vector<int>& engine_values) const;

  private:
    std::vector<Clause> tuple_clauses(const Constraint& c, bool accepted) const;

    int n_;
    int t_;
    int engine_vars_;
    TemplateSetPtr templates_;
    std::vector<Clause> base_;
};

} // namespace spinelab
