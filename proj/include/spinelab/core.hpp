#pragma once

#include <boost/rational.hpp>

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace spinelab {

using Rational = boost::rational<std::int64_t>;

class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// A precondition of an operation was violated by the caller.
class ContractError : public Error {
  public:
    using Error::Error;
};

/// The requested computation would exceed a configured size budget.
class BudgetExceeded : public Error {
  public:
    using Error::Error;
};

/// The operation is not defined for this domain size / model.
class UnsupportedError : public Error {
  public:
    using Error::Error;
};

inline constexpr int kUnassigned = -1;

/// Non-fatal diagnostics go to stderr unless silenced.
void warn(const std::string& message);
void set_warnings_enabled(bool enabled);

/// A k-ary relation over D = {0..t-1}, stored as a bit table of length t^k.
/// Tuple (d_1..d_k) lives at index sum d_i * t^(k-i).
class ConstraintTemplate {
  public:
    ConstraintTemplate(int id, int t, int k, std::vector<std::uint8_t> table);

    template <class Pred>
    static ConstraintTemplate from_predicate(int id, int t, int k, Pred&& accepts) {
        std::size_t size = 1;
        for (int i = 0; i < k; ++i)
            size *= static_cast<std::size_t>(t);
        std::vector<std::uint8_t> table(size);
        std::vector<int> tuple(static_cast<std::size_t>(k));
        for (std::size_t idx = 0; idx < size; ++idx) {
            decode(idx, t, tuple);
            table[idx] = accepts(std::span<const int>(tuple)) ? 1 : 0;
        }
        return ConstraintTemplate(id, t, k, std::move(table));
    }

    int id() const { return id_; }
    int domain() const { return t_; }
    int arity() const { return k_; }
    std::size_t tuple_count() const { return table_.size(); }
    std::size_t satisfying_count() const { return satisfying_; }
    bool is_empty() const { return satisfying_ == 0; }
    bool is_full() const { return satisfying_ == table_.size(); }

    bool accepts(std::size_t index) const { return table_[index] != 0; }
    bool accepts(std::span<const int> tuple) const { return accepts(index_of(tuple)); }
    const std::vector<std::uint8_t>& table() const { return table_; }

    std::size_t index_of(std::span<const int> tuple) const;
    std::vector<int> tuple_at(std::size_t index) const;

    static void decode(std::size_t index, int t, std::span<int> out);

    /// Same relation after negating the coordinates whose flag is set (t = 2).
    ConstraintTemplate negated(int new_id, std::span<const std::uint8_t> flips) const;

  private:
    int id_;
    int t_;
    int k_;
    std::vector<std::uint8_t> table_;
    std::size_t satisfying_ = 0;
};

class TemplateSet {
  public:
    TemplateSet(int t, int k, std::vector<ConstraintTemplate> templates);

    int domain() const { return t_; }
    int arity() const { return k_; }
    std::size_t size() const { return templates_.size(); }
    const std::vector<ConstraintTemplate>& templates() const { return templates_; }
    const ConstraintTemplate& at(std::size_t position) const { return templates_[position]; }

    /// Position of the template with the given id; throws ContractError when absent.
    std::size_t position_of(int id) const;
    const ConstraintTemplate& by_id(int id) const { return templates_[position_of(id)]; }

    /// Templates whose relation is empty or full; legal but usually a modelling slip.
    std::vector<int> degenerate_ids() const;

  private:
    int t_;
    int k_;
    std::vector<ConstraintTemplate> templates_;
    std::map<int, std::size_t> by_id_;
};

using TemplateSetPtr = std::shared_ptr<const TemplateSet>;

struct Constraint {
    int template_id = 0;
    std::vector<int> vars;
    /// Per-coordinate negation flags; empty means all-positive. Only meaningful for t = 2.
    std::vector<std::uint8_t> negated;

    bool is_signed() const { return !negated.empty(); }
    bool neg(std::size_t i) const { return !negated.empty() && negated[i] != 0; }

    friend bool operator==(const Constraint&, const Constraint&) = default;
};

struct Assignment {
    std::vector<int> values;

    Assignment() = default;
    explicit Assignment(int n, int fill = kUnassigned) : values(static_cast<std::size_t>(n), fill) {}
    explicit Assignment(std::vector<int> v) : values(std::move(v)) {}

    int size() const { return static_cast<int>(values.size()); }
    int operator[](int v) const { return values[static_cast<std::size_t>(v)]; }
    int& operator[](int v) { return values[static_cast<std::size_t>(v)]; }
    bool assigned(int v) const { return values[static_cast<std::size_t>(v)] != kUnassigned; }

    friend bool operator==(const Assignment&, const Assignment&) = default;
};

/// Tuple index of the signed value tuple of `c` under a total assignment of its variables.
std::size_t tuple_index(const ConstraintTemplate& tpl, const Constraint& c, const Assignment& a);

bool constraint_satisfied(const TemplateSet& ts, const Constraint& c, const Assignment& a);

class Formula {
  public:
    Formula(int n, TemplateSetPtr templates, std::vector<Constraint> constraints = {});

    int num_vars() const { return n_; }
    std::size_t size() const { return constraints_.size(); }
    bool empty() const { return constraints_.empty(); }
    const TemplateSet& templates() const { return *templates_; }
    const TemplateSetPtr& template_ptr() const { return templates_; }
    int domain() const { return templates_->domain(); }
    int arity() const { return templates_->arity(); }

    const std::vector<Constraint>& constraints() const { return constraints_; }
    const Constraint& operator[](std::size_t i) const { return constraints_[i]; }
    const ConstraintTemplate& relation(std::size_t i) const { return *relations_[i]; }

    bool satisfied(std::size_t i, const Assignment& a) const;
    bool satisfied_by(const Assignment& a) const;
    std::size_t violations(const Assignment& a) const;

    /// Var(F): sorted distinct variables occurring in at least one constraint.
    std::vector<int> variables() const;

    Formula subformula(std::span<const std::size_t> indices) const;
    Formula with(const Constraint& c) const;

  private:
    int n_;
    TemplateSetPtr templates_;
    std::vector<Constraint> constraints_;
    std::vector<const ConstraintTemplate*> relations_;
};

/// Semantic identity of an applied constraint: sorted variable set plus the
/// satisfying set re-expressed over that sorted order.
struct SemanticKey {
    std::vector<int> vars;
    std::vector<std::uint8_t> table;

    auto operator<=>(const SemanticKey&) const = default;
};

SemanticKey semantic_key(const TemplateSet& ts, const Constraint& c);

/// Ĉ: every distinct constraint obtained by applying the templates (and, when
/// `all_sign_patterns` is set, all 2^k negation patterns) to ordered k-tuples of
/// distinct variables among n.
class ConstraintUniverse {
  public:
    ConstraintUniverse(int n, TemplateSetPtr templates, bool all_sign_patterns = false);

    /// The universe matching a formula's generation model.
    static ConstraintUniverse for_formula(const Formula& f);

    int num_vars() const { return n_; }
    const TemplateSet& templates() const { return *templates_; }
    const TemplateSetPtr& template_ptr() const { return templates_; }
    bool all_sign_patterns() const { return signed_; }

    const std::vector<Constraint>& constraints() const { return members_; }
    std::size_t size() const { return members_.size(); }
    std::optional<std::size_t> find(const Constraint& c) const;
    std::optional<std::size_t> find(const SemanticKey& key) const;

  private:
    int n_;
    TemplateSetPtr templates_;
    bool signed_;
    std::vector<Constraint> members_;
    std::map<SemanticKey, std::size_t> index_;
};

/// Simple undirected graph; edges stored as sorted (u < v) pairs without repeats.
class Graph {
  public:
    explicit Graph(int n, std::vector<std::pair<int, int>> edges = {});

    int num_vertices() const { return n_; }
    std::size_t num_edges() const { return edges_.size(); }
    const std::vector<std::pair<int, int>>& edges() const { return edges_; }
    bool has_edge(int u, int v) const;
    std::vector<std::vector<int>> adjacency() const;

    /// Connected component label per vertex, labels numbered in order of first vertex.
    std::vector<int> component_labels() const;

  private:
    int n_;
    std::vector<std::pair<int, int>> edges_;
};

/// 3-COL (or q-COL) as CSP(C): one "not equal" template over D = {0..q-1}.
Formula coloring_formula(const Graph& g, int colors = 3);

std::int64_t binomial(int n, int k);

} // namespace spinelab
