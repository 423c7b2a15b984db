#include "spinelab/cnf.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

namespace spinelab {

bool normalize_clause(Clause& c) {
    std::sort(c.begin(), c.end());
    c.erase(std::unique(c.begin(), c.end()), c.end());
    for (std::size_t i = 1; i < c.size(); ++i)
        if (c[i].var() == c[i - 1].var())
            return false;
    return true;
}

bool clause_contains(const Clause& c, Lit l) { return std::binary_search(c.begin(), c.end(), l); }

Clause resolve(const Clause& a, const Clause& b, int pivot_var) {
    Clause out;
    out.reserve(a.size() + b.size());
    std::merge(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    out.erase(std::unique(out.begin(), out.end()), out.end());
    out.erase(std::remove_if(out.begin(), out.end(), [&](Lit l) { return l.var() == pivot_var; }), out.end());
    return out;
}

namespace {

Clause exclusion_clause_boolean(const Constraint& c, std::span<const int> tuple) {
    Clause clause;
    clause.reserve(tuple.size());
    for (std::size_t i = 0; i < tuple.size(); ++i) {
        int value = tuple[i] ^ (c.neg(i) ? 1 : 0);
        // The clause fails only when x_v == value.
        clause.push_back(Lit::make(c.vars[i], value == 1));
    }
    normalize_clause(clause);
    return clause;
}

} // namespace

std::vector<Clause> constraint_clauses(const ConstraintTemplate& tpl, const Constraint& c) {
    if (tpl.domain() != 2)
        throw UnsupportedError("CNF conversion requires t = 2");
    std::vector<Clause> out;
    std::vector<int> tuple(static_cast<std::size_t>(tpl.arity()));
    for (std::size_t idx = 0; idx < tpl.tuple_count(); ++idx) {
        if (tpl.accepts(idx))
            continue;
        ConstraintTemplate::decode(idx, 2, tuple);
        out.push_back(exclusion_clause_boolean(c, tuple));
    }
    return out;
}

CnfFormula to_cnf(const Formula& f) {
    if (f.domain() != 2)
        throw UnsupportedError("CNF conversion requires t = 2; use decide/opt for larger domains");
    CnfFormula cnf;
    cnf.num_vars = f.num_vars();
    for (std::size_t i = 0; i < f.size(); ++i) {
        for (auto& clause : constraint_clauses(f.relation(i), f[i])) {
            cnf.clauses.push_back(std::move(clause));
            cnf.origin.push_back(i);
        }
    }
    return cnf;
}

bool cnf_satisfied(const CnfFormula& cnf, const std::vector<int>& values) {
    for (const auto& clause : cnf.clauses) {
        bool ok = false;
        for (Lit l : clause)
            if (l.holds(values[static_cast<std::size_t>(l.var())])) {
                ok = true;
                break;
            }
        if (!ok)
            return false;
    }
    return true;
}

void write_dimacs(std::ostream& out, const CnfFormula& cnf) {
    out << "p cnf " << cnf.num_vars << ' ' << cnf.clauses.size() << '\n';
    for (const auto& clause : cnf.clauses) {
        for (Lit l : clause)
            out << l.dimacs() << ' ';
        out << "0\n";
    }
}

CnfFormula read_dimacs(std::istream& in) {
    CnfFormula cnf;
    std::string line;
    bool header = false;
    std::size_t declared = 0;
    Clause current;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == 'c' || line[0] == '%')
            continue;
        std::istringstream ls(line);
        if (line[0] == 'p') {
            std::string p, kind;
            ls >> p >> kind >> cnf.num_vars >> declared;
            if (!ls || kind != "cnf")
                throw Error("malformed DIMACS header: " + line);
            header = true;
            continue;
        }
        if (!header)
            throw Error("DIMACS clause before header");
        long long x;
        while (ls >> x) {
            if (x == 0) {
                if (!normalize_clause(current))
                    throw Error("tautological clause in DIMACS input");
                cnf.clauses.push_back(std::move(current));
                current.clear();
                continue;
            }
            const long long v = x < 0 ? -x : x;
            if (v > cnf.num_vars)
                throw Error("DIMACS literal " + std::to_string(x) + " exceeds declared variable count");
            current.push_back(Lit::make(static_cast<int>(v - 1), x < 0));
        }
    }
    if (!current.empty())
        throw Error("unterminated DIMACS clause");
    if (!header)
        throw Error("missing DIMACS header");
    if (cnf.clauses.size() != declared)
        throw Error("DIMACS clause count mismatch");
    return cnf;
}

Encoding::Encoding(const Formula& f) : Encoding(f.num_vars(), f.template_ptr()) {}

Encoding::Encoding(int n, TemplateSetPtr templates)
    : n_(n), t_(templates->domain()), engine_vars_(0), templates_(std::move(templates)) {
    if (t_ == 2) {
        engine_vars_ = n_;
        return;
    }
    engine_vars_ = n_ * t_;
    for (int v = 0; v < n_; ++v) {
        Clause at_least;
        for (int d = 0; d < t_; ++d)
            at_least.push_back(value_literal(v, d));
        base_.push_back(at_least);
        for (int a = 0; a < t_; ++a)
            for (int b = a + 1; b < t_; ++b) {
                Clause at_most{~value_literal(v, a), ~value_literal(v, b)};
                normalize_clause(at_most);
                base_.push_back(std::move(at_most));
            }
    }
}

Lit Encoding::value_literal(int v, int d) const {
    if (t_ == 2)
        return Lit::make(v, d == 0);
    return Lit::pos(v * t_ + d);
}

std::vector<Clause> Encoding::tuple_clauses(const Constraint& c, bool forbid_accepted) const {
    const auto& tpl = templates_->by_id(c.template_id);
    std::vector<Clause> out;
    std::vector<int> tuple(static_cast<std::size_t>(tpl.arity()));
    for (std::size_t idx = 0; idx < tpl.tuple_count(); ++idx) {
        if (tpl.accepts(idx) != forbid_accepted)
            continue;
        ConstraintTemplate::decode(idx, t_, tuple);
        if (t_ == 2) {
            out.push_back(exclusion_clause_boolean(c, tuple));
        } else {
            Clause clause;
            for (std::size_t i = 0; i < tuple.size(); ++i)
                clause.push_back(~value_literal(c.vars[i], tuple[i]));
            normalize_clause(clause);
            out.push_back(std::move(clause));
        }
    }
    return out;
}

std::vector<Clause> Encoding::holds(const Constraint& c) const { return tuple_clauses(c, false); }
std::vector<Clause> Encoding::violated(const Constraint& c) const { return tuple_clauses(c, true); }

Assignment Encoding::decode(const std::vector<int>& engine_values) const {
    Assignment a(n_, 0);
    for (int v = 0; v < n_; ++v) {
        if (t_ == 2) {
            a[v] = engine_values[static_cast<std::size_t>(v)] ? 1 : 0;
            continue;
        }
        for (int d = 0; d < t_; ++d)
            if (engine_values[static_cast<std::size_t>(v * t_ + d)]) {
                a[v] = d;
                break;
            }
    }
    return a;
}

} // namespace spinelab
