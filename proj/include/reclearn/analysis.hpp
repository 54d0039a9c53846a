#pragma once

#include <map>
#include <set>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "reclearn/ast.hpp"
#include "reclearn/errors.hpp"

namespace reclearn {

enum class Polarity : char { Input = '+', Output = '-' };

// Mode of one literal occurrence: which argument positions are inputs.
struct ModeString {
    Symbol predicate = 0;
    std::vector<Polarity> polarity;

    std::size_t arity() const { return polarity.size(); }

    friend bool operator==(const ModeString& a, const ModeString& b) {
        return a.predicate == b.predicate && a.polarity == b.polarity;
    }
    friend bool operator<(const ModeString& a, const ModeString& b) {
        if (a.predicate != b.predicate)
            return symbol_name(a.predicate) < symbol_name(b.predicate);
        return a.polarity < b.polarity;
    }
};

inline ModeString make_mode(std::string_view predicate, std::string_view polarity) {
    ModeString mode;
    mode.predicate = intern(predicate);
    for (char c : polarity) {
        if (c == '+')
            mode.polarity.push_back(Polarity::Input);
        else if (c == '-')
            mode.polarity.push_back(Polarity::Output);
        else
            throw InputError("mode characters must be '+' or '-'");
    }
    return mode;
}

// (predicate, arity, mode set); size is the mode-set cardinality.
struct Declaration {
    Symbol head_predicate = 0;
    int head_arity = 0;
    std::set<ModeString> modes;

    std::size_t size() const { return modes.size(); }

    // Maximum arity across the mode set; a declarations is in a-DEC when
    // this is at most a.
    std::size_t max_mode_arity() const {
        std::size_t m = 0;
        for (const ModeString& s : modes) m = std::max(m, s.arity());
        return m;
    }
};

// Input variables of body literal i: those appearing in the head or in an
// earlier body literal.  Everything else in the literal is an output.
struct IoSplit {
    std::set<Symbol> inputs;
    std::set<Symbol> outputs;
};

inline IoSplit io_split(const Clause& clause, std::size_t literal_index) {
    if (literal_index >= clause.body.size()) throw InputError("literal index out of range");
    std::set<Symbol> seen;
    collect_variables(clause.head, seen);
    for (std::size_t i = 0; i < literal_index; ++i) collect_variables(clause.body[i], seen);
    IoSplit split;
    for (const Term& t : clause.body[literal_index].args) {
        if (!t.is_variable()) continue;
        if (seen.count(t.name()))
            split.inputs.insert(t.name());
        else
            split.outputs.insert(t.name());
    }
    return split;
}

// Head variables have depth zero; any other variable has depth one more than
// the deepest input variable of the first literal containing it (one, when
// that literal has no input variables).
struct DepthReport {
    std::unordered_map<Symbol, int> variable_depth;
    int clause_depth = 0;
};

inline DepthReport variable_depths(const Clause& clause) {
    DepthReport report;
    for (const Term& t : clause.head.args)
        if (t.is_variable()) report.variable_depth[t.name()] = 0;
    // single left-to-right pass: a variable already assigned a depth is an
    // input of the current literal, everything else is a fresh output
    for (const Atom& literal : clause.body) {
        int base = 0;
        for (const Term& t : literal.args) {
            if (!t.is_variable()) continue;
            auto it = report.variable_depth.find(t.name());
            if (it != report.variable_depth.end()) base = std::max(base, it->second);
        }
        for (const Term& t : literal.args) {
            if (!t.is_variable()) continue;
            report.variable_depth.emplace(t.name(), base + 1);
        }
    }
    for (const auto& [var, depth] : report.variable_depth)
        report.clause_depth = std::max(report.clause_depth, depth);
    return report;
}

// Constants in body argument positions count as inputs: a constant is
// already bound before the literal is evaluated.
inline ModeString literal_mode(const Clause& clause, std::size_t literal_index) {
    if (literal_index >= clause.body.size()) throw InputError("literal index out of range");
    IoSplit split = io_split(clause, literal_index);
    const Atom& literal = clause.body[literal_index];
    ModeString mode;
    mode.predicate = literal.predicate;
    mode.polarity.reserve(literal.args.size());
    for (const Term& t : literal.args) {
        bool input = t.is_constant() || split.inputs.count(t.name()) != 0;
        mode.polarity.push_back(input ? Polarity::Input : Polarity::Output);
    }
    return mode;
}

inline bool is_recursive_literal(const Clause& clause, const Atom& literal) {
    return literal.predicate == clause.head.predicate && literal.arity() == clause.head.arity();
}

// All body literal modes in one left-to-right pass.
inline std::vector<ModeString> literal_modes(const Clause& clause) {
    std::set<Symbol> seen;
    collect_variables(clause.head, seen);
    std::vector<ModeString> out;
    out.reserve(clause.body.size());
    for (const Atom& literal : clause.body) {
        ModeString mode;
        mode.predicate = literal.predicate;
        mode.polarity.reserve(literal.args.size());
        for (const Term& t : literal.args) {
            bool input = t.is_constant() || seen.count(t.name()) != 0;
            mode.polarity.push_back(input ? Polarity::Input : Polarity::Output);
        }
        collect_variables(literal, seen);
        out.push_back(std::move(mode));
    }
    return out;
}

// Per-clause recursion facts, computed in one pass.
struct ClauseRecursion {
    std::size_t recursive_literals = 0;
    bool closed = true;  // no recursive literal has an output variable
};

inline ClauseRecursion clause_recursion(const Clause& clause) {
    ClauseRecursion out;
    std::set<Symbol> seen;
    collect_variables(clause.head, seen);
    for (const Atom& literal : clause.body) {
        if (is_recursive_literal(clause, literal)) {
            ++out.recursive_literals;
            for (const Term& t : literal.args)
                if (t.is_variable() && !seen.count(t.name())) out.closed = false;
        }
        collect_variables(literal, seen);
    }
    return out;
}

// A clause satisfies a declaration when its head matches the declared
// predicate and arity and every body literal's mode appears in the mode set.
// Recursive literals are exempt: the declaration constrains background
// predicates, while recursion is governed by the recursion class.
inline bool satisfies_declaration(const Clause& clause, const Declaration& dec) {
    if (clause.head.predicate != dec.head_predicate ||
        static_cast<int>(clause.head.arity()) != dec.head_arity)
        return false;
    std::vector<ModeString> modes = literal_modes(clause);
    for (std::size_t i = 0; i < clause.body.size(); ++i) {
        if (is_recursive_literal(clause, clause.body[i])) continue;
        if (!dec.modes.count(modes[i])) return false;
    }
    return true;
}

// A mode is determinate for a fact set when the input positions functionally
// determine the output positions.
inline bool mode_is_determinate(const ModeString& mode, std::span<const Atom> facts) {
    std::map<std::vector<Symbol>, std::vector<Symbol>> function;
    for (const Atom& fact : facts) {
        if (fact.predicate != mode.predicate || fact.arity() != mode.arity())
            throw InputError("facts must share the mode's predicate and arity");
        std::vector<Symbol> inputs, outputs;
        for (std::size_t i = 0; i < fact.args.size(); ++i) {
            if (mode.polarity[i] == Polarity::Input)
                inputs.push_back(fact.args[i].name());
            else
                outputs.push_back(fact.args[i].name());
        }
        auto it = function.find(inputs);
        if (it == function.end())
            function.emplace(std::move(inputs), std::move(outputs));
        else if (it->second != outputs)
            return false;
    }
    return true;
}

struct RecursionClass {
    std::size_t recursive_clause_count = 0;
    std::size_t max_recursive_literals_per_clause = 0;
    bool closed = true;
    std::size_t base_clause_count = 0;

    bool linear() const { return max_recursive_literals_per_clause <= 1; }
    bool k_ary(std::size_t k) const { return max_recursive_literals_per_clause <= k; }
};

inline RecursionClass recursion_class(const Program& program) {
    RecursionClass rc;
    for (const Clause& clause : program.clauses) {
        ClauseRecursion stats = clause_recursion(clause);
        if (!stats.closed) rc.closed = false;
        if (stats.recursive_literals == 0)
            ++rc.base_clause_count;
        else
            ++rc.recursive_clause_count;
        rc.max_recursive_literals_per_clause =
            std::max(rc.max_recursive_literals_per_clause, stats.recursive_literals);
    }
    return rc;
}

// Free variables are body-only variables.  Two free variables touch when
// they share a literal; influence is the transitive closure of touching.
// The locale of a free variable is the set of literals containing it or any
// free variable it influences, and locality is the largest locale.
struct LocalityReport {
    std::set<Symbol> free_variables;
    std::map<Symbol, std::set<std::size_t>> locale;
    std::size_t locality = 0;
};

inline LocalityReport locality(const Clause& clause) {
    LocalityReport report;
    std::set<Symbol> head_vars;
    collect_variables(clause.head, head_vars);
    for (const Atom& lit : clause.body) {
        std::set<Symbol> vars;
        collect_variables(lit, vars);
        for (Symbol v : vars)
            if (!head_vars.count(v)) report.free_variables.insert(v);
    }
    if (report.free_variables.empty()) return report;

    // Union-find over free variables; a literal joins all its free variables.
    std::map<Symbol, Symbol> parent;
    for (Symbol v : report.free_variables) parent[v] = v;
    auto find = [&](Symbol v) {
        while (parent[v] != v) v = parent[v] = parent[parent[v]];
        return v;
    };
    for (const Atom& lit : clause.body) {
        Symbol first = 0;
        bool have_first = false;
        for (const Term& t : lit.args) {
            if (!t.is_variable() || !report.free_variables.count(t.name())) continue;
            if (!have_first) {
                first = find(t.name());
                have_first = true;
            } else {
                parent[find(t.name())] = first;
            }
        }
    }
    std::map<Symbol, std::set<std::size_t>> component_literals;
    for (std::size_t i = 0; i < clause.body.size(); ++i) {
        for (const Term& t : clause.body[i].args)
            if (t.is_variable() && report.free_variables.count(t.name()))
                component_literals[find(t.name())].insert(i);
    }
    for (Symbol v : report.free_variables) {
        report.locale[v] = component_literals[find(v)];
        report.locality = std::max(report.locality, report.locale[v].size());
    }
    return report;
}

}  // namespace reclearn
