#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "reclearn/analysis.hpp"
#include "reclearn/ast.hpp"
#include "reclearn/errors.hpp"
#include "reclearn/eval.hpp"

namespace reclearn {

namespace detail {

// Most general unifier of two atoms over function-free terms.  Variable
// pairs bind the right-hand (standardized-apart) side, so the left clause's
// naming survives resolution.
inline std::optional<std::unordered_map<Symbol, Term>> unify_atoms(const Atom& left,
                                                                   const Atom& right) {
    if (left.predicate != right.predicate || left.arity() != right.arity()) return std::nullopt;
    std::unordered_map<Symbol, Term> subst;
    auto walk = [&](Term t) {
        while (t.is_variable()) {
            auto it = subst.find(t.name());
            if (it == subst.end()) break;
            t = it->second;
        }
        return t;
    };
    for (std::size_t i = 0; i < left.args.size(); ++i) {
        Term a = walk(left.args[i]);
        Term b = walk(right.args[i]);
        if (a == b) continue;
        if (b.is_variable())
            subst.emplace(b.name(), a);
        else if (a.is_variable())
            subst.emplace(a.name(), b);
        else
            return std::nullopt;  // distinct constants
    }
    return subst;
}

inline Term apply_subst(const std::unordered_map<Symbol, Term>& subst, Term t) {
    while (t.is_variable()) {
        auto it = subst.find(t.name());
        if (it == subst.end()) break;
        t = it->second;
    }
    return t;
}

inline Atom apply_subst(const std::unordered_map<Symbol, Term>& subst, const Atom& atom) {
    Atom out;
    out.predicate = atom.predicate;
    out.args.reserve(atom.args.size());
    for (const Term& t : atom.args) out.args.push_back(apply_subst(subst, t));
    return out;
}

inline int sole_recursive_literal(const Clause& clause) {
    int found = -1;
    for (std::size_t i = 0; i < clause.body.size(); ++i) {
        if (!is_recursive_literal(clause, clause.body[i])) continue;
        if (found >= 0) return -2;  // more than one
        found = static_cast<int>(i);
    }
    return found;
}

inline bool head_unifies(const Atom& head, const Atom& fact) {
    if (head.predicate != fact.predicate || head.arity() != fact.arity()) return false;
    std::unordered_map<Symbol, Symbol> bound;
    for (std::size_t i = 0; i < head.args.size(); ++i) {
        const Term& t = head.args[i];
        Symbol value = fact.args[i].name();
        if (t.is_constant()) {
            if (t.name() != value) return false;
        } else {
            auto [it, inserted] = bound.emplace(t.name(), value);
            if (!inserted && it->second != value) return false;
        }
    }
    return true;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Resolution, unrolling, and MESH
// ---------------------------------------------------------------------------

// Resolves a linear recursive clause with another clause on the unique
// complementary pair: the recursive body literal against d's head.  The
// second clause is standardized apart first; the result carries c's head
// and c's body with the recursive literal replaced by d's body, canonically
// renamed.
inline Clause resolve_pair(const Clause& c, const Clause& d) {
    int rec_index = detail::sole_recursive_literal(c);
    if (rec_index < 0)
        throw InputError("left clause must have exactly one recursive literal");
    if (d.head.predicate != c.head.predicate || d.head.arity() != c.head.arity())
        throw InputError("clause heads must share predicate and arity");

    std::set<Symbol> used = clause_variables(c);
    for (Symbol v : clause_variables(d)) used.insert(v);
    std::unordered_map<Symbol, Term> renaming;
    int counter = 0;
    auto fresh_for = [&](Symbol v) {
        auto it = renaming.find(v);
        if (it != renaming.end()) return it->second;
        Term fresh = Term::variable("R" + std::to_string(++counter));
        while (used.count(fresh.name()))
            fresh = Term::variable("R" + std::to_string(++counter));
        used.insert(fresh.name());
        renaming.emplace(v, fresh);
        return fresh;
    };
    auto standardize = [&](const Atom& atom) {
        Atom out;
        out.predicate = atom.predicate;
        out.args.reserve(atom.args.size());
        for (const Term& t : atom.args)
            out.args.push_back(t.is_variable() ? fresh_for(t.name()) : t);
        return out;
    };
    Atom d_head = standardize(d.head);
    std::vector<Atom> d_body;
    d_body.reserve(d.body.size());
    for (const Atom& lit : d.body) d_body.push_back(standardize(lit));

    auto mgu = detail::unify_atoms(c.body[rec_index], d_head);
    if (!mgu) throw InputError("recursive literal does not unify with the second clause's head");

    // For closed recursion against an all-variable head, resolution must be
    // a pure renaming: no variable of c may become bound.
    bool c_closed = io_split(c, rec_index).outputs.empty();
    bool d_head_vars_only = true;
    for (const Term& t : d.head.args)
        if (!t.is_variable()) d_head_vars_only = false;
    if (c_closed && d_head_vars_only) {
        std::set<Symbol> c_vars = clause_variables(c);
        for (const auto& [var, value] : *mgu)
            if (c_vars.count(var))
                throw std::logic_error("resolution of a closed recursive clause bound its variable");
    }

    Clause result;
    result.head = detail::apply_subst(*mgu, c.head);
    for (std::size_t i = 0; i < c.body.size(); ++i) {
        if (static_cast<int>(i) == rec_index) {
            for (const Atom& lit : d_body) result.body.push_back(detail::apply_subst(*mgu, lit));
        } else {
            result.body.push_back(detail::apply_subst(*mgu, c.body[i]));
        }
    }
    return canonical_rename(result);
}

// The nonrecursive program of all h-fold unrollings of the recursive clause
// against the base clause, for 0 <= h <= h_max.
inline Program unroll(const Clause& recursive, const Clause& base, int h_max) {
    if (h_max < 0) throw InputError("h_max must be nonnegative");
    Program out;
    Clause current = canonical_rename(base);
    out.clauses.push_back(current);
    for (int h = 1; h <= h_max; ++h) {
        current = resolve_pair(recursive, current);
        out.clauses.push_back(current);
    }
    return out;
}

// All compositions of the two linear recursive clauses along words of length
// 1..h_bound, deduplicated up to canonical renaming; 2^(h_bound+1) - 2
// compositions before deduplication.
inline std::vector<Clause> mesh(const Clause& r1, const Clause& r2, int h_bound) {
    if (h_bound < 1) throw InputError("h_bound must be at least 1");
    for (const Clause* c : {&r1, &r2})
        if (detail::sole_recursive_literal(*c) < 0)
            throw InputError("mesh needs linear recursive clauses");
    if (r1.head.predicate != r2.head.predicate || r1.head.arity() != r2.head.arity())
        throw InputError("mesh clauses must share their head predicate");

    std::vector<Clause> out;
    std::set<std::string> seen;
    // canonical renaming makes this key invariant under variable renaming
    auto structural_key = [](const Clause& clause) {
        std::string key;
        auto add_atom = [&](const Atom& atom) {
            key += std::to_string(atom.predicate);
            key += '(';
            for (const Term& t : atom.args) {
                key += t.is_variable() ? 'V' : 'c';
                key += std::to_string(t.name());
                key += ',';
            }
            key += ')';
        };
        add_atom(clause.head);
        key += ":-";
        for (const Atom& lit : clause.body) add_atom(lit);
        return key;
    };
    auto emit = [&](const Clause& clause) {
        Clause canon = canonical_rename(clause);
        if (seen.insert(structural_key(canon)).second) out.push_back(canon);
    };
    // iterative deepening over words in length-then-lex order
    for (int length = 1; length <= h_bound; ++length) {
        std::vector<int> digits(length, 0);
        while (true) {
            Clause composed = canonical_rename(digits[0] == 0 ? r1 : r2);
            for (int pos = 1; pos < length; ++pos)
                composed = resolve_pair(composed, digits[pos] == 0 ? r1 : r2);
            emit(composed);
            int pos = length - 1;
            while (pos >= 0 && digits[pos] == 1) digits[pos--] = 0;
            if (pos < 0) break;
            digits[pos] = 1;
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Hat renaming
// ---------------------------------------------------------------------------

inline std::string hat_name(std::string_view predicate) {
    return std::string(predicate) + "_hat";
}

namespace detail {

inline Atom hat_atom(const Atom& atom, Symbol from, Symbol to) {
    if (atom.predicate != from) return atom;
    Atom out = atom;
    out.predicate = to;
    return out;
}

inline void check_hat_fresh(Symbol hat, const std::vector<const Atom*>& atoms) {
    for (const Atom* a : atoms)
        if (a->predicate == hat)
            throw InputError("hat predicate '" + symbol_name(hat) + "' is already in use");
}

}  // namespace detail

// Replaces every occurrence of the predicate (any position) with its hatted
// version; the hat symbol must be fresh.
inline Program hat_rename(const Program& program, std::string_view predicate) {
    Symbol from = intern(predicate);
    Symbol to = intern(hat_name(predicate));
    std::vector<const Atom*> atoms;
    for (const Clause& c : program.clauses) {
        atoms.push_back(&c.head);
        for (const Atom& lit : c.body) atoms.push_back(&lit);
    }
    detail::check_hat_fresh(to, atoms);
    Program out;
    out.clauses.reserve(program.clauses.size());
    for (const Clause& c : program.clauses) {
        Clause renamed;
        renamed.head = detail::hat_atom(c.head, from, to);
        for (const Atom& lit : c.body) renamed.body.push_back(detail::hat_atom(lit, from, to));
        out.clauses.push_back(std::move(renamed));
    }
    return out;
}

inline Database hat_rename(const Database& db, std::string_view predicate) {
    Symbol from = intern(predicate);
    Symbol to = intern(hat_name(predicate));
    std::vector<const Atom*> atoms;
    for (const Atom& f : db.facts()) atoms.push_back(&f);
    detail::check_hat_fresh(to, atoms);
    Database out;
    for (const Atom& f : db.facts()) out.insert(detail::hat_atom(f, from, to));
    return out;
}

inline Atom hat_rename(const Atom& atom, std::string_view predicate) {
    return detail::hat_atom(atom, intern(predicate), intern(hat_name(predicate)));
}

// ---------------------------------------------------------------------------
// Proof-depth bound
// ---------------------------------------------------------------------------

// Number of distinct ground atoms of the declaration's head predicate over
// the constants of db ∪ description: a proof of a closed recursive
// determinate program deeper than this revisits a ground recursive subgoal,
// so unrolling to this bound is exact.
inline std::size_t h_max_default(const Database& db, const Declaration& dec,
                                 const ExtendedInstance& inst) {
    std::set<Symbol> constants;
    for (const Atom& f : db.facts()) collect_constants(f, constants);
    for (const Atom& f : inst.description) collect_constants(f, constants);
    std::size_t count = 1;
    for (int i = 0; i < dec.head_arity; ++i) {
        if (constants.empty()) return 0;
        if (count > (std::size_t(1) << 40) / constants.size())
            throw InputError("proof-depth bound overflows; supply an explicit bound");
        count *= constants.size();
    }
    return count;
}

// ---------------------------------------------------------------------------
// Propositionalization (chains and monomials)
// ---------------------------------------------------------------------------

// The support chain of a body literal: the literal itself plus, recursively,
// the first-occurrence literal of each of its input variables not supplied
// by the head.  Chains are the dependency-closed subsets generated by a
// single literal, and their success values are the propositional variables
// of the DNF emulation.
inline std::vector<int> support_chain(const Clause& clause, int literal_index) {
    if (literal_index < 0 || literal_index >= static_cast<int>(clause.body.size()))
        throw InputError("literal index out of range");
    std::set<Symbol> head_vars;
    collect_variables(clause.head, head_vars);
    auto first_occurrence = [&](Symbol v) {
        for (std::size_t i = 0; i < clause.body.size(); ++i)
            for (const Term& t : clause.body[i].args)
                if (t.is_variable() && t.name() == v) return static_cast<int>(i);
        return -1;
    };
    std::set<int> chain;
    std::vector<int> work{literal_index};
    while (!work.empty()) {
        int index = work.back();
        work.pop_back();
        if (!chain.insert(index).second) continue;
        for (const Term& t : clause.body[index].args) {
            if (!t.is_variable() || head_vars.count(t.name())) continue;
            int producer = first_occurrence(t.name());
            if (producer != index && !chain.count(producer)) work.push_back(producer);
        }
    }
    return std::vector<int>(chain.begin(), chain.end());
}

inline bool dependency_closed(const Clause& clause, const std::set<int>& literals) {
    for (int index : literals) {
        if (index < 0 || index >= static_cast<int>(clause.body.size())) return false;
        for (int member : support_chain(clause, index))
            if (!literals.count(member)) return false;
    }
    return true;
}

inline Clause subclause(const Clause& clause, const std::set<int>& literals) {
    Clause out;
    out.head = clause.head;
    for (int index : literals) {
        if (index < 0 || index >= static_cast<int>(clause.body.size()))
            throw InputError("literal index out of range");
        out.body.push_back(clause.body[index]);
    }
    return out;
}

struct ChainProposition {
    int literal_index = 0;
    std::vector<int> chain;  // sorted literal indices
};

struct PropositionAssignment {
    std::vector<ChainProposition> propositions;  // one per body literal
    std::vector<bool> values;
};

// Evaluates every chain proposition of a nonrecursive clause on one
// instance: ordered determinate evaluation of the chain subclause with the
// head unified against the instance fact.
inline PropositionAssignment propositionalize(const Clause& clause, const Database& db,
                                              const Declaration& dec,
                                              const ExtendedInstance& inst) {
    (void)dec;  // determinacy is enforced by the evaluation itself
    for (const Atom& lit : clause.body)
        if (is_recursive_literal(clause, lit))
            throw InputError("propositionalization needs a nonrecursive clause");
    OrderedEvaluator evaluator(db, inst.description);
    PropositionAssignment out;
    for (std::size_t i = 0; i < clause.body.size(); ++i) {
        ChainProposition prop;
        prop.literal_index = static_cast<int>(i);
        prop.chain = support_chain(clause, static_cast<int>(i));
        Clause chain_clause = subclause(clause, std::set<int>(prop.chain.begin(), prop.chain.end()));
        bool value = evaluator.evaluate(chain_clause, inst.fact) == OrderedOutcome::Covered;
        out.propositions.push_back(std::move(prop));
        out.values.push_back(value);
    }
    return out;
}

// A monomial over chain propositions, identified by generating literal.
struct Monomial {
    std::vector<int> propositions;  // literal indices of the chains conjoined
};

// The monomial whose chains union to exactly the given dependency-closed
// subclause: one proposition per member literal.
inline Monomial subclause_to_monomial(const Clause& clause, const std::set<int>& literals) {
    if (!dependency_closed(clause, literals))
        throw InputError("literal set is not dependency-closed");
    Monomial out;
    out.propositions.assign(literals.begin(), literals.end());
    return out;
}

inline bool monomial_value(const Monomial& monomial, const PropositionAssignment& assignment) {
    for (int index : monomial.propositions)
        if (!assignment.values[index]) return false;
    return true;
}

// ---------------------------------------------------------------------------
// Whole-program DNF emulation
// ---------------------------------------------------------------------------

struct DnfOverChains {
    struct Prop {
        int clause = 0;
        int literal = 0;
        std::vector<int> chain;
        std::string id;  // chain_<clause>_<literal>
    };
    std::vector<Prop> propositions;
    std::vector<std::vector<int>> monomials;        // one per clause, indices into propositions
    std::vector<std::vector<bool>> assignments;     // one per instance
    std::vector<bool> truth;                        // DNF value per instance

    std::vector<Clause> renamed_clauses;            // heads standardized distinct
};

// Emulates a set of nonrecursive determinate clauses by a DNF over pooled
// chain propositions: one monomial per clause, conjoining every chain of its
// body.  Clause variables are renamed apart so the heads share no variables.
inline DnfOverChains program_to_dnf(const std::vector<Clause>& clauses, const Database& db,
                                    const Declaration& dec,
                                    const std::vector<ExtendedInstance>& instances) {
    if (clauses.empty()) throw InputError("need at least one clause");
    for (const Clause& c : clauses) {
        if (c.head.predicate != clauses[0].head.predicate ||
            c.head.arity() != clauses[0].head.arity())
            throw InputError("clauses must share their head predicate and arity");
        for (const Atom& lit : c.body)
            if (is_recursive_literal(c, lit))
                throw InputError("program-to-DNF emulation needs nonrecursive clauses");
    }
    DnfOverChains out;
    for (std::size_t i = 0; i < clauses.size(); ++i)
        out.renamed_clauses.push_back(
            canonical_rename(clauses[i], "C" + std::to_string(i) + "V"));
    for (std::size_t i = 0; i < out.renamed_clauses.size(); ++i) {
        const Clause& clause = out.renamed_clauses[i];
        std::vector<int> monomial;
        for (std::size_t j = 0; j < clause.body.size(); ++j) {
            DnfOverChains::Prop prop;
            prop.clause = static_cast<int>(i);
            prop.literal = static_cast<int>(j);
            prop.chain = support_chain(clause, static_cast<int>(j));
            prop.id = "chain_" + std::to_string(i) + "_" + std::to_string(j);
            monomial.push_back(static_cast<int>(out.propositions.size()));
            out.propositions.push_back(std::move(prop));
        }
        out.monomials.push_back(std::move(monomial));
    }
    for (const ExtendedInstance& inst : instances) {
        std::vector<bool> assignment(out.propositions.size(), false);
        std::size_t cursor = 0;
        for (std::size_t i = 0; i < out.renamed_clauses.size(); ++i) {
            const Clause& clause = out.renamed_clauses[i];
            // A head that does not unify with the instance fact leaves the
            // clause's propositions false: it cannot cover the instance.
            if (detail::head_unifies(clause.head, inst.fact)) {
                PropositionAssignment pa = propositionalize(clause, db, dec, inst);
                for (std::size_t j = 0; j < pa.values.size(); ++j)
                    assignment[cursor + j] = pa.values[j];
            }
            cursor += clause.body.size();
        }
        bool value = false;
        for (const std::vector<int>& monomial : out.monomials) {
            bool all = true;
            for (int index : monomial)
                if (!assignment[index]) {
                    all = false;
                    break;
                }
            if (all) {
                value = true;
                break;
            }
        }
        out.assignments.push_back(std::move(assignment));
        out.truth.push_back(value);
    }
    return out;
}

}  // namespace reclearn
