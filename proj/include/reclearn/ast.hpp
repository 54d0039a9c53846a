#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "reclearn/errors.hpp"
#include "reclearn/symbol.hpp"

namespace reclearn {

// A term is a constant or a variable; no function symbols are representable.
class Term {
public:
    enum class Kind : std::uint8_t { Constant, Variable };

    Term() : kind_(Kind::Constant), name_(0) {}
    Term(Kind kind, Symbol name) : kind_(kind), name_(name) {}

    static Term constant(std::string_view text) { return Term(Kind::Constant, intern(text)); }
    static Term variable(std::string_view text) { return Term(Kind::Variable, intern(text)); }

    Kind kind() const { return kind_; }
    Symbol name() const { return name_; }
    bool is_variable() const { return kind_ == Kind::Variable; }
    bool is_constant() const { return kind_ == Kind::Constant; }
    const std::string& text() const { return symbol_name(name_); }

    friend bool operator==(const Term& a, const Term& b) {
        return a.kind_ == b.kind_ && a.name_ == b.name_;
    }
    friend bool operator!=(const Term& a, const Term& b) { return !(a == b); }

private:
    Kind kind_;
    Symbol name_;
};

struct Atom {
    Symbol predicate = 0;
    std::vector<Term> args;

    Atom() = default;
    Atom(Symbol pred, std::vector<Term> arguments) : predicate(pred), args(std::move(arguments)) {}
    Atom(std::string_view pred, std::vector<Term> arguments)
        : predicate(intern(pred)), args(std::move(arguments)) {}

    std::size_t arity() const { return args.size(); }

    bool ground() const {
        for (const Term& t : args)
            if (t.is_variable()) return false;
        return true;
    }

    friend bool operator==(const Atom& a, const Atom& b) {
        return a.predicate == b.predicate && a.args == b.args;
    }
    friend bool operator!=(const Atom& a, const Atom& b) { return !(a == b); }
};

// Predicate identity is (symbol, arity); two atoms with the same name but
// different arities are unrelated.
inline std::uint64_t pred_key(Symbol predicate, std::size_t arity) {
    return (static_cast<std::uint64_t>(predicate) << 8) | (arity & 0xff);
}
inline std::uint64_t pred_key(const Atom& atom) { return pred_key(atom.predicate, atom.arity()); }

struct AtomHash {
    std::size_t operator()(const Atom& atom) const {
        std::uint64_t h = 1469598103934665603ull ^ atom.predicate;
        for (const Term& t : atom.args) {
            h ^= (static_cast<std::uint64_t>(t.name()) << 1) | (t.is_variable() ? 1 : 0);
            h *= 1099511628211ull;
        }
        return static_cast<std::size_t>(h);
    }
};

struct Clause {
    Atom head;
    std::vector<Atom> body;  // order is significant

    Clause() = default;
    Clause(Atom h, std::vector<Atom> b) : head(std::move(h)), body(std::move(b)) {}

    friend bool operator==(const Clause& a, const Clause& b) {
        return a.head == b.head && a.body == b.body;
    }
};

struct Program {
    std::vector<Clause> clauses;

    Program() = default;
    explicit Program(std::vector<Clause> cs) : clauses(std::move(cs)) {}

    // Size in the sense used throughout: body literals summed over clauses.
    std::size_t body_literal_count() const {
        std::size_t n = 0;
        for (const Clause& c : clauses) n += c.body.size();
        return n;
    }

    friend bool operator==(const Program& a, const Program& b) { return a.clauses == b.clauses; }
};

// A set of ground facts.  Insertion order is preserved for iteration;
// serialization sorts textually so equal databases print identically.
class Database {
public:
    Database() = default;

    bool insert(Atom fact) {
        if (!fact.ground()) throw InputError("database facts must be ground");
        if (!index_.insert(fact).second) return false;
        facts_.push_back(std::move(fact));
        return true;
    }

    bool contains(const Atom& fact) const { return index_.count(fact) != 0; }
    bool erase(const Atom& fact) {
        if (index_.erase(fact) == 0) return false;
        facts_.erase(std::find(facts_.begin(), facts_.end(), fact));
        return true;
    }

    const std::vector<Atom>& facts() const { return facts_; }
    std::size_t size() const { return facts_.size(); }
    bool empty() const { return facts_.empty(); }

    friend bool operator==(const Database& a, const Database& b) {
        if (a.size() != b.size()) return false;
        for (const Atom& f : a.facts_)
            if (!b.contains(f)) return false;
        return true;
    }

private:
    std::vector<Atom> facts_;
    std::unordered_set<Atom, AtomHash> index_;
};

// The unit classified by a (program, database) pair: a ground instance fact
// plus a ground description.  Size is the description cardinality.
struct ExtendedInstance {
    Atom fact;
    std::vector<Atom> description;

    ExtendedInstance() = default;
    ExtendedInstance(Atom f, std::vector<Atom> desc)
        : fact(std::move(f)), description(std::move(desc)) {
        if (!fact.ground()) throw InputError("instance fact must be ground");
        for (const Atom& d : description)
            if (!d.ground()) throw InputError("description atoms must be ground");
    }

    std::size_t size() const { return description.size(); }
};

// Variable -> constant bindings; idempotent on its domain, identity on
// ground atoms.
class Substitution {
public:
    bool bound(Symbol var) const { return map_.count(var) != 0; }

    const Term* lookup(Symbol var) const {
        auto it = map_.find(var);
        return it == map_.end() ? nullptr : &it->second;
    }

    void bind(Symbol var, Term value) { map_.emplace(var, value); }
    void unbind(Symbol var) { map_.erase(var); }

    Term apply(const Term& t) const {
        if (t.is_constant()) return t;
        if (const Term* v = lookup(t.name())) return *v;
        return t;
    }

    Atom apply(const Atom& atom) const {
        Atom out;
        out.predicate = atom.predicate;
        out.args.reserve(atom.args.size());
        for (const Term& t : atom.args) out.args.push_back(apply(t));
        return out;
    }

    std::size_t size() const { return map_.size(); }

private:
    std::unordered_map<Symbol, Term> map_;
};

inline void collect_variables(const Atom& atom, std::set<Symbol>& out) {
    for (const Term& t : atom.args)
        if (t.is_variable()) out.insert(t.name());
}

inline std::set<Symbol> clause_variables(const Clause& clause) {
    std::set<Symbol> vars;
    collect_variables(clause.head, vars);
    for (const Atom& lit : clause.body) collect_variables(lit, vars);
    return vars;
}

inline void collect_constants(const Atom& atom, std::set<Symbol>& out) {
    for (const Term& t : atom.args)
        if (t.is_constant()) out.insert(t.name());
}

// Renames variables to V1, V2, ... in order of first occurrence
// (head first, then body left to right).  Canonical forms decide clause
// equality for deduplication and round-trip tests.
inline Clause canonical_rename(const Clause& clause, const std::string& prefix = "V") {
    std::unordered_map<Symbol, Term> renaming;
    int counter = 0;
    auto rename_atom = [&](const Atom& atom) {
        Atom out;
        out.predicate = atom.predicate;
        out.args.reserve(atom.args.size());
        for (const Term& t : atom.args) {
            if (t.is_constant()) {
                out.args.push_back(t);
                continue;
            }
            auto it = renaming.find(t.name());
            if (it == renaming.end()) {
                Term fresh = Term::variable(prefix + std::to_string(++counter));
                it = renaming.emplace(t.name(), fresh).first;
            }
            out.args.push_back(it->second);
        }
        return out;
    };
    Clause out;
    out.head = rename_atom(clause.head);
    out.body.reserve(clause.body.size());
    for (const Atom& lit : clause.body) out.body.push_back(rename_atom(lit));
    return out;
}

inline Program canonical_rename(const Program& program, const std::string& prefix = "V") {
    Program out;
    out.clauses.reserve(program.clauses.size());
    for (const Clause& c : program.clauses) out.clauses.push_back(canonical_rename(c, prefix));
    return out;
}

inline bool equal_canonical(const Clause& a, const Clause& b) {
    return canonical_rename(a) == canonical_rename(b);
}

}  // namespace reclearn
