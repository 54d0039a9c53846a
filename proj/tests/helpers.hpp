#pragma once

#include <fstream>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "reclearn/ast.hpp"
#include "reclearn/machines.hpp"
#include "reclearn/textio.hpp"
#include "reference_models.hpp"

namespace helpers {

using namespace reclearn;

inline std::string fixture_path(const std::string& name) {
    return std::string(RECLEARN_FIXTURE_DIR) + "/" + name;
}

inline std::string read_fixture(const std::string& name) {
    std::ifstream in(fixture_path(name), std::ios::binary);
    REQUIRE(in.good());
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

using refmodels::bits;
using refmodels::popcount_ones;
using refmodels::trivial_accept_tm;
using refmodels::parity_tm;
using refmodels::loop_tm;
using refmodels::alt3_machine;
using refmodels::fig2_formula;

// ---------------------------------------------------------------------------
// Independent brute-force evaluation oracle
// ---------------------------------------------------------------------------
//
// A deliberately naive evaluator used to cross-check the engine: ground
// instantiation by backtracking over body literals with matching against a
// plain atom vector, unbound head variables enumerated over the constant
// universe, and proof depths computed by label relaxation.  Shares no code
// with the engine's join or layering.

struct NaiveModel {
    std::vector<Atom> atoms;           // everything derivable, equality built-ins included
    std::map<std::string, int> depth;  // keyed by printed atom
    std::set<std::string> silent;      // seeded equalities that were never given or derived

    bool contains(const Atom& a) const { return depth.count(to_string(a)) != 0; }
    std::optional<int> depth_of(const Atom& a) const {
        auto it = depth.find(to_string(a));
        if (it == depth.end()) return std::nullopt;
        return it->second;
    }
    // the reported least model, matching the fixpoint convention
    std::vector<Atom> model_atoms() const {
        std::vector<Atom> out;
        for (const Atom& a : atoms)
            if (!silent.count(to_string(a))) out.push_back(a);
        return out;
    }
};

namespace naive_detail {

using Binding = std::map<Symbol, Symbol>;

inline bool match(const Atom& pattern, const Atom& ground, Binding& binding) {
    if (pattern.predicate != ground.predicate || pattern.arity() != ground.arity()) return false;
    Binding saved = binding;
    for (std::size_t i = 0; i < pattern.args.size(); ++i) {
        const Term& t = pattern.args[i];
        Symbol value = ground.args[i].name();
        if (t.is_constant()) {
            if (t.name() != value) {
                binding = saved;
                return false;
            }
        } else {
            auto it = binding.find(t.name());
            if (it == binding.end())
                binding[t.name()] = value;
            else if (it->second != value) {
                binding = saved;
                return false;
            }
        }
    }
    return true;
}

inline Atom substitute(const Atom& pattern, const Binding& binding) {
    Atom out;
    out.predicate = pattern.predicate;
    for (const Term& t : pattern.args) {
        if (t.is_constant())
            out.args.push_back(t);
        else
            out.args.push_back(Term(Term::Kind::Constant, binding.at(t.name())));
    }
    return out;
}

// Enumerates every ground instantiation of the clause body over the model,
// calling fn with the instantiated body atoms and the binding.
template <class F>
inline void enumerate_bodies(const Clause& clause, const NaiveModel& model, std::size_t index,
                             Binding& binding, std::vector<Atom>& body, F&& fn) {
    if (index == clause.body.size()) {
        fn(body, binding);
        return;
    }
    for (const Atom& candidate : model.atoms) {
        Binding attempt = binding;
        if (!match(clause.body[index], candidate, attempt)) continue;
        body.push_back(candidate);
        enumerate_bodies(clause, model, index + 1, attempt, body, fn);
        body.pop_back();
    }
}

template <class F>
inline void enumerate_heads(const Atom& head, const Binding& binding,
                            const std::vector<Symbol>& universe, F&& fn) {
    std::vector<Symbol> open;
    for (const Term& t : head.args)
        if (t.is_variable() && !binding.count(t.name()) &&
            std::find(open.begin(), open.end(), t.name()) == open.end())
            open.push_back(t.name());
    if (!open.empty() && universe.empty()) return;
    std::vector<std::size_t> choice(open.size(), 0);
    while (true) {
        Binding full = binding;
        for (std::size_t i = 0; i < open.size(); ++i) full[open[i]] = universe[choice[i]];
        fn(substitute(head, full));
        std::size_t pos = 0;
        while (pos < open.size() && ++choice[pos] == universe.size()) choice[pos++] = 0;
        if (pos == open.size()) break;
    }
}

}  // namespace naive_detail

inline NaiveModel naive_model(const Program& program, const Database& db,
                              const std::vector<Atom>& description) {
    NaiveModel model;
    std::set<Symbol> constants;
    auto add_atom = [&](const Atom& a, int depth) {
        std::string key = to_string(a);
        auto it = model.depth.find(key);
        if (it == model.depth.end()) {
            model.atoms.push_back(a);
            model.depth[key] = depth;
            return true;
        }
        if (depth < it->second) {
            it->second = depth;
            return true;
        }
        return false;
    };
    for (const Atom& f : db.facts()) {
        collect_constants(f, constants);
        add_atom(f, 0);
    }
    for (const Atom& f : description) {
        collect_constants(f, constants);
        add_atom(f, 0);
    }
    for (const Clause& c : program.clauses) {
        collect_constants(c.head, constants);
        for (const Atom& lit : c.body) collect_constants(lit, constants);
    }
    std::vector<Symbol> universe(constants.begin(), constants.end());
    for (Symbol c : constants) {
        Atom eq("equal", {Term(Term::Kind::Constant, c), Term(Term::Kind::Constant, c)});
        if (add_atom(eq, 0)) model.silent.insert(to_string(eq));
    }

    bool changed = true;
    while (changed) {
        changed = false;
        for (const Clause& clause : program.clauses) {
            naive_detail::Binding binding;
            std::vector<Atom> body;
            naive_detail::enumerate_bodies(
                clause, model, 0, binding, body,
                [&](const std::vector<Atom>& body_atoms, const naive_detail::Binding& b) {
                    int worst = 0;
                    for (const Atom& a : body_atoms)
                        worst = std::max(worst, model.depth.at(to_string(a)));
                    naive_detail::enumerate_heads(clause.head, b, universe, [&](const Atom& head) {
                        if (add_atom(head, worst + 1)) changed = true;
                        model.silent.erase(to_string(head));
                    });
                });
        }
    }
    return model;
}

inline bool naive_covers(const Program& program, const Database& db, const ExtendedInstance& inst) {
    return naive_model(program, db, inst.description).contains(inst.fact);
}

inline std::optional<int> naive_min_depth(const Program& program, const Database& db,
                                          const ExtendedInstance& inst, int max_depth) {
    auto depth = naive_model(program, db, inst.description).depth_of(inst.fact);
    if (!depth || *depth > max_depth) return std::nullopt;
    return depth;
}

// ---------------------------------------------------------------------------
// Random generators for property tests
// ---------------------------------------------------------------------------

struct RandomSpec {
    std::vector<std::pair<std::string, int>> predicates{{"p", 1}, {"q", 2}, {"r", 1}, {"s", 2}};
    std::vector<std::string> constants{"a", "b", "c"};
    std::vector<std::string> variables{"X", "Y", "Z"};
};

inline Atom random_atom(std::mt19937& rng, const RandomSpec& spec, bool ground) {
    auto [name, arity] = spec.predicates[rng() % spec.predicates.size()];
    Atom atom;
    atom.predicate = intern(name);
    for (int i = 0; i < arity; ++i) {
        bool make_const = ground || (rng() % 2 == 0);
        if (make_const)
            atom.args.push_back(Term::constant(spec.constants[rng() % spec.constants.size()]));
        else
            atom.args.push_back(Term::variable(spec.variables[rng() % spec.variables.size()]));
    }
    return atom;
}

inline Program random_program(std::mt19937& rng, const RandomSpec& spec = {}) {
    Program program;
    std::size_t clauses = 1 + rng() % 3;
    for (std::size_t i = 0; i < clauses; ++i) {
        Clause clause;
        clause.head = random_atom(rng, spec, false);
        std::size_t body = rng() % 3;
        for (std::size_t j = 0; j < body; ++j) clause.body.push_back(random_atom(rng, spec, false));
        program.clauses.push_back(std::move(clause));
    }
    return program;
}

inline Database random_database(std::mt19937& rng, const RandomSpec& spec = {}) {
    Database db;
    std::size_t facts = 1 + rng() % 5;
    for (std::size_t i = 0; i < facts; ++i) db.insert(random_atom(rng, spec, true));
    return db;
}

}  // namespace helpers
