#pragma once

#include <string>
#include <variant>
#include <vector>

#include "reclearn/analysis.hpp"
#include "reclearn/ast.hpp"
#include "reclearn/errors.hpp"
#include "reclearn/machines.hpp"

namespace reclearn {

enum class BundleKind { Thm2, Thm2Alt, Thm3, Thm4, Thm5, Thm6 };

enum class RawKind { BitString, AlphabetString, Assignment };

inline const char* bundle_kind_name(BundleKind kind) {
    switch (kind) {
        case BundleKind::Thm2: return "thm2";
        case BundleKind::Thm2Alt: return "thm2alt";
        case BundleKind::Thm3: return "thm3";
        case BundleKind::Thm4: return "thm4";
        case BundleKind::Thm5: return "thm5";
        case BundleKind::Thm6: return "thm6";
    }
    return "?";
}

inline RawKind raw_kind_of(BundleKind kind) {
    switch (kind) {
        case BundleKind::Thm2:
        case BundleKind::Thm2Alt:
        case BundleKind::Thm3: return RawKind::BitString;
        case BundleKind::Thm4: return RawKind::AlphabetString;
        default: return RawKind::Assignment;
    }
}

// Output of one concept-mapping construction: the background database and
// declaration it fixes, the program emulating the source model, and the
// parameters needed to map raw inputs onto extended instances.
struct ReductionBundle {
    BundleKind kind = BundleKind::Thm5;
    Database database;
    Declaration declaration;
    Program program;
    int n = 0;  // raw input length, where applicable
    int r = 0;  // DNF term count, where applicable
    std::variant<DlogTM, AltMachine, DFA, DnfFormula> source;

    std::string id() const {
        std::string out = bundle_kind_name(kind);
        out += "[";
        bool first = true;
        if (n > 0) {
            out += "n=" + std::to_string(n);
            first = false;
        }
        if (r > 0) {
            if (!first) out += ",";
            out += "r=" + std::to_string(r);
        }
        if (out.back() == '[') out.pop_back();
        else out += "]";
        return out;
    }
};

namespace detail {

inline Term cst(const std::string& text) { return Term::constant(text); }
inline Term var(const std::string& text) { return Term::variable(text); }

inline std::string config_constant(std::size_t index) { return "c" + std::to_string(index); }

inline std::string input_bit_constant(char bit) { return std::string(1, bit); }

inline void check_bit_string(const std::string& raw, int n) {
    if (static_cast<int>(raw.size()) != n)
        throw InputError("raw input must have length " + std::to_string(n));
    for (char c : raw)
        if (c != '0' && c != '1') throw InputError("raw input must be a bit string");
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Theorem 2: many depth-1 determinate linear closed recursive clauses
// ---------------------------------------------------------------------------

namespace detail {

// Shared by the deterministic and alternating variants: configuration
// constants, the accepting base fact, and the bit-indexed propositional
// description predicates.
inline void thm2_database_and_declaration(std::size_t config_count, int n, Database& db,
                                          Declaration& dec) {
    for (std::size_t i = 0; i < config_count; ++i)
        db.insert(Atom("con_" + std::to_string(i), {cst(config_constant(i))}));
    db.insert(Atom("accepting", {cst(config_constant(1))}));

    dec.head_predicate = intern("accepting");
    dec.head_arity = 1;
    for (std::size_t i = 0; i < config_count; ++i) {
        dec.modes.insert(make_mode("con_" + std::to_string(i), "+"));
        dec.modes.insert(make_mode("con_" + std::to_string(i), "-"));
    }
    for (int j = 1; j <= n; ++j) {
        dec.modes.insert(make_mode("true_" + std::to_string(j), ""));
        dec.modes.insert(make_mode("false_" + std::to_string(j), ""));
    }
}

inline Atom thm2_bit_literal(int position, int bit) {
    return Atom((bit ? "true_" : "false_") + std::to_string(position), {});
}

}  // namespace detail

inline ReductionBundle build_thm2(const DlogTM& m, int n) {
    validate_tm(m);
    ReductionBundle bundle;
    bundle.kind = BundleKind::Thm2;
    bundle.n = n;
    bundle.source = m;

    std::vector<Configuration> configs = enumerate_configs(m, n);
    detail::thm2_database_and_declaration(configs.size(), n, bundle.database, bundle.declaration);

    // One clause per non-failing configuration transition; the accepting
    // configuration is terminal and contributes none.
    for (std::size_t j = 0; j < configs.size(); ++j) {
        if (j == 1) continue;
        const Configuration& c = configs[j];
        for (int b = 0; b <= 1; ++b) {
            Configuration next = step_configuration(m, n, c, b);
            if (next.is_fail()) continue;
            std::size_t target = config_index(m, n, next);
            Clause clause;
            clause.head = Atom("accepting", {detail::var("C")});
            clause.body.push_back(Atom("con_" + std::to_string(j), {detail::var("C")}));
            clause.body.push_back(detail::thm2_bit_literal(c.input_head, b));
            clause.body.push_back(Atom("con_" + std::to_string(target), {detail::var("C1")}));
            clause.body.push_back(Atom("accepting", {detail::var("C1")}));
            bundle.program.clauses.push_back(std::move(clause));
        }
    }
    return bundle;
}

// Alternating variant: universal configurations compile to clauses with two
// recursive literals, one per successor branch.
inline ReductionBundle build_thm2_alt(const AltMachine& m) {
    validate_alt(m);
    ReductionBundle bundle;
    bundle.kind = BundleKind::Thm2Alt;
    bundle.n = m.input_length;
    bundle.source = m;

    detail::thm2_database_and_declaration(m.configs.size(), m.input_length, bundle.database,
                                          bundle.declaration);

    for (std::size_t j = 0; j < m.configs.size(); ++j) {
        if (j == 1) continue;
        const AltMachine::Config& conf = m.configs[j];
        for (int b = 0; b <= 1; ++b) {
            const auto& succ = conf.successors[b];
            if (succ.empty()) continue;
            Clause clause;
            clause.head = Atom("accepting", {detail::var("C")});
            clause.body.push_back(Atom("con_" + std::to_string(j), {detail::var("C")}));
            clause.body.push_back(detail::thm2_bit_literal(conf.input_pos, b));
            for (std::size_t t = 0; t < succ.size(); ++t) {
                std::string v = "C" + std::to_string(t + 1);
                clause.body.push_back(
                    Atom("con_" + std::to_string(succ[t]), {detail::var(v)}));
                clause.body.push_back(Atom("accepting", {detail::var(v)}));
            }
            bundle.program.clauses.push_back(std::move(clause));
        }
    }
    return bundle;
}

// ---------------------------------------------------------------------------
// Theorem 3: a single depth-3 determinate clause with 2·n·p recursive calls
// ---------------------------------------------------------------------------

inline ReductionBundle build_thm3(const DlogTM& m, int n) {
    validate_tm(m);
    ReductionBundle bundle;
    bundle.kind = BundleKind::Thm3;
    bundle.n = n;
    bundle.source = m;

    std::vector<Configuration> configs = enumerate_configs(m, n);
    std::size_t p = configs.size();
    const std::string fail_constant = "cfail";
    const std::string active = "active";
    const std::string inactive = "inactive";

    // status_{b,j}(config, bit, out): defined on every configuration except
    // the failure sink; out is active exactly when bit = b and config = c_j.
    for (int b = 0; b <= 1; ++b) {
        for (std::size_t j = 0; j < p; ++j) {
            std::string pred = "status_" + std::to_string(b) + "_" + std::to_string(j);
            for (std::size_t cidx = 0; cidx < p; ++cidx) {
                for (int bv = 0; bv <= 1; ++bv) {
                    bool is_active = (bv == b) && (cidx == j);
                    bundle.database.insert(
                        Atom(pred, {detail::cst(detail::config_constant(cidx)),
                                    detail::cst(std::to_string(bv)),
                                    detail::cst(is_active ? active : inactive)}));
                }
            }
        }
    }
    // next_j(out, config): active routes to c_j, inactive to the accepting
    // configuration; next_fail routes active to the failure sink.
    for (std::size_t j = 0; j < p; ++j) {
        std::string pred = "next_" + std::to_string(j);
        bundle.database.insert(
            Atom(pred, {detail::cst(active), detail::cst(detail::config_constant(j))}));
        bundle.database.insert(
            Atom(pred, {detail::cst(inactive), detail::cst(detail::config_constant(1))}));
    }
    bundle.database.insert(Atom("next_fail", {detail::cst(active), detail::cst(fail_constant)}));
    bundle.database.insert(
        Atom("next_fail", {detail::cst(inactive), detail::cst(detail::config_constant(1))}));
    bundle.database.insert(Atom("accepting", {detail::cst(detail::config_constant(1))}));

    bundle.declaration.head_predicate = intern("accepting");
    bundle.declaration.head_arity = 1;
    for (int b = 0; b <= 1; ++b)
        for (std::size_t j = 0; j < p; ++j)
            bundle.declaration.modes.insert(
                make_mode("status_" + std::to_string(b) + "_" + std::to_string(j), "++-"));
    for (std::size_t j = 0; j < p; ++j)
        bundle.declaration.modes.insert(make_mode("next_" + std::to_string(j), "+-"));
    bundle.declaration.modes.insert(make_mode("next_fail", "+-"));
    for (int i = 1; i <= n; ++i)
        bundle.declaration.modes.insert(make_mode("bit_" + std::to_string(i), "-"));

    // The single clause: one block per (input position, bit, configuration).
    // A block whose position is not the one the configuration reads routes
    // to the accepting configuration, so only the block matching the
    // machine's actual step imposes a real recursive requirement.
    Clause clause;
    clause.head = Atom("accepting", {detail::var("C")});
    for (int i = 1; i <= n; ++i) {
        for (int b = 0; b <= 1; ++b) {
            for (std::size_t j = 0; j < p; ++j) {
                std::string suffix =
                    std::to_string(i) + "_" + std::to_string(b) + "_" + std::to_string(j);
                std::string next_pred;
                if (configs[j].input_head == i) {
                    Configuration next = step_configuration(m, n, configs[j], b);
                    next_pred = next.is_fail()
                                    ? "next_fail"
                                    : "next_" + std::to_string(config_index(m, n, next));
                } else {
                    next_pred = "next_1";
                }
                Term bvar = detail::var("B" + suffix);
                Term yvar = detail::var("Y" + suffix);
                Term cvar = detail::var("C1" + suffix);
                clause.body.push_back(Atom("bit_" + std::to_string(i), {bvar}));
                clause.body.push_back(
                    Atom("status_" + std::to_string(b) + "_" + std::to_string(j),
                         {detail::var("C"), bvar, yvar}));
                clause.body.push_back(Atom(next_pred, {yvar, cvar}));
                clause.body.push_back(Atom("accepting", {cvar}));
            }
        }
    }
    bundle.program.clauses.push_back(std::move(clause));
    return bundle;
}

// ---------------------------------------------------------------------------
// Theorem 4: one 3-local linear closed recursive clause per DFA
// ---------------------------------------------------------------------------

namespace detail {

inline std::string arc_predicate(const DFA& mp, int qi, int sym, int qj) {
    return "arc_" + mp.states[qi] + "_" + mp.alphabet[sym] + "_" + mp.states[qj];
}

}  // namespace detail

inline ReductionBundle build_thm4(const DFA& m) {
    validate_dfa(m);
    for (const std::string& sym : m.alphabet)
        if (sym.size() != 1)
            throw InputError("theorem 4 bundles need single-character alphabet symbols");
    DFA mp = dfa_augment(m);
    ReductionBundle bundle;
    bundle.kind = BundleKind::Thm4;
    bundle.source = m;

    int states = static_cast<int>(mp.states.size());
    int symbols = static_cast<int>(mp.alphabet.size());

    // arc_{q_i,σ,q_j}(s, x, t) holds for every (s, x, t) except those with
    // s = q_i, x = σ, t ≠ q_j; conjoining one arc literal per transition of
    // the completed machine therefore tests t = δ'(s, x).
    for (int qi = 0; qi < states; ++qi) {
        for (int sym = 0; sym < symbols; ++sym) {
            for (int qj = 0; qj < states; ++qj) {
                std::string pred = detail::arc_predicate(mp, qi, sym, qj);
                for (int s = 0; s < states; ++s) {
                    for (int x = 0; x < symbols; ++x) {
                        for (int t = 0; t < states; ++t) {
                            if (s == qi && x == sym && t != qj) continue;
                            bundle.database.insert(Atom(pred, {detail::cst(mp.states[s]),
                                                               detail::cst(mp.alphabet[x]),
                                                               detail::cst(mp.states[t])}));
                        }
                    }
                }
            }
        }
    }
    for (int s = 0; s < states; ++s)
        bundle.database.insert(Atom("state", {detail::cst(mp.states[s])}));
    bundle.database.insert(Atom("accept", {detail::cst(dfa_markers::kLetterC), detail::cst("nil"),
                                           detail::cst(dfa_markers::kStateEnd),
                                           detail::cst(dfa_markers::kStateFinal)}));

    bundle.declaration.head_predicate = intern("accept");
    bundle.declaration.head_arity = 4;
    bundle.declaration.modes.insert(make_mode("components", "+--"));
    bundle.declaration.modes.insert(make_mode("state", "-"));
    for (int qi = 0; qi < states; ++qi)
        for (int sym = 0; sym < symbols; ++sym)
            for (int qj = 0; qj < states; ++qj)
                bundle.declaration.modes.insert(
                    make_mode(detail::arc_predicate(mp, qi, sym, qj), "+++"));

    Clause clause;
    clause.head = Atom("accept", {detail::var("X"), detail::var("Ys"), detail::var("S"),
                                  detail::var("T")});
    for (int s = 0; s < states; ++s) {
        for (int x = 0; x < symbols; ++x) {
            int t = mp.delta.at({s, x});
            clause.body.push_back(Atom(detail::arc_predicate(mp, s, x, t),
                                       {detail::var("S"), detail::var("X"), detail::var("T")}));
        }
    }
    clause.body.push_back(
        Atom("components", {detail::var("Ys"), detail::var("X1"), detail::var("Ys1")}));
    clause.body.push_back(Atom("state", {detail::var("U")}));
    clause.body.push_back(Atom("accept", {detail::var("X1"), detail::var("Ys1"), detail::var("T"),
                                          detail::var("U")}));
    bundle.program.clauses.push_back(std::move(clause));
    return bundle;
}

// ---------------------------------------------------------------------------
// Theorem 5: one linear recursive clause plus one base clause per DNF
// ---------------------------------------------------------------------------

namespace detail {

// B_{ij} literals: term i's j-th literal v_k maps to true_i(X_k, Y) and
// ¬v_k to false_i(X_k, Y).
inline void append_term_blocks(const DnfFormula& phi, const Term& yvar,
                               std::vector<Atom>& body) {
    for (std::size_t i = 0; i < phi.terms.size(); ++i) {
        for (const DnfFormula::Literal& lit : phi.terms[i]) {
            std::string pred =
                (lit.negated ? "false_" : "true_") + std::to_string(i + 1);
            body.push_back(Atom(pred, {var("X" + std::to_string(lit.variable)), yvar}));
        }
    }
}

inline void append_bit_literals(int n, std::vector<Atom>& body) {
    for (int k = 1; k <= n; ++k)
        body.push_back(Atom("bit_" + std::to_string(k), {var("X" + std::to_string(k))}));
}

// true_i / false_i over bit values and the range 1..r (plus any extra
// always-pass constants): true_i(b, y) holds when b = 1 or y ≠ i, and
// false_i(b, y) when b = 0 or y ≠ i.
inline void insert_guard_facts(Database& db, int r, const std::vector<std::string>& extra_pass) {
    for (int i = 1; i <= r; ++i) {
        std::string true_pred = "true_" + std::to_string(i);
        std::string false_pred = "false_" + std::to_string(i);
        for (int bv = 0; bv <= 1; ++bv) {
            for (int y = 1; y <= r; ++y) {
                if (bv == 1 || y != i) db.insert(Atom(true_pred, {cst(std::to_string(bv)),
                                                                  cst(std::to_string(y))}));
                if (bv == 0 || y != i) db.insert(Atom(false_pred, {cst(std::to_string(bv)),
                                                                   cst(std::to_string(y))}));
            }
            for (const std::string& label : extra_pass) {
                db.insert(Atom(true_pred, {cst(std::to_string(bv)), cst(label)}));
                db.insert(Atom(false_pred, {cst(std::to_string(bv)), cst(label)}));
            }
        }
    }
}

inline void insert_guard_modes(Declaration& dec, int n, int r) {
    for (int i = 1; i <= n; ++i) dec.modes.insert(make_mode("bit_" + std::to_string(i), "-"));
    for (int j = 1; j <= r; ++j) {
        dec.modes.insert(make_mode("true_" + std::to_string(j), "++"));
        dec.modes.insert(make_mode("false_" + std::to_string(j), "++"));
    }
}

}  // namespace detail

inline ReductionBundle build_thm5(const DnfFormula& phi, int r) {
    validate_dnf(phi);
    if (static_cast<int>(phi.terms.size()) != r)
        throw InputError("formula must be padded to exactly r terms before building");
    ReductionBundle bundle;
    bundle.kind = BundleKind::Thm5;
    bundle.n = phi.variable_count;
    bundle.r = r;
    bundle.source = phi;

    detail::insert_guard_facts(bundle.database, r, {});
    for (int y = 1; y < r; ++y)
        bundle.database.insert(Atom("succ", {detail::cst(std::to_string(y)),
                                             detail::cst(std::to_string(y + 1))}));

    bundle.declaration.head_predicate = intern("p");
    bundle.declaration.head_arity = 1;
    detail::insert_guard_modes(bundle.declaration, phi.variable_count, r);
    bundle.declaration.modes.insert(make_mode("succ", "+-"));

    Clause recursive;
    recursive.head = Atom("p", {detail::var("Y")});
    recursive.body.push_back(Atom("succ", {detail::var("Y"), detail::var("Z")}));
    recursive.body.push_back(Atom("p", {detail::var("Z")}));
    bundle.program.clauses.push_back(std::move(recursive));

    Clause base;
    base.head = Atom("p", {detail::var("Y")});
    detail::append_bit_literals(phi.variable_count, base.body);
    detail::append_term_blocks(phi, detail::var("Y"), base.body);
    bundle.program.clauses.push_back(std::move(base));
    return bundle;
}

// ---------------------------------------------------------------------------
// Theorem 6: two linear recursive clauses over a complete binary tree
// ---------------------------------------------------------------------------

namespace detail {

inline bool is_power_of_two(int r) { return r >= 1 && (r & (r - 1)) == 0; }

inline int log2_exact(int r) {
    int k = 0;
    while ((1 << k) < r) ++k;
    return k;
}

// Level-k nodes carry the numerals 1..r; nodes above them get path labels
// and the level below them holds the leaves.
inline std::string tree_label(int level, int pos, int k) {
    if (level == k) return std::to_string(pos + 1);
    if (level == 0) return "root";
    std::string label = "n";
    for (int bit = level - 1; bit >= 0; --bit) label += (pos >> bit) & 1 ? 'r' : 'l';
    return label;
}

inline std::string leaf_label(int pos) { return "w" + std::to_string(pos + 1); }

}  // namespace detail

inline ReductionBundle build_thm6(const DnfFormula& phi, int r) {
    validate_dnf(phi);
    if (static_cast<int>(phi.terms.size()) != r)
        throw InputError("formula must be padded to exactly r terms before building");
    if (!detail::is_power_of_two(r))
        throw InputError("theorem 6 needs a power-of-two term count");
    ReductionBundle bundle;
    bundle.kind = BundleKind::Thm6;
    bundle.n = phi.variable_count;
    bundle.r = r;
    bundle.source = phi;

    int k = detail::log2_exact(r);
    std::vector<std::string> interior_labels;  // levels strictly above the numbered one
    for (int level = 0; level < k; ++level)
        for (int pos = 0; pos < (1 << level); ++pos)
            interior_labels.push_back(detail::tree_label(level, pos, k));

    detail::insert_guard_facts(bundle.database, r, interior_labels);
    for (int level = 0; level <= k; ++level) {
        for (int pos = 0; pos < (1 << level); ++pos) {
            std::string parent = detail::tree_label(level, pos, k);
            std::string left = level == k ? detail::leaf_label(2 * pos)
                                          : detail::tree_label(level + 1, 2 * pos, k);
            std::string right = level == k ? detail::leaf_label(2 * pos + 1)
                                           : detail::tree_label(level + 1, 2 * pos + 1, k);
            bundle.database.insert(Atom("leftson", {detail::cst(parent), detail::cst(left)}));
            bundle.database.insert(Atom("rightson", {detail::cst(parent), detail::cst(right)}));
        }
    }
    for (int pos = 0; pos < 2 * r; ++pos)
        bundle.database.insert(Atom("p", {detail::cst(detail::leaf_label(pos))}));

    bundle.declaration.head_predicate = intern("p");
    bundle.declaration.head_arity = 1;
    detail::insert_guard_modes(bundle.declaration, phi.variable_count, r);
    bundle.declaration.modes.insert(make_mode("leftson", "+-"));
    bundle.declaration.modes.insert(make_mode("rightson", "+-"));

    for (const char* son : {"leftson", "rightson"}) {
        Clause clause;
        clause.head = Atom("p", {detail::var("Y")});
        detail::append_bit_literals(phi.variable_count, clause.body);
        detail::append_term_blocks(phi, detail::var("Y"), clause.body);
        clause.body.push_back(Atom(son, {detail::var("Y"), detail::var("Z")}));
        clause.body.push_back(Atom("p", {detail::var("Z")}));
        bundle.program.clauses.push_back(std::move(clause));
    }
    return bundle;
}

// ---------------------------------------------------------------------------
// Instance mapping and source-model oracles
// ---------------------------------------------------------------------------

inline ExtendedInstance map_instance(const ReductionBundle& bundle, const std::string& raw) {
    switch (bundle.kind) {
        case BundleKind::Thm2:
        case BundleKind::Thm2Alt: {
            detail::check_bit_string(raw, bundle.n);
            std::vector<Atom> description;
            for (int i = 1; i <= bundle.n; ++i)
                description.push_back(detail::thm2_bit_literal(i, raw[i - 1] - '0'));
            return ExtendedInstance(Atom("accepting", {detail::cst(detail::config_constant(0))}),
                                    std::move(description));
        }
        case BundleKind::Thm3: {
            detail::check_bit_string(raw, bundle.n);
            std::vector<Atom> description;
            for (int i = 1; i <= bundle.n; ++i)
                description.push_back(Atom("bit_" + std::to_string(i),
                                           {detail::cst(std::string(1, raw[i - 1]))}));
            return ExtendedInstance(Atom("accepting", {detail::cst(detail::config_constant(0))}),
                                    std::move(description));
        }
        case BundleKind::Thm4: {
            const DFA& m = std::get<DFA>(bundle.source);
            for (char c : raw)
                if (m.symbol_index(std::string(1, c)) < 0)
                    throw InputError("raw input symbol outside the automaton alphabet");
            using namespace dfa_markers;
            std::string tail = raw + kLetterB + kLetterC;
            std::vector<Atom> description;
            for (std::size_t i = 0; i < tail.size(); ++i) {
                std::string cell = tail.substr(i);
                std::string rest = tail.substr(i + 1);
                description.push_back(Atom("components",
                                           {detail::cst(cell), detail::cst(std::string(1, tail[i])),
                                            detail::cst(rest.empty() ? "nil" : rest)}));
            }
            Atom fact("accept", {detail::cst(kLetterA), detail::cst(tail),
                                 detail::cst(kStatePre), detail::cst(m.states[m.start_state])});
            return ExtendedInstance(std::move(fact), std::move(description));
        }
        case BundleKind::Thm5:
        case BundleKind::Thm6: {
            detail::check_bit_string(raw, bundle.n);
            std::vector<Atom> description;
            for (int i = 1; i <= bundle.n; ++i)
                description.push_back(Atom("bit_" + std::to_string(i),
                                           {detail::cst(std::string(1, raw[i - 1]))}));
            std::string root = "1";
            if (bundle.kind == BundleKind::Thm6) {
                const int k = detail::log2_exact(bundle.r);
                root = detail::tree_label(0, 0, k);
            }
            return ExtendedInstance(Atom("p", {detail::cst(root)}), std::move(description));
        }
    }
    throw InputError("unknown bundle kind");
}

// Verdict of the source model itself on a raw input; the ground truth that
// preservation checks compare coverage against.
inline bool oracle_verdict(const ReductionBundle& bundle, const std::string& raw) {
    switch (bundle.kind) {
        case BundleKind::Thm2:
        case BundleKind::Thm3: {
            detail::check_bit_string(raw, bundle.n);
            return tm_accepts(std::get<DlogTM>(bundle.source), raw);
        }
        case BundleKind::Thm2Alt: {
            detail::check_bit_string(raw, bundle.n);
            return alt_accepts(std::get<AltMachine>(bundle.source), raw);
        }
        case BundleKind::Thm4: return dfa_accepts(std::get<DFA>(bundle.source), raw);
        case BundleKind::Thm5:
        case BundleKind::Thm6: {
            detail::check_bit_string(raw, bundle.n);
            return dnf_eval(std::get<DnfFormula>(bundle.source), raw);
        }
    }
    throw InputError("unknown bundle kind");
}

}  // namespace reclearn
