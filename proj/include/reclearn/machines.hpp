#pragma once

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_set>
#include <vector>

#include "reclearn/errors.hpp"

namespace reclearn {

// ---------------------------------------------------------------------------
// Log-space Turing machines
// ---------------------------------------------------------------------------

// Deterministic machine over binary tape alphabets with one accepting state.
// The transition table maps (input bit, work bit, state) to an action; missing
// entries fall into the failure configuration during simulation.
struct DlogTM {
    struct Action {
        int write = 0;       // bit written to the work tape
        int input_move = 1;  // +1 = right, -1 = left
        int work_move = 1;
        int next_state = 0;
    };

    std::vector<std::string> states;
    int start_state = 0;
    int accept_state = 0;
    std::map<std::array<int, 3>, Action> delta;  // key: {input bit, work bit, state}

    int state_index(const std::string& name) const {
        for (std::size_t i = 0; i < states.size(); ++i)
            if (states[i] == name) return static_cast<int>(i);
        return -1;
    }

    const Action* action(int input_bit, int work_bit, int state) const {
        auto it = delta.find({input_bit, work_bit, state});
        return it == delta.end() ? nullptr : &it->second;
    }
};

inline void validate_tm(const DlogTM& m) {
    if (m.states.empty()) throw InputError("machine has no states");
    if (m.start_state < 0 || m.start_state >= static_cast<int>(m.states.size()))
        throw InputError("start state out of range");
    if (m.accept_state < 0 || m.accept_state >= static_cast<int>(m.states.size()))
        throw InputError("accept state out of range");
    if (m.start_state == m.accept_state)
        throw InputError("start and accept states must differ");
    for (const auto& [key, action] : m.delta) {
        auto [ib, wb, q] = key;
        if (ib < 0 || ib > 1 || wb < 0 || wb > 1) throw InputError("tape alphabets are binary");
        if (q < 0 || q >= static_cast<int>(m.states.size()))
            throw InputError("transition from unknown state");
        if (action.write < 0 || action.write > 1) throw InputError("written symbol must be a bit");
        if (action.input_move != 1 && action.input_move != -1)
            throw InputError("input head move must be L or R");
        if (action.work_move != 1 && action.work_move != -1)
            throw InputError("work head move must be L or R");
        if (action.next_state < 0 || action.next_state >= static_cast<int>(m.states.size()))
            throw InputError("transition to unknown state");
    }
}

// Work tape length for inputs of length n; log2 n rounded up.
inline int work_width(int n) {
    if (n < 2) throw InputError("input length must be at least 2");
    return std::bit_width(static_cast<unsigned>(n - 1));
}

// Internal configuration: work tape contents, both head positions (1-based),
// and the control state.  The work tape is packed with cell 1 as the most
// significant bit so that numeric order equals lexicographic order.
struct Configuration {
    std::uint32_t tape = 0;
    int work_head = 1;
    int input_head = 1;
    int state = 0;

    static Configuration fail() { return Configuration{0, 0, 0, -1}; }
    bool is_fail() const { return state < 0; }

    int tape_bit(int pos, int width) const { return (tape >> (width - pos)) & 1u; }

    Configuration with_tape_bit(int pos, int width, int value) const {
        Configuration c = *this;
        std::uint32_t mask = 1u << (width - pos);
        c.tape = value ? (c.tape | mask) : (c.tape & ~mask);
        return c;
    }

    friend bool operator==(const Configuration& a, const Configuration& b) {
        return a.tape == b.tape && a.work_head == b.work_head && a.input_head == b.input_head &&
               a.state == b.state;
    }
};

// Canonical state order puts the start state first and the accept state
// second, so the start configuration gets index 0 and the accepting
// configuration index 1.
inline std::vector<int> canonical_state_order(const DlogTM& m) {
    std::vector<int> order;
    order.push_back(m.start_state);
    order.push_back(m.accept_state);
    for (int q = 0; q < static_cast<int>(m.states.size()); ++q)
        if (q != m.start_state && q != m.accept_state) order.push_back(q);
    return order;
}

inline std::size_t config_count(const DlogTM& m, int n) {
    int w = work_width(n);
    return m.states.size() * (std::size_t(1) << w) * w * n;
}

inline Configuration start_configuration(const DlogTM& m, int n) {
    (void)work_width(n);
    return Configuration{0, 1, 1, m.start_state};
}

inline Configuration accept_configuration(const DlogTM& m, int n) {
    (void)work_width(n);
    return Configuration{0, 1, 1, m.accept_state};
}

// Deterministic ordering: work tape lexicographic, then work head, then input
// head, then canonical state order.  Index 0 is the start configuration and
// index 1 the accepting configuration.
inline std::vector<Configuration> enumerate_configs(const DlogTM& m, int n) {
    validate_tm(m);
    int w = work_width(n);
    std::vector<int> order = canonical_state_order(m);
    std::vector<Configuration> out;
    out.reserve(config_count(m, n));
    for (std::uint32_t tape = 0; tape < (1u << w); ++tape)
        for (int wh = 1; wh <= w; ++wh)
            for (int ih = 1; ih <= n; ++ih)
                for (int q : order) out.push_back(Configuration{tape, wh, ih, q});
    return out;
}

inline std::size_t config_index(const DlogTM& m, int n, const Configuration& c) {
    int w = work_width(n);
    std::vector<int> order = canonical_state_order(m);
    int rank = 0;
    for (std::size_t i = 0; i < order.size(); ++i)
        if (order[i] == c.state) rank = static_cast<int>(i);
    std::size_t idx = c.tape;
    idx = idx * w + (c.work_head - 1);
    idx = idx * n + (c.input_head - 1);
    idx = idx * m.states.size() + rank;
    return idx;
}

// One step of the configuration-level transition function, with the input
// bit under the head supplied explicitly.  The accepting configuration and
// the failure configuration are absorbing.  A transition into the accept
// state yields the normalized accepting configuration (work tape erased,
// both heads at the far left); head moves off either tape end fail.
inline Configuration step_configuration(const DlogTM& m, int n, const Configuration& c,
                                        int input_bit) {
    int w = work_width(n);
    if (c.is_fail()) return Configuration::fail();
    Configuration accept = accept_configuration(m, n);
    if (c == accept) return accept;
    const DlogTM::Action* act = m.action(input_bit, c.tape_bit(c.work_head, w), c.state);
    if (act == nullptr) return Configuration::fail();
    if (act->next_state == m.accept_state) return accept;
    Configuration next = c.with_tape_bit(c.work_head, w, act->write);
    next.input_head += act->input_move;
    next.work_head += act->work_move;
    next.state = act->next_state;
    if (next.input_head < 1 || next.input_head > n) return Configuration::fail();
    if (next.work_head < 1 || next.work_head > w) return Configuration::fail();
    return next;
}

inline Configuration tm_delta_prime(const DlogTM& m, const std::string& input,
                                    const Configuration& c) {
    int n = static_cast<int>(input.size());
    if (c.is_fail()) return Configuration::fail();
    if (c == accept_configuration(m, n)) return c;
    if (c.input_head < 1 || c.input_head > n) throw InputError("input head out of range");
    char ch = input[c.input_head - 1];
    if (ch != '0' && ch != '1') throw InputError("input must be a bit string");
    return step_configuration(m, n, c, ch - '0');
}

// Runs the machine from the start configuration.  Accepts on reaching the
// accepting configuration; rejects on the failure configuration or when a
// configuration repeats (the configuration space is finite, so a repeat
// means the machine never halts).
inline bool tm_accepts(const DlogTM& m, const std::string& input) {
    validate_tm(m);
    int n = static_cast<int>(input.size());
    (void)work_width(n);
    Configuration c = start_configuration(m, n);
    Configuration accept = accept_configuration(m, n);
    std::size_t cap = config_count(m, n);
    std::set<std::tuple<std::uint32_t, int, int, int>> visited;
    for (std::size_t steps = 0; steps <= cap; ++steps) {
        if (c == accept) return true;
        if (c.is_fail()) return false;
        if (!visited.insert({c.tape, c.work_head, c.input_head, c.state}).second) return false;
        c = tm_delta_prime(m, input, c);
    }
    return false;
}

// ---------------------------------------------------------------------------
// Deterministic finite automata
// ---------------------------------------------------------------------------

struct DFA {
    std::vector<std::string> states;
    std::vector<std::string> alphabet;
    int start_state = 0;
    std::set<int> final_states;
    std::map<std::pair<int, int>, int> delta;  // (state, symbol) -> state; may be partial

    int state_index(const std::string& name) const {
        for (std::size_t i = 0; i < states.size(); ++i)
            if (states[i] == name) return static_cast<int>(i);
        return -1;
    }

    int symbol_index(const std::string& name) const {
        for (std::size_t i = 0; i < alphabet.size(); ++i)
            if (alphabet[i] == name) return static_cast<int>(i);
        return -1;
    }
};

inline void validate_dfa(const DFA& m) {
    if (m.states.empty()) throw InputError("automaton has no states");
    if (m.start_state < 0 || m.start_state >= static_cast<int>(m.states.size()))
        throw InputError("start state out of range");
    for (int f : m.final_states)
        if (f < 0 || f >= static_cast<int>(m.states.size()))
            throw InputError("final state out of range");
    for (const auto& [key, target] : m.delta) {
        if (key.first < 0 || key.first >= static_cast<int>(m.states.size()) ||
            key.second < 0 || key.second >= static_cast<int>(m.alphabet.size()) || target < 0 ||
            target >= static_cast<int>(m.states.size()))
            throw InputError("transition references unknown state or symbol");
    }
}

inline bool dfa_accepts(const DFA& m, const std::vector<std::string>& word) {
    validate_dfa(m);
    int q = m.start_state;
    for (const std::string& sym : word) {
        int s = m.symbol_index(sym);
        if (s < 0) throw InputError("symbol '" + sym + "' outside the alphabet");
        auto it = m.delta.find({q, s});
        if (it == m.delta.end()) return false;  // incomplete transition rejects
        q = it->second;
    }
    return m.final_states.count(q) != 0;
}

// Convenience for single-character symbols.
inline bool dfa_accepts(const DFA& m, const std::string& word) {
    std::vector<std::string> symbols;
    symbols.reserve(word.size());
    for (char c : word) symbols.emplace_back(1, c);
    return dfa_accepts(m, symbols);
}

namespace dfa_markers {
inline const char* kLetterA = "a";
inline const char* kLetterB = "b";
inline const char* kLetterC = "c";
inline const char* kStatePre = "q_pre";
inline const char* kStateEnd = "q_e";
inline const char* kStateFinal = "q_f";
inline const char* kStateReject = "q_r";
}  // namespace dfa_markers

// Wraps a machine so it has a unique entry arc, a unique final state, and a
// complete transition function: a fresh start state reads marker a into the
// old start; every old final state reads marker b into a fresh pre-final
// state, which reads marker c into the only final state; every undefined
// (state, symbol) pair is routed to a rejecting sink.  The wrapped machine
// accepts a . x . b . c exactly when the original accepts x.
inline DFA dfa_augment(const DFA& m) {
    validate_dfa(m);
    using namespace dfa_markers;
    for (const std::string& sym : m.alphabet)
        if (sym == kLetterA || sym == kLetterB || sym == kLetterC)
            throw InputError("alphabet already contains marker letter '" + sym + "'");
    for (const std::string& st : m.states)
        if (st == kStatePre || st == kStateEnd || st == kStateFinal || st == kStateReject)
            throw InputError("state name '" + st + "' collides with an augmentation state");

    DFA out;
    out.states = m.states;
    int q_pre = static_cast<int>(out.states.size());
    out.states.push_back(kStatePre);
    int q_e = static_cast<int>(out.states.size());
    out.states.push_back(kStateEnd);
    int q_f = static_cast<int>(out.states.size());
    out.states.push_back(kStateFinal);
    int q_r = static_cast<int>(out.states.size());
    out.states.push_back(kStateReject);

    out.alphabet = m.alphabet;
    int sym_a = static_cast<int>(out.alphabet.size());
    out.alphabet.push_back(kLetterA);
    int sym_b = static_cast<int>(out.alphabet.size());
    out.alphabet.push_back(kLetterB);
    int sym_c = static_cast<int>(out.alphabet.size());
    out.alphabet.push_back(kLetterC);

    out.start_state = q_pre;
    out.final_states = {q_f};
    out.delta = m.delta;
    out.delta[{q_pre, sym_a}] = m.start_state;
    for (int f : m.final_states) out.delta[{f, sym_b}] = q_e;
    out.delta[{q_e, sym_c}] = q_f;
    for (int q = 0; q < static_cast<int>(out.states.size()); ++q)
        for (int s = 0; s < static_cast<int>(out.alphabet.size()); ++s)
            out.delta.try_emplace({q, s}, q_r);
    return out;
}

// ---------------------------------------------------------------------------
// DNF formulas
// ---------------------------------------------------------------------------

struct DnfFormula {
    struct Literal {
        int variable = 1;  // 1-based
        bool negated = false;
    };

    int variable_count = 0;
    std::vector<std::vector<Literal>> terms;
};

inline void validate_dnf(const DnfFormula& phi) {
    if (phi.variable_count < 1) throw InputError("formula needs at least one variable");
    for (const auto& term : phi.terms) {
        if (term.empty()) throw InputError("terms must be non-empty");
        for (const auto& lit : term)
            if (lit.variable < 1 || lit.variable > phi.variable_count)
                throw InputError("literal variable index out of range");
    }
}

inline bool dnf_eval(const DnfFormula& phi, const std::string& assignment) {
    validate_dnf(phi);
    if (static_cast<int>(assignment.size()) != phi.variable_count)
        throw InputError("assignment length does not match the variable count");
    for (char c : assignment)
        if (c != '0' && c != '1') throw InputError("assignment must be a bit string");
    for (const auto& term : phi.terms) {
        bool satisfied = true;
        for (const auto& lit : term) {
            bool value = assignment[lit.variable - 1] == '1';
            if (value == lit.negated) {
                satisfied = false;
                break;
            }
        }
        if (satisfied) return true;
    }
    return false;
}

// Pads with contradictory terms v1 and not-v1 until exactly r terms;
// extension-equivalent to the input on every assignment.
inline DnfFormula dnf_pad(const DnfFormula& phi, int r) {
    validate_dnf(phi);
    if (r < static_cast<int>(phi.terms.size()))
        throw InputError("cannot pad to fewer terms than the formula has");
    DnfFormula out = phi;
    while (static_cast<int>(out.terms.size()) < r)
        out.terms.push_back({{1, false}, {1, true}});
    return out;
}

// ---------------------------------------------------------------------------
// Alternating machines, described at the configuration level
// ---------------------------------------------------------------------------

// Only what the two-successor construction needs: a finite configuration
// space with index 0 the start and index 1 the accepting configuration.
// Each non-accepting configuration reads one input position; existential
// configurations have at most one successor per bit (none = fail) and
// universal configurations exactly two.
struct AltMachine {
    struct Config {
        int input_pos = 1;  // 1-based position read by this configuration
        bool universal = false;
        std::array<std::vector<int>, 2> successors;  // per input bit
    };

    int input_length = 0;
    std::vector<Config> configs;  // index 0 = start, index 1 = accept
};

inline void validate_alt(const AltMachine& m) {
    if (m.input_length < 1) throw InputError("input length must be positive");
    if (m.configs.size() < 2) throw InputError("need at least start and accept configurations");
    for (std::size_t j = 0; j < m.configs.size(); ++j) {
        const auto& conf = m.configs[j];
        if (j == 1) continue;  // the accepting configuration is terminal
        if (conf.input_pos < 1 || conf.input_pos > m.input_length)
            throw InputError("configuration reads an input position out of range");
        for (int b = 0; b < 2; ++b) {
            const auto& succ = conf.successors[b];
            if (conf.universal && succ.size() != 2)
                throw InputError("universal configurations list exactly two successors");
            if (!conf.universal && succ.size() > 1)
                throw InputError("existential configurations list at most one successor");
            for (int s : succ)
                if (s < 0 || s >= static_cast<int>(m.configs.size()))
                    throw InputError("successor index out of range");
        }
    }
}

// Least-fixpoint acceptance: the accepting configuration accepts; an
// existential configuration accepts when its successor under the read bit
// does; a universal one when both do.
inline bool alt_accepts(const AltMachine& m, const std::string& input) {
    validate_alt(m);
    if (static_cast<int>(input.size()) != m.input_length)
        throw InputError("input length mismatch");
    std::vector<bool> accepted(m.configs.size(), false);
    accepted[1] = true;
    bool changed = true;
    while (changed) {
        changed = false;
        for (std::size_t j = 0; j < m.configs.size(); ++j) {
            if (accepted[j] || j == 1) continue;
            const auto& conf = m.configs[j];
            int bit = input[conf.input_pos - 1] - '0';
            const auto& succ = conf.successors[bit];
            bool value;
            if (conf.universal)
                value = accepted[succ[0]] && accepted[succ[1]];
            else
                value = !succ.empty() && accepted[succ[0]];
            if (value) {
                accepted[j] = true;
                changed = true;
            }
        }
    }
    return accepted[0];
}

}  // namespace reclearn
