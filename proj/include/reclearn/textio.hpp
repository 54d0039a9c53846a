#pragma once

#include <cctype>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "reclearn/analysis.hpp"
#include "reclearn/ast.hpp"
#include "reclearn/errors.hpp"
#include "reclearn/machines.hpp"

namespace reclearn {

// ---------------------------------------------------------------------------
// Printing
// ---------------------------------------------------------------------------

inline std::string to_string(const Term& t) { return t.text(); }

inline std::string to_string(const Atom& atom) {
    std::string out = symbol_name(atom.predicate);
    if (atom.args.empty()) return out;
    out += '(';
    for (std::size_t i = 0; i < atom.args.size(); ++i) {
        if (i > 0) out += ',';
        out += atom.args[i].text();
    }
    out += ')';
    return out;
}

inline std::string to_string(const Clause& clause) {
    std::string out = to_string(clause.head);
    if (!clause.body.empty()) {
        out += " :- ";
        for (std::size_t i = 0; i < clause.body.size(); ++i) {
            if (i > 0) out += ", ";
            out += to_string(clause.body[i]);
        }
    }
    out += '.';
    return out;
}

inline std::string print_program(const Program& program) {
    std::string out;
    for (const Clause& c : program.clauses) {
        out += to_string(c);
        out += '\n';
    }
    return out;
}

inline bool atom_text_less(const Atom& a, const Atom& b) { return to_string(a) < to_string(b); }

// Facts are printed in textual order so equal databases serialize
// byte-identically regardless of construction order.
inline std::string print_database(const Database& db) {
    std::vector<Atom> facts = db.facts();
    std::sort(facts.begin(), facts.end(), atom_text_less);
    std::string out;
    for (const Atom& f : facts) {
        out += to_string(f);
        out += '\n';
    }
    return out;
}

inline std::string print_instance(const ExtendedInstance& inst) {
    std::string out = "fact: " + to_string(inst.fact) + "\n";
    for (const Atom& d : inst.description) out += "desc: " + to_string(d) + "\n";
    return out;
}

inline std::string to_string(const ModeString& mode) {
    std::string out = symbol_name(mode.predicate);
    out += '(';
    for (std::size_t i = 0; i < mode.polarity.size(); ++i) {
        if (i > 0) out += ',';
        out += mode.polarity[i] == Polarity::Input ? '+' : '-';
    }
    out += ')';
    return out;
}

inline std::string print_declaration(const Declaration& dec) {
    std::string out =
        "decl " + symbol_name(dec.head_predicate) + "/" + std::to_string(dec.head_arity) + "\n";
    std::vector<std::string> lines;
    lines.reserve(dec.modes.size());
    for (const ModeString& m : dec.modes) lines.push_back("mode " + to_string(m));
    std::sort(lines.begin(), lines.end());
    for (const std::string& line : lines) {
        out += line;
        out += '\n';
    }
    return out;
}

inline std::string print_tm(const DlogTM& m) {
    std::string out = "tm\nstates:";
    for (const std::string& s : m.states) out += " " + s;
    out += "\nstart: " + m.states[m.start_state];
    out += "\naccept: " + m.states[m.accept_state];
    out += "\n";
    for (const auto& [key, act] : m.delta) {
        auto [ib, wb, q] = key;
        out += "t " + std::to_string(ib) + " " + std::to_string(wb) + " " + m.states[q] + " -> " +
               std::to_string(act.write) + " " + (act.input_move > 0 ? "R" : "L") + " " +
               (act.work_move > 0 ? "R" : "L") + " " + m.states[act.next_state] + "\n";
    }
    return out;
}

inline std::string print_dfa(const DFA& m) {
    std::string out = "dfa\nstart: " + m.states[m.start_state] + "\nfinal:";
    for (int f : m.final_states) out += " " + m.states[f];
    out += "\n";
    for (const auto& [key, target] : m.delta)
        out += "arc " + m.states[key.first] + " " + m.alphabet[key.second] + " " +
               m.states[target] + "\n";
    return out;
}

inline std::string print_dnf(const DnfFormula& phi) {
    std::string out = "dnf n=" + std::to_string(phi.variable_count) + "\n";
    for (const auto& term : phi.terms) {
        out += "term:";
        for (const auto& lit : term)
            out += std::string(" ") + (lit.negated ? "!" : "") + "v" + std::to_string(lit.variable);
        out += "\n";
    }
    return out;
}

inline std::string print_alt(const AltMachine& m) {
    std::string out = "alt n=" + std::to_string(m.input_length) + "\n";
    out += "configs " + std::to_string(m.configs.size()) + "\n";
    for (std::size_t j = 0; j < m.configs.size(); ++j) {
        if (j == 1) continue;  // the accepting configuration has no transitions
        const auto& conf = m.configs[j];
        out += "conf " + std::to_string(j) + (conf.universal ? " u" : " e") +
               " i=" + std::to_string(conf.input_pos);
        for (int b = 0; b < 2; ++b) {
            out += " " + std::to_string(b) + ":";
            const auto& succ = conf.successors[b];
            if (succ.empty()) {
                out += "fail";
            } else {
                for (std::size_t t = 0; t < succ.size(); ++t)
                    out += (t ? "," : "") + std::to_string(succ[t]);
            }
        }
        out += "\n";
    }
    return out;
}

// ---------------------------------------------------------------------------
// Parsing: atoms, clauses, programs
// ---------------------------------------------------------------------------

namespace detail {

inline bool ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

class Cursor {
public:
    explicit Cursor(std::string_view text, int first_line = 1) : text_(text), line_(first_line) {}

    void skip_layout() {
        while (pos_ < text_.size()) {
            char c = text_[pos_];
            if (c == '%') {
                while (pos_ < text_.size() && text_[pos_] != '\n') advance();
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                advance();
            } else {
                break;
            }
        }
    }

    bool at_end() {
        skip_layout();
        return pos_ >= text_.size();
    }

    char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }

    void expect(char c, const char* what) {
        skip_layout();
        if (peek() != c) fail(std::string("expected '") + c + "' " + what);
        advance();
    }

    bool consume(char c) {
        skip_layout();
        if (peek() != c) return false;
        advance();
        return true;
    }

    bool consume(std::string_view token) {
        skip_layout();
        if (text_.substr(pos_, token.size()) != token) return false;
        for (std::size_t i = 0; i < token.size(); ++i) advance();
        return true;
    }

    std::string identifier() {
        skip_layout();
        if (pos_ >= text_.size() || !ident_char(text_[pos_]))
            fail("expected an identifier");
        if (text_[pos_] == '_') fail("identifiers may not start with '_'");
        std::size_t start = pos_;
        while (pos_ < text_.size() && ident_char(text_[pos_])) advance();
        return std::string(text_.substr(start, pos_ - start));
    }

    [[noreturn]] void fail(const std::string& message) const {
        throw ParseError(message, line_, column_);
    }

    int line() const { return line_; }
    int column() const { return column_; }

private:
    void advance() {
        if (text_[pos_] == '\n') {
            ++line_;
            column_ = 1;
        } else {
            ++column_;
        }
        ++pos_;
    }

    std::string_view text_;
    std::size_t pos_ = 0;
    int line_;
    int column_ = 1;
};

inline Term parse_term(Cursor& cur) {
    std::string name = cur.identifier();
    if (std::isupper(static_cast<unsigned char>(name[0]))) return Term::variable(name);
    return Term::constant(name);
}

inline Atom parse_atom(Cursor& cur) {
    cur.skip_layout();
    Atom atom;
    atom.predicate = intern(cur.identifier());
    if (cur.consume('(')) {
        if (!cur.consume(')')) {
            atom.args.push_back(parse_term(cur));
            while (cur.consume(',')) atom.args.push_back(parse_term(cur));
            cur.expect(')', "to close the argument list");
        }
    }
    return atom;
}

}  // namespace detail

inline Atom parse_atom(std::string_view text, int first_line = 1) {
    detail::Cursor cur(text, first_line);
    Atom atom = detail::parse_atom(cur);
    if (!cur.at_end()) cur.fail("unexpected trailing input after atom");
    return atom;
}

inline Program parse_program(std::string_view text) {
    detail::Cursor cur(text);
    Program program;
    while (!cur.at_end()) {
        Clause clause;
        clause.head = detail::parse_atom(cur);
        if (cur.consume(":-")) {
            clause.body.push_back(detail::parse_atom(cur));
            while (cur.consume(',')) clause.body.push_back(detail::parse_atom(cur));
        }
        cur.expect('.', "to terminate the clause");
        program.clauses.push_back(std::move(clause));
    }
    return program;
}

// ---------------------------------------------------------------------------
// Parsing: line-oriented formats
// ---------------------------------------------------------------------------

namespace detail {

struct Line {
    std::string text;
    int number;
};

inline std::vector<Line> content_lines(std::string_view text) {
    std::vector<Line> lines;
    int number = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        ++number;
        std::string line(text.substr(start, end - start));
        if (auto cut = line.find('%'); cut != std::string::npos) line.erase(cut);
        while (!line.empty() && std::isspace(static_cast<unsigned char>(line.back())))
            line.pop_back();
        std::size_t lead = 0;
        while (lead < line.size() && std::isspace(static_cast<unsigned char>(line[lead]))) ++lead;
        line.erase(0, lead);
        if (!line.empty()) lines.push_back({line, number});
        if (end == text.size()) break;
        start = end + 1;
    }
    return lines;
}

inline std::vector<std::string> split_words(const std::string& line) {
    std::vector<std::string> words;
    std::istringstream in(line);
    std::string word;
    while (in >> word) words.push_back(word);
    return words;
}

[[noreturn]] inline void line_fail(const std::string& message, const Line& line) {
    throw ParseError(message, line.number, 1);
}

}  // namespace detail

inline Database parse_database(std::string_view text) {
    Database db;
    for (const auto& line : detail::content_lines(text)) {
        Atom fact = parse_atom(line.text, line.number);
        if (!fact.ground()) detail::line_fail("database facts must be ground", line);
        db.insert(fact);
    }
    return db;
}

inline ExtendedInstance parse_instance(std::string_view text) {
    std::optional<Atom> fact;
    std::vector<Atom> description;
    for (const auto& line : detail::content_lines(text)) {
        if (line.text.rfind("fact:", 0) == 0) {
            if (fact) detail::line_fail("duplicate fact line", line);
            fact = parse_atom(line.text.substr(5), line.number);
        } else if (line.text.rfind("desc:", 0) == 0) {
            description.push_back(parse_atom(line.text.substr(5), line.number));
        } else {
            detail::line_fail("expected a 'fact:' or 'desc:' line", line);
        }
    }
    if (!fact) throw ParseError("instance file has no fact line", 1, 1);
    return ExtendedInstance(std::move(*fact), std::move(description));
}

inline Declaration parse_declaration(std::string_view text) {
    Declaration dec;
    bool have_header = false;
    for (const auto& line : detail::content_lines(text)) {
        auto words = detail::split_words(line.text);
        if (words[0] == "decl") {
            if (have_header || words.size() != 2) detail::line_fail("malformed decl line", line);
            auto slash = words[1].find('/');
            if (slash == std::string::npos) detail::line_fail("expected <pred>/<arity>", line);
            dec.head_predicate = intern(words[1].substr(0, slash));
            try {
                dec.head_arity = std::stoi(words[1].substr(slash + 1));
            } catch (const std::exception&) {
                detail::line_fail("bad arity", line);
            }
            have_header = true;
        } else if (words[0] == "mode") {
            if (words.size() != 2) detail::line_fail("malformed mode line", line);
            const std::string& spec = words[1];
            auto open = spec.find('(');
            if (open == std::string::npos || spec.back() != ')')
                detail::line_fail("expected <pred>(<+|-list>)", line);
            ModeString mode;
            mode.predicate = intern(spec.substr(0, open));
            for (std::size_t i = open + 1; i + 1 < spec.size(); ++i) {
                char c = spec[i];
                if (c == ',') continue;
                if (c == '+')
                    mode.polarity.push_back(Polarity::Input);
                else if (c == '-')
                    mode.polarity.push_back(Polarity::Output);
                else
                    detail::line_fail("mode characters must be '+' or '-'", line);
            }
            dec.modes.insert(std::move(mode));
        } else {
            detail::line_fail("expected a 'decl' or 'mode' line", line);
        }
    }
    if (!have_header) throw ParseError("declaration file has no decl line", 1, 1);
    return dec;
}

inline DlogTM parse_tm(std::string_view text) {
    auto lines = detail::content_lines(text);
    if (lines.empty() || lines[0].text != "tm")
        throw ParseError("expected a 'tm' header line", 1, 1);
    DlogTM m;
    bool have_start = false, have_accept = false;
    std::vector<std::array<std::string, 8>> raw_transitions;
    std::vector<int> transition_lines;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto& line = lines[i];
        auto words = detail::split_words(line.text);
        if (words[0] == "states:") {
            m.states.assign(words.begin() + 1, words.end());
        } else if (words[0] == "start:") {
            if (words.size() != 2) detail::line_fail("malformed start line", line);
            m.start_state = -2;
            have_start = true;
            raw_transitions.push_back({"start:", words[1], "", "", "", "", "", ""});
            transition_lines.push_back(line.number);
        } else if (words[0] == "accept:") {
            if (words.size() != 2) detail::line_fail("malformed accept line", line);
            have_accept = true;
            raw_transitions.push_back({"accept:", words[1], "", "", "", "", "", ""});
            transition_lines.push_back(line.number);
        } else if (words[0] == "t") {
            if (words.size() != 9 || words[4] != "->")
                detail::line_fail("expected t <in> <work> <state> -> <write> <L|R> <L|R> <state>",
                                  line);
            raw_transitions.push_back({"t", words[1], words[2], words[3], words[5], words[6],
                                       words[7], words[8]});
            transition_lines.push_back(line.number);
        } else {
            detail::line_fail("unrecognized machine line", line);
        }
    }
    if (m.states.empty()) throw ParseError("machine file lists no states", 1, 1);
    if (!have_start || !have_accept)
        throw ParseError("machine file needs start and accept lines", 1, 1);
    auto state_of = [&](const std::string& name, int line_number) {
        int idx = m.state_index(name);
        if (idx < 0) throw ParseError("unknown state '" + name + "'", line_number, 1);
        return idx;
    };
    auto bit_of = [&](const std::string& word, int line_number) {
        if (word != "0" && word != "1") throw ParseError("expected a bit", line_number, 1);
        return word == "1" ? 1 : 0;
    };
    auto move_of = [&](const std::string& word, int line_number) {
        if (word == "L") return -1;
        if (word == "R") return 1;
        throw ParseError("expected L or R", line_number, 1);
    };
    for (std::size_t i = 0; i < raw_transitions.size(); ++i) {
        const auto& t = raw_transitions[i];
        int ln = transition_lines[i];
        if (t[0] == "start:") {
            m.start_state = state_of(t[1], ln);
        } else if (t[0] == "accept:") {
            m.accept_state = state_of(t[1], ln);
        } else {
            DlogTM::Action act;
            int ib = bit_of(t[1], ln), wb = bit_of(t[2], ln), q = state_of(t[3], ln);
            act.write = bit_of(t[4], ln);
            act.input_move = move_of(t[5], ln);
            act.work_move = move_of(t[6], ln);
            act.next_state = state_of(t[7], ln);
            if (!m.delta.emplace(std::array<int, 3>{ib, wb, q}, act).second)
                throw ParseError("duplicate transition", ln, 1);
        }
    }
    validate_tm(m);
    return m;
}

inline DFA parse_dfa(std::string_view text) {
    auto lines = detail::content_lines(text);
    if (lines.empty() || lines[0].text != "dfa")
        throw ParseError("expected a 'dfa' header line", 1, 1);
    DFA m;
    std::string start_name;
    std::vector<std::string> final_names;
    std::vector<std::array<std::string, 3>> arcs;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto& line = lines[i];
        auto words = detail::split_words(line.text);
        if (words[0] == "start:") {
            if (words.size() != 2) detail::line_fail("malformed start line", line);
            start_name = words[1];
        } else if (words[0] == "final:") {
            final_names.assign(words.begin() + 1, words.end());
        } else if (words[0] == "arc") {
            if (words.size() != 4) detail::line_fail("expected arc <state> <symbol> <state>", line);
            arcs.push_back({words[1], words[2], words[3]});
        } else {
            detail::line_fail("unrecognized automaton line", line);
        }
    }
    auto add_state = [&](const std::string& name) {
        if (m.state_index(name) < 0) m.states.push_back(name);
    };
    auto add_symbol = [&](const std::string& name) {
        if (m.symbol_index(name) < 0) m.alphabet.push_back(name);
    };
    if (start_name.empty()) throw ParseError("automaton file needs a start line", 1, 1);
    add_state(start_name);
    for (const auto& f : final_names) add_state(f);
    for (const auto& arc : arcs) {
        add_state(arc[0]);
        add_symbol(arc[1]);
        add_state(arc[2]);
    }
    m.start_state = m.state_index(start_name);
    for (const auto& f : final_names) m.final_states.insert(m.state_index(f));
    for (const auto& arc : arcs) {
        auto key = std::make_pair(m.state_index(arc[0]), m.symbol_index(arc[1]));
        int target = m.state_index(arc[2]);
        auto [it, inserted] = m.delta.emplace(key, target);
        if (!inserted && it->second != target)
            throw InputError("automaton is not deterministic on (" + arc[0] + ", " + arc[1] + ")");
    }
    validate_dfa(m);
    return m;
}

inline DnfFormula parse_dnf(std::string_view text) {
    auto lines = detail::content_lines(text);
    if (lines.empty() || lines[0].text.rfind("dnf", 0) != 0)
        throw ParseError("expected a 'dnf n=<n>' header line", 1, 1);
    auto header = detail::split_words(lines[0].text);
    if (header.size() != 2 || header[1].rfind("n=", 0) != 0)
        throw ParseError("expected a 'dnf n=<n>' header line", 1, 1);
    DnfFormula phi;
    try {
        phi.variable_count = std::stoi(header[1].substr(2));
    } catch (const std::exception&) {
        throw ParseError("bad variable count", lines[0].number, 1);
    }
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto& line = lines[i];
        auto words = detail::split_words(line.text);
        if (words[0] != "term:") detail::line_fail("expected a 'term:' line", line);
        std::vector<DnfFormula::Literal> term;
        for (std::size_t w = 1; w < words.size(); ++w) {
            std::string lit = words[w];
            DnfFormula::Literal entry;
            if (!lit.empty() && lit[0] == '!') {
                entry.negated = true;
                lit.erase(0, 1);
            }
            if (lit.size() < 2 || lit[0] != 'v') detail::line_fail("expected v<k> or !v<k>", line);
            try {
                entry.variable = std::stoi(lit.substr(1));
            } catch (const std::exception&) {
                detail::line_fail("bad variable index", line);
            }
            term.push_back(entry);
        }
        if (term.empty()) detail::line_fail("terms must be non-empty", line);
        phi.terms.push_back(std::move(term));
    }
    validate_dnf(phi);
    return phi;
}

inline AltMachine parse_alt(std::string_view text) {
    auto lines = detail::content_lines(text);
    if (lines.empty() || lines[0].text.rfind("alt n=", 0) != 0)
        throw ParseError("expected an 'alt n=<n>' header line", 1, 1);
    AltMachine m;
    try {
        m.input_length = std::stoi(lines[0].text.substr(6));
    } catch (const std::exception&) {
        throw ParseError("bad input length", lines[0].number, 1);
    }
    if (lines.size() < 2 || lines[1].text.rfind("configs ", 0) != 0)
        throw ParseError("expected a 'configs <count>' line", lines.size() > 1 ? lines[1].number : 1,
                         1);
    int count = 0;
    try {
        count = std::stoi(lines[1].text.substr(8));
    } catch (const std::exception&) {
        throw ParseError("bad configuration count", lines[1].number, 1);
    }
    if (count < 2) throw ParseError("need at least two configurations", lines[1].number, 1);
    m.configs.resize(count);
    for (std::size_t i = 2; i < lines.size(); ++i) {
        const auto& line = lines[i];
        auto words = detail::split_words(line.text);
        if (words.size() != 6 || words[0] != "conf")
            detail::line_fail("expected conf <id> <e|u> i=<pos> 0:<succ> 1:<succ>", line);
        int id = -1;
        try {
            id = std::stoi(words[1]);
        } catch (const std::exception&) {
            detail::line_fail("bad configuration id", line);
        }
        if (id < 0 || id >= count || id == 1)
            detail::line_fail("configuration id out of range (1 is the accepting one)", line);
        AltMachine::Config conf;
        if (words[2] == "u")
            conf.universal = true;
        else if (words[2] != "e")
            detail::line_fail("configuration kind must be e or u", line);
        if (words[3].rfind("i=", 0) != 0) detail::line_fail("expected i=<pos>", line);
        try {
            conf.input_pos = std::stoi(words[3].substr(2));
        } catch (const std::exception&) {
            detail::line_fail("bad input position", line);
        }
        for (int b = 0; b < 2; ++b) {
            const std::string& field = words[4 + b];
            std::string prefix = std::to_string(b) + ":";
            if (field.rfind(prefix, 0) != 0) detail::line_fail("expected " + prefix + "<succ>", line);
            std::string rest = field.substr(prefix.size());
            if (rest != "fail") {
                std::size_t pos = 0;
                while (pos < rest.size()) {
                    std::size_t comma = rest.find(',', pos);
                    if (comma == std::string::npos) comma = rest.size();
                    try {
                        conf.successors[b].push_back(std::stoi(rest.substr(pos, comma - pos)));
                    } catch (const std::exception&) {
                        detail::line_fail("bad successor id", line);
                    }
                    pos = comma + 1;
                }
            }
        }
        m.configs[id] = std::move(conf);
    }
    validate_alt(m);
    return m;
}

}  // namespace reclearn
