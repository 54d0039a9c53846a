#pragma once

#include <chrono>
#include <cstdlib>
#include <map>
#include <type_traits>
#include <functional>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include "reclearn/analysis.hpp"
#include "reclearn/ast.hpp"
#include "reclearn/eval.hpp"
#include "reclearn/reductions.hpp"
#include "reclearn/textio.hpp"

namespace reclearn {

// ---------------------------------------------------------------------------
// Input enumeration
// ---------------------------------------------------------------------------

inline std::vector<std::string> all_bit_strings(int n) {
    if (n < 0 || n > 30) throw InputError("bit-string length out of range");
    std::vector<std::string> out;
    out.reserve(std::size_t(1) << n);
    for (std::uint64_t v = 0; v < (std::uint64_t(1) << n); ++v) {
        std::string s(n, '0');
        for (int i = 0; i < n; ++i)
            if ((v >> (n - 1 - i)) & 1) s[i] = '1';
        out.push_back(std::move(s));
    }
    return out;
}

// Every string over the alphabet of length 0..max_len, shortest first, in
// alphabet order within a length.
inline std::vector<std::string> all_strings_up_to(const std::vector<std::string>& alphabet,
                                                  int max_len) {
    for (const std::string& sym : alphabet)
        if (sym.size() != 1) throw InputError("enumeration needs single-character symbols");
    std::vector<std::string> out{""};
    std::size_t level_begin = 0;
    for (int len = 1; len <= max_len; ++len) {
        std::size_t level_end = out.size();
        for (std::size_t i = level_begin; i < level_end; ++i)
            for (const std::string& sym : alphabet) out.push_back(out[i] + sym);
        level_begin = level_end;
    }
    return out;
}

inline std::vector<std::string> sample_bit_strings(int n, std::size_t count, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<std::string> out;
    out.reserve(count);
    for (std::size_t k = 0; k < count; ++k) {
        std::string s(n, '0');
        for (int i = 0; i < n; ++i) s[i] = (rng() & 1) ? '1' : '0';
        out.push_back(std::move(s));
    }
    return out;
}

inline std::vector<std::string> sample_strings(const std::vector<std::string>& alphabet,
                                               int min_len, int max_len, std::size_t count,
                                               std::uint64_t seed) {
    for (const std::string& sym : alphabet)
        if (sym.size() != 1) throw InputError("sampling needs single-character symbols");
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> len_dist(min_len, max_len);
    std::uniform_int_distribution<std::size_t> sym_dist(0, alphabet.size() - 1);
    std::vector<std::string> out;
    out.reserve(count);
    for (std::size_t k = 0; k < count; ++k) {
        std::string s;
        int len = len_dist(rng);
        for (int i = 0; i < len; ++i) s += alphabet[sym_dist(rng)];
        out.push_back(std::move(s));
    }
    return out;
}

inline unsigned worker_count() {
    if (const char* env = std::getenv("RECLEARN_THREADS")) {
        long value = std::strtol(env, nullptr, 10);
        if (value >= 1) return static_cast<unsigned>(value);
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

// ---------------------------------------------------------------------------
// Preservation
// ---------------------------------------------------------------------------

struct PreservationReport {
    std::string bundle_id;
    std::string params;
    std::optional<std::uint64_t> seed;
    std::size_t tested = 0;
    struct Mismatch {
        std::string raw;
        bool oracle = false;
        bool covered = false;
    };
    std::vector<Mismatch> mismatches;
    std::chrono::milliseconds elapsed{0};

    bool pass() const { return mismatches.empty(); }
};

// Serialized form is reproducible byte-for-byte: timing never appears.
inline std::string to_text(const PreservationReport& report) {
    std::string out = "bundle: " + report.bundle_id + "\n";
    out += "params: " + (report.params.empty() ? std::string("-") : report.params) + "\n";
    out += "seed: " + (report.seed ? std::to_string(*report.seed) : std::string("none")) + "\n";
    out += "inputs: " + std::to_string(report.tested) + "\n";
    for (const auto& m : report.mismatches)
        out += std::string("mismatch: input=") + (m.raw.empty() ? "<empty>" : m.raw) +
               " oracle=" + (m.oracle ? "true" : "false") +
               " covers=" + (m.covered ? "true" : "false") + "\n";
    out += std::string("result: ") + (report.pass() ? "PASS" : "FAIL") +
           " tested=" + std::to_string(report.tested) +
           " mismatches=" + std::to_string(report.mismatches.size()) + "\n";
    return out;
}

struct SourceOracle {
    RawKind kind = RawKind::BitString;
    std::function<bool(const std::string&)> verdict;
};

inline SourceOracle bundle_oracle(const ReductionBundle& bundle) {
    return SourceOracle{raw_kind_of(bundle.kind),
                        [&bundle](const std::string& raw) { return oracle_verdict(bundle, raw); }};
}

namespace detail {

// Runs fn(i) for i in [0, count) across workers; results land in index order.
inline void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn) {
    unsigned workers = worker_count();
    if (workers <= 1 || count < 2) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    workers = std::min<unsigned>(workers, static_cast<unsigned>(count));
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (std::size_t i = w; i < count; i += workers) fn(i);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (std::thread& t : pool) t.join();
    for (const std::exception_ptr& e : errors)
        if (e) std::rethrow_exception(e);
}

}  // namespace detail

// Compares the source-model verdict against program coverage of the mapped
// instance, for every raw input.  Mismatches are collected in enumeration
// order in both directions, so the report is deterministic even when the
// checks fan out across workers.
inline PreservationReport check_preservation(const ReductionBundle& bundle,
                                             const SourceOracle& oracle,
                                             const std::vector<std::string>& raw_inputs,
                                             std::optional<std::uint64_t> seed = std::nullopt) {
    if (oracle.kind != raw_kind_of(bundle.kind))
        throw InputError("oracle kind does not match the bundle kind");
    auto start = std::chrono::steady_clock::now();
    PreservationReport report;
    report.bundle_id = bundle.id();
    report.seed = seed;
    report.tested = raw_inputs.size();

    std::vector<signed char> oracle_verdicts(raw_inputs.size());
    std::vector<signed char> covers_verdicts(raw_inputs.size());
    detail::parallel_for(raw_inputs.size(), [&](std::size_t i) {
        oracle_verdicts[i] = oracle.verdict(raw_inputs[i]) ? 1 : 0;
        covers_verdicts[i] =
            covers(bundle.program, bundle.database, map_instance(bundle, raw_inputs[i])) ? 1 : 0;
    });
    for (std::size_t i = 0; i < raw_inputs.size(); ++i) {
        if (oracle_verdicts[i] != covers_verdicts[i])
            report.mismatches.push_back(
                {raw_inputs[i], oracle_verdicts[i] != 0, covers_verdicts[i] != 0});
    }
    report.elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
        std::chrono::steady_clock::now() - start);
    return report;
}

// ---------------------------------------------------------------------------
// Conformance
// ---------------------------------------------------------------------------

// Expected syntactic classes for a generated bundle; absent fields are not
// checked.
struct ClassExpectations {
    std::optional<std::size_t> clause_count;
    std::optional<int> clause_depth;          // exact, every clause
    std::optional<bool> linear;
    std::optional<std::size_t> max_recursive_literals;
    std::optional<bool> closed;
    std::optional<std::size_t> locality;      // exact, every clause
    std::optional<bool> declaration_satisfied;
    std::optional<bool> determinate_modes;
    std::optional<std::size_t> max_predicate_arity;
};

struct ConformanceReport {
    struct Check {
        std::string name;
        std::string expected;
        std::string actual;
        bool pass = true;
    };
    struct ClauseRow {
        int depth = 0;
        std::size_t recursive_literals = 0;
        bool closed = true;
        std::size_t locality = 0;
        bool declaration_satisfied = true;
    };
    std::vector<ClauseRow> clauses;
    std::vector<Check> checks;

    bool pass() const {
        for (const Check& c : checks)
            if (!c.pass) return false;
        return true;
    }
};

inline std::string to_text(const ConformanceReport& report) {
    std::string out;
    for (std::size_t i = 0; i < report.clauses.size(); ++i) {
        const auto& row = report.clauses[i];
        out += "clause " + std::to_string(i) + ": depth=" + std::to_string(row.depth) +
               " recursive_literals=" + std::to_string(row.recursive_literals) +
               " closed=" + (row.closed ? "true" : "false") +
               " locality=" + std::to_string(row.locality) +
               " declaration=" + (row.declaration_satisfied ? "ok" : "violated") + "\n";
    }
    for (const auto& check : report.checks)
        out += "check " + check.name + ": expected=" + check.expected +
               " actual=" + check.actual + (check.pass ? " pass" : " FAIL") + "\n";
    out += std::string("result: ") + (report.pass() ? "PASS" : "FAIL") + "\n";
    return out;
}

namespace detail {

// Modes are checked per instance: the fact universe of one evaluation is
// the database plus that instance's description.  Modes whose predicate is
// untouched by any description are decided once against the database.
inline bool modes_determinate(const ReductionBundle& bundle,
                              const std::vector<ExtendedInstance>& samples) {
    std::map<std::uint64_t, std::vector<Atom>> db_facts;
    for (const Atom& f : bundle.database.facts()) db_facts[pred_key(f)].push_back(f);
    std::set<std::uint64_t> described;
    for (const ExtendedInstance& inst : samples)
        for (const Atom& f : inst.description) described.insert(pred_key(f));

    for (const ModeString& mode : bundle.declaration.modes) {
        std::uint64_t key = pred_key(mode.predicate, mode.arity());
        if (described.count(key) == 0) {
            auto it = db_facts.find(key);
            if (it != db_facts.end() && !mode_is_determinate(mode, it->second)) return false;
            continue;
        }
        for (const ExtendedInstance& inst : samples) {
            std::vector<Atom> universe;
            auto it = db_facts.find(key);
            if (it != db_facts.end()) universe = it->second;
            for (const Atom& f : inst.description)
                if (pred_key(f) == key) universe.push_back(f);
            if (universe.empty()) continue;
            if (!mode_is_determinate(mode, universe)) return false;
        }
    }
    return true;
}

inline std::size_t max_predicate_arity(const ReductionBundle& bundle) {
    std::size_t arity = 0;
    for (const Atom& f : bundle.database.facts()) arity = std::max(arity, f.arity());
    for (const Clause& c : bundle.program.clauses) {
        arity = std::max(arity, c.head.arity());
        for (const Atom& lit : c.body) arity = std::max(arity, lit.arity());
    }
    for (const ModeString& mode : bundle.declaration.modes) arity = std::max(arity, mode.arity());
    return arity;
}

template <class T>
void add_check(ConformanceReport& report, const std::string& name, const std::optional<T>& expected,
               const T& actual) {
    if (!expected) return;
    ConformanceReport::Check check;
    check.name = name;
    if constexpr (std::is_same_v<T, bool>) {
        check.expected = *expected ? "true" : "false";
        check.actual = actual ? "true" : "false";
    } else {
        check.expected = std::to_string(*expected);
        check.actual = std::to_string(actual);
    }
    check.pass = *expected == actual;
    report.checks.push_back(std::move(check));
}

}  // namespace detail

// Runs the full restriction analysis over every clause of the bundle and
// compares the observed classes against the expectations.
inline ConformanceReport check_conformance(const ReductionBundle& bundle,
                                           const ClassExpectations& expectations,
                                           const std::vector<ExtendedInstance>& samples = {}) {
    ConformanceReport report;
    int depth_max = 0;
    bool depth_uniform = true;
    std::optional<int> first_depth;
    std::size_t locality_max = 0;
    bool locality_uniform = true;
    std::optional<std::size_t> first_locality;
    bool all_satisfy = true;
    for (const Clause& clause : bundle.program.clauses) {
        ConformanceReport::ClauseRow row;
        row.depth = variable_depths(clause).clause_depth;
        ClauseRecursion stats = clause_recursion(clause);
        row.recursive_literals = stats.recursive_literals;
        row.closed = stats.closed;
        row.locality = locality(clause).locality;
        row.declaration_satisfied = satisfies_declaration(clause, bundle.declaration);
        all_satisfy = all_satisfy && row.declaration_satisfied;
        depth_max = std::max(depth_max, row.depth);
        if (first_depth && *first_depth != row.depth) depth_uniform = false;
        if (!first_depth) first_depth = row.depth;
        locality_max = std::max(locality_max, row.locality);
        if (first_locality && *first_locality != row.locality) locality_uniform = false;
        if (!first_locality) first_locality = row.locality;
        report.clauses.push_back(row);
    }
    RecursionClass rc = recursion_class(bundle.program);

    detail::add_check(report, "clause_count", expectations.clause_count,
                      bundle.program.clauses.size());
    if (expectations.clause_depth) {
        int actual = depth_uniform ? depth_max : -1;
        detail::add_check(report, "clause_depth", expectations.clause_depth, actual);
    }
    detail::add_check(report, "linear", expectations.linear, rc.linear());
    detail::add_check(report, "max_recursive_literals", expectations.max_recursive_literals,
                      rc.max_recursive_literals_per_clause);
    detail::add_check(report, "closed", expectations.closed, rc.closed);
    if (expectations.locality) {
        std::size_t actual = locality_uniform ? locality_max : static_cast<std::size_t>(-1);
        detail::add_check(report, "locality", expectations.locality, actual);
    }
    detail::add_check(report, "declaration_satisfied", expectations.declaration_satisfied,
                      all_satisfy);
    if (expectations.determinate_modes)
        detail::add_check(report, "determinate_modes", expectations.determinate_modes,
                          detail::modes_determinate(bundle, samples));
    detail::add_check(report, "max_predicate_arity", expectations.max_predicate_arity,
                      detail::max_predicate_arity(bundle));
    return report;
}

// Built-in expectations matching each construction's stated classes.
inline ClassExpectations default_expectations(BundleKind kind) {
    ClassExpectations e;
    switch (kind) {
        case BundleKind::Thm2:
            e.clause_depth = 1;
            e.linear = true;
            e.closed = true;
            e.determinate_modes = true;
            e.declaration_satisfied = true;
            e.max_predicate_arity = 1;
            break;
        case BundleKind::Thm2Alt:
            e.clause_depth = 1;
            e.max_recursive_literals = 2;
            e.closed = true;
            e.determinate_modes = true;
            e.declaration_satisfied = true;
            e.max_predicate_arity = 1;
            break;
        case BundleKind::Thm3:
            e.clause_count = 1;
            e.clause_depth = 3;
            e.closed = true;
            e.locality = 4;
            e.determinate_modes = true;
            e.declaration_satisfied = true;
            break;
        case BundleKind::Thm4:
            e.locality = 3;
            e.linear = true;
            e.closed = true;
            e.declaration_satisfied = true;
            break;
        case BundleKind::Thm5:
            e.clause_count = 2;
            e.clause_depth = 1;
            e.linear = true;
            e.closed = true;
            e.determinate_modes = true;
            e.declaration_satisfied = true;
            break;
        case BundleKind::Thm6:
            e.clause_count = 2;
            e.clause_depth = 1;
            e.linear = true;
            e.closed = true;
            e.determinate_modes = true;
            e.declaration_satisfied = true;
            break;
    }
    return e;
}

// ---------------------------------------------------------------------------
// Coverage equivalence
// ---------------------------------------------------------------------------

// Pointwise coverage comparison of two (program, database) pairs over a list
// of instances.  The second side may see the instance fact through a
// transform (hat renaming, for transformed programs over renamed databases).
inline PreservationReport check_equivalence(
    const Program& p1, const Database& db1, const Program& p2, const Database& db2,
    const std::vector<ExtendedInstance>& instances,
    const std::function<Atom(const Atom&)>& fact_transform2 = nullptr) {
    auto start = std::chrono::steady_clock::now();
    PreservationReport report;
    report.bundle_id = "equivalence";
    report.tested = instances.size();
    std::vector<signed char> left(instances.size()), right(instances.size());
    detail::parallel_for(instances.size(), [&](std::size_t i) {
        left[i] = covers(p1, db1, instances[i]) ? 1 : 0;
        ExtendedInstance transformed(
            fact_transform2 ? fact_transform2(instances[i].fact) : instances[i].fact,
            instances[i].description);
        right[i] = covers(p2, db2, transformed) ? 1 : 0;
    });
    for (std::size_t i = 0; i < instances.size(); ++i)
        if (left[i] != right[i])
            report.mismatches.push_back({to_string(instances[i].fact) + " #" + std::to_string(i),
                                         left[i] != 0, right[i] != 0});
    report.elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
        std::chrono::steady_clock::now() - start);
    return report;
}

inline PreservationReport check_equivalence(const Program& p1, const Program& p2,
                                            const Database& db,
                                            const std::vector<ExtendedInstance>& instances) {
    return check_equivalence(p1, db, p2, db, instances);
}

}  // namespace reclearn
