// Acceptance suite: one pass/fail line per criterion, enforcing both the
// certified property and its runtime budget.  Exit code 0 only when every
// criterion passes.

#include <chrono>
#include <cstdio>
#include <exception>
#include <fstream>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "reclearn/bundle_io.hpp"
#include "reclearn/compose.hpp"
#include "reclearn/eval.hpp"
#include "reclearn/reductions.hpp"
#include "reclearn/textio.hpp"
#include "reclearn/verify.hpp"
#include "reference_models.hpp"

using namespace reclearn;

namespace {

std::string read_fixture(const std::string& name) {
    std::ifstream in(std::string(RECLEARN_FIXTURE_DIR) + "/" + name, std::ios::binary);
    if (!in) throw InputError("missing fixture " + name);
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

struct Check {
    bool pass = true;
    std::ostringstream detail;

    void expect(bool condition, const std::string& what) {
        if (!condition) {
            pass = false;
            if (detail.tellp() > 0) detail << "; ";
            detail << "failed: " << what;
        }
    }
    void note(const std::string& text) {
        if (detail.tellp() > 0) detail << "; ";
        detail << text;
    }
};

std::vector<ExtendedInstance> mapped_instances(const ReductionBundle& bundle, int n) {
    std::vector<ExtendedInstance> out;
    for (const std::string& raw : all_bit_strings(n)) out.push_back(map_instance(bundle, raw));
    return out;
}

// --------------------------------------------------------------------------

void criterion_figure2(Check& check) {
    ReductionBundle bundle = build_thm5(refmodels::fig2_formula(), 3);
    PreservationReport report =
        check_preservation(bundle, bundle_oracle(bundle), all_bit_strings(4));
    check.expect(report.pass(), "preservation over all 16 assignments");
    std::string instance_bytes = print_instance(map_instance(bundle, "1011"));
    check.expect(instance_bytes ==
                     "fact: p(1)\ndesc: bit_1(1)\ndesc: bit_2(0)\ndesc: bit_3(1)\ndesc: bit_4(1)\n",
                 "instance file bytes for 1011");
    check.note("16/16 assignments, instance bytes exact");
}

void criterion_thm2(Check& check) {
    struct Case {
        const char* name;
        DlogTM machine;
        int n;
    };
    std::vector<Case> cases;
    for (int n : {2, 4}) {
        cases.push_back({"trivial-accept", refmodels::trivial_accept_tm(), n});
        cases.push_back({"parity", refmodels::parity_tm(n), n});
    }
    std::size_t clause_total = 0;
    for (const Case& c : cases) {
        ReductionBundle bundle = build_thm2(c.machine, c.n);
        PreservationReport report =
            check_preservation(bundle, bundle_oracle(bundle), all_bit_strings(c.n));
        check.expect(report.pass(), std::string(c.name) + " n=" + std::to_string(c.n) +
                                        " exhaustive preservation");
        std::vector<ExtendedInstance> samples = mapped_instances(bundle, c.n);
        ConformanceReport conf =
            check_conformance(bundle, default_expectations(BundleKind::Thm2), samples);
        check.expect(conf.pass(), std::string(c.name) + " n=" + std::to_string(c.n) +
                                      " conformance (depth 1, linear, closed, determinate, "
                                      "arity <= 1)");
        clause_total += bundle.program.clauses.size();
    }
    // the parity machine at n = 4 genuinely decides parity
    DlogTM parity = refmodels::parity_tm(4);
    for (const std::string& x : all_bit_strings(4))
        check.expect(tm_accepts(parity, x) == (refmodels::popcount_ones(x) % 2 == 0),
                     "parity oracle at n=4 on " + x);
    check.note("4 bundles, " + std::to_string(clause_total) + " clauses total");
}

void criterion_thm2alt(Check& check) {
    AltMachine machine = refmodels::alt3_machine();
    ReductionBundle bundle = build_thm2_alt(machine);
    // hand-coded and/or oracle: the universal root accepts when both its
    // branches do; the accept branch always does, the existential branch
    // exactly when bit 2 is set
    SourceOracle oracle{RawKind::BitString, [](const std::string& x) {
                            bool accept_branch = true;
                            bool existential_branch = x[1] == '1';
                            return accept_branch && existential_branch;
                        }};
    PreservationReport report = check_preservation(bundle, oracle, all_bit_strings(2));
    check.expect(report.pass(), "preservation against the hand-coded and/or oracle");
    ConformanceReport conf = check_conformance(bundle, default_expectations(BundleKind::Thm2Alt),
                                               mapped_instances(bundle, 2));
    check.expect(conf.pass(), "conformance (2-ary closed recursion)");
    RecursionClass rc = recursion_class(bundle.program);
    check.expect(rc.max_recursive_literals_per_clause == 2, "universal clause has two calls");
    check.note("4/4 inputs");
}

void criterion_thm3(Check& check) {
    const int n = 4;
    DlogTM machine = refmodels::parity_tm(n);
    ReductionBundle bundle = build_thm3(machine, n);
    PreservationReport report =
        check_preservation(bundle, bundle_oracle(bundle), all_bit_strings(n));
    check.expect(report.pass(), "exhaustive preservation over 16 inputs");
    ConformanceReport conf = check_conformance(bundle, default_expectations(BundleKind::Thm3),
                                               mapped_instances(bundle, n));
    check.expect(conf.pass(), "conformance (single clause, depth 3, closed, locality 4, "
                              "declaration satisfied)");
    std::size_t p = config_count(machine, n);
    std::size_t blocks = std::size_t(n) * 2 * p;
    check.expect(bundle.program.clauses[0].body.size() == 4 * blocks, "block count formula");
    check.note(std::to_string(blocks) + " transition blocks, " +
               std::to_string(bundle.program.clauses[0].body.size()) + " body literals, " +
               std::to_string(bundle.database.size()) + " database facts");
}

void criterion_thm4(Check& check) {
    struct Case {
        const char* name;
        const char* fixture;
    };
    for (const Case& c : {Case{"parity", "parity.dfa"}, Case{"pattern", "ab_star.dfa"}}) {
        DFA machine = parse_dfa(read_fixture(c.fixture));
        ReductionBundle bundle = build_thm4(machine);
        std::vector<std::string> inputs = all_strings_up_to(machine.alphabet, 6);
        PreservationReport report = check_preservation(bundle, bundle_oracle(bundle), inputs);
        check.expect(report.pass(),
                     std::string(c.name) + " preservation for all strings up to length 6");
        std::vector<ExtendedInstance> samples{map_instance(bundle, ""),
                                              map_instance(bundle, "01")};
        ConformanceReport conf =
            check_conformance(bundle, default_expectations(BundleKind::Thm4), samples);
        check.expect(conf.pass(),
                     std::string(c.name) + " conformance (locality 3, linear closed recursive)");
        DFA wrapped = dfa_augment(machine);
        for (const std::string& x : inputs)
            check.expect(dfa_accepts(machine, x) == dfa_accepts(wrapped, "a" + x + "bc"),
                         std::string(c.name) + " wrapper property on \"" + x + "\"");
    }
    check.note("2 automata x 127 strings");
}

void criterion_thm6(Check& check) {
    ReductionBundle bundle = build_thm6(dnf_pad(refmodels::fig2_formula(), 4), 4);
    PreservationReport report =
        check_preservation(bundle, bundle_oracle(bundle), all_bit_strings(4));
    check.expect(report.pass(), "exhaustive preservation over 16 assignments");
    int covered = 0;
    for (const std::string& eta : all_bit_strings(4)) {
        ExtendedInstance inst = map_instance(bundle, eta);
        auto depth = prove_min_depth(bundle.program, bundle.database, inst, 12);
        if (covers(bundle.program, bundle.database, inst)) {
            ++covered;
            check.expect(depth.has_value() && *depth == 3,
                         "covered instance " + eta + " proves at depth exactly 3");
        } else {
            check.expect(!depth.has_value(), "uncovered instance " + eta + " has no proof");
        }
    }
    check.note(std::to_string(covered) + " covered instances, all at proof depth 3 = k+1");
}

void criterion_unroll(Check& check) {
    ReductionBundle bundle = build_thm5(refmodels::fig2_formula(), 3);
    std::vector<ExtendedInstance> instances = mapped_instances(bundle, 4);
    std::size_t bound = h_max_default(bundle.database, bundle.declaration, instances[0]);
    Program unrolled =
        unroll(bundle.program.clauses[0], bundle.program.clauses[1], static_cast<int>(bound));
    PreservationReport report =
        check_equivalence(bundle.program, unrolled, bundle.database, instances);
    check.expect(report.pass(), "coverage equivalence on all 16 instances");
    check.expect(recursion_class(unrolled).recursive_clause_count == 0,
                 "unrolled program is nonrecursive");
    check.note("h_max = " + std::to_string(bound) + ", " +
               std::to_string(unrolled.clauses.size()) + " unrolled clauses, exact");
}

void criterion_mesh(Check& check) {
    ReductionBundle bundle = build_thm6(dnf_pad(refmodels::fig2_formula(), 4), 4);
    std::vector<ExtendedInstance> instances = mapped_instances(bundle, 4);
    std::vector<Clause> meshed = mesh(bundle.program.clauses[0], bundle.program.clauses[1], 3);
    check.expect(meshed.size() == 14, "2 + 4 + 8 distinct compositions");
    Program hatted = hat_rename(Program(meshed), "p");
    Database hatted_db = hat_rename(bundle.database, "p");
    PreservationReport report =
        check_equivalence(bundle.program, bundle.database, hatted, hatted_db, instances,
                          [](const Atom& fact) { return hat_rename(fact, "p"); });
    check.expect(report.pass(), "coverage equivalence on all 16 instances");
    check.note(std::to_string(meshed.size()) + " mesh clauses at h_bound 3, exact");
}

void criterion_propositionalization(Check& check) {
    const std::uint64_t seed = 20250809;
    ReductionBundle bundle = build_thm5(refmodels::fig2_formula(), 3);
    const Clause& base = bundle.program.clauses[1];
    std::mt19937_64 rng(seed);

    std::set<std::set<int>> subclauses;
    subclauses.insert({});
    std::set<int> full;
    for (int i = 0; i < static_cast<int>(base.body.size()); ++i) full.insert(i);
    subclauses.insert(full);
    while (subclauses.size() < 24) {
        std::set<int> sample;
        for (int i = 0; i < static_cast<int>(base.body.size()); ++i)
            if (rng() % 3 == 0) sample.insert(i);
        std::set<int> closed;
        for (int index : sample)
            for (int member : support_chain(base, index)) closed.insert(member);
        subclauses.insert(closed);
    }
    check.expect(subclauses.size() >= 20, "at least 20 sampled subclauses");

    std::vector<ExtendedInstance> instances = mapped_instances(bundle, 4);
    for (const std::set<int>& literals : subclauses) {
        if (!dependency_closed(base, literals)) {
            check.expect(false, "sampled subclause is dependency-closed");
            continue;
        }
        Monomial monomial = subclause_to_monomial(base, literals);
        Program direct({subclause(base, literals)});
        for (const ExtendedInstance& inst : instances) {
            PropositionAssignment pa =
                propositionalize(base, bundle.database, bundle.declaration, inst);
            if (monomial_value(monomial, pa) != covers(direct, bundle.database, inst)) {
                check.expect(false, "monomial truth equals direct subclause coverage");
                break;
            }
        }
    }
    check.note("seed " + std::to_string(seed) + ", " + std::to_string(subclauses.size()) +
               " dependency-closed subclauses x 16 instances, exact");
}

void criterion_analyzer(Check& check) {
    // clause depth of the recursive append clause, against the committed trace
    Program append = parse_program(read_fixture("append.pl"));
    DepthReport depth = variable_depths(append.clauses[1]);
    std::istringstream trace(read_fixture("append_depth_trace.txt"));
    std::string line;
    int expectations = 0;
    while (std::getline(trace, line)) {
        if (line.empty() || line[0] == '%') continue;
        std::istringstream fields(line);
        std::string tag;
        fields >> tag;
        if (tag == "var") {
            std::string name;
            int expected;
            fields >> name >> expected;
            check.expect(depth.variable_depth.at(intern(name)) == expected,
                         "depth of " + name + " in the trace fixture");
            ++expectations;
        } else if (tag == "clause_depth") {
            int expected;
            fields >> expected;
            check.expect(depth.clause_depth == expected, "clause depth in the trace fixture");
            ++expectations;
        }
    }
    check.expect(expectations == 7, "trace fixture entries");

    // input/output split, modes, locality
    IoSplit split = io_split(append.clauses[1], 0);
    check.expect(split.inputs == std::set<Symbol>{intern("Xs")}, "io_split inputs");
    check.expect(split.outputs == std::set<Symbol>{intern("X"), intern("Xs1")},
                 "io_split outputs");
    check.expect(io_split(append.clauses[1], 2).outputs.empty(), "recursive literal is closed");
    check.expect(to_string(literal_mode(append.clauses[1], 0)) == "components(+,-,-)",
                 "literal mode");
    Clause trans =
        parse_program("accepting(C) :- bit_1(B), status(C,B,Y), next(Y,C1), accepting(C1).")
            .clauses[0];
    check.expect(locality(trans).locality == 4, "transition block locality");
    check.expect(locality(append.clauses[0]).locality == 0,
                 "append base clause has no free variables");
    check.expect(locality(append.clauses[1]).locality == 3,
                 "append recursive clause chains three free variables");

    // mutation: deleting one guard fact must break preservation
    ReductionBundle corrupted = build_thm5(refmodels::fig2_formula(), 3);
    corrupted.database.erase(parse_atom("true_1(1,1)"));
    PreservationReport broken =
        check_preservation(corrupted, bundle_oracle(corrupted), all_bit_strings(4));
    check.expect(!broken.pass(), "corrupted bundle fails preservation");
    check.expect(!broken.mismatches.empty() && broken.mismatches[0].oracle &&
                     !broken.mismatches[0].covered,
                 "mismatch direction oracle-true/covers-false");
    check.note("trace fixture, analyzer examples, mutation caught");
}

}  // namespace

int main() {
    struct Criterion {
        int id;
        const char* name;
        double budget_seconds;
        std::function<void(Check&)> run;
    };
    const std::vector<Criterion> criteria = {
        {1, "figure-2 end-to-end (thm5, r=3, n=4)", 1.0, criterion_figure2},
        {2, "thm2: trivial-accept and parity machines, n in {2,4}", 10.0, criterion_thm2},
        {3, "thm2-alt: universal branching machine", 1.0, criterion_thm2alt},
        {4, "thm3: one depth-3 clause for the parity machine, n=4", 30.0, criterion_thm3},
        {5, "thm4: parity and pattern automata, strings up to length 6", 10.0, criterion_thm4},
        {6, "thm6: tree program, proofs at depth k+1", 5.0, criterion_thm6},
        {7, "thm7 unrolling is exact at the default bound", 1.0, criterion_unroll},
        {8, "thm7 mesh with hat renaming is exact at h_bound 3", 5.0, criterion_mesh},
        {9, "lemmas 8-9: sampled subclauses equal their monomials", 5.0,
         criterion_propositionalization},
        {10, "analyzer unit suite and mutation check", 1.0, criterion_analyzer},
    };

    bool all_pass = true;
    for (const Criterion& criterion : criteria) {
        Check check;
        auto start = std::chrono::steady_clock::now();
        try {
            criterion.run(check);
        } catch (const std::exception& e) {
            check.expect(false, std::string("exception: ") + e.what());
        }
        double seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        bool within_budget = seconds < criterion.budget_seconds;
        bool pass = check.pass && within_budget;
        all_pass = all_pass && pass;
        std::printf("%s [%2d] %s (%.2fs, budget %.0fs)%s%s\n", pass ? "PASS" : "FAIL",
                    criterion.id, criterion.name, seconds, criterion.budget_seconds,
                    check.detail.tellp() > 0 ? " -- " : "", check.detail.str().c_str());
        if (!within_budget) std::printf("     [%2d] exceeded its runtime budget\n", criterion.id);
        std::fflush(stdout);
    }
    std::printf("%s\n", all_pass ? "ACCEPTANCE: PASS" : "ACCEPTANCE: FAIL");
    return all_pass ? 0 : 1;
}
