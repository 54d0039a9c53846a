#include <catch2/catch_amalgamated.hpp>

#include "reclearn/reductions.hpp"

#include "reclearn/eval.hpp"
#include "reclearn/textio.hpp"
#include "helpers.hpp"

using namespace reclearn;

namespace {

bool preserved(const ReductionBundle& bundle, const std::string& raw) {
    return oracle_verdict(bundle, raw) ==
           covers(bundle.program, bundle.database, map_instance(bundle, raw));
}

}  // namespace

TEST_CASE("theorem 2 construction") {
    DlogTM machine = helpers::parity_tm(4);
    ReductionBundle bundle = build_thm2(machine, 4);
    std::size_t p = config_count(machine, 4);

    SECTION("database holds one constant per configuration plus the accepting fact") {
        CHECK(bundle.database.size() == p + 1);
        CHECK(bundle.database.contains(parse_atom("accepting(c1)")));
        CHECK(bundle.database.contains(parse_atom("con_0(c0)")));
    }
    SECTION("declaration lists both configuration modes and the bit propositions") {
        CHECK(bundle.declaration.size() == 2 * p + 2 * 4);
        CHECK(bundle.declaration.modes.count(make_mode("con_0", "+")) == 1);
        CHECK(bundle.declaration.modes.count(make_mode("con_0", "-")) == 1);
        CHECK(bundle.declaration.modes.count(make_mode("true_3", "")) == 1);
        CHECK(bundle.declaration.max_mode_arity() == 1);
    }
    SECTION("every clause is depth one, linear, closed, and declaration-conformant") {
        for (const Clause& clause : bundle.program.clauses) {
            CHECK(clause.body.size() == 4);
            CHECK(variable_depths(clause).clause_depth == 1);
            CHECK(satisfies_declaration(clause, bundle.declaration));
            CHECK(locality(clause).locality == 2);
        }
        RecursionClass rc = recursion_class(bundle.program);
        CHECK(rc.linear());
        CHECK(rc.closed);
    }
    SECTION("instance mapping produces bit propositions") {
        ExtendedInstance inst = map_instance(bundle, "1010");
        CHECK(to_string(inst.fact) == "accepting(c0)");
        REQUIRE(inst.size() == 4);
        CHECK(to_string(inst.description[0]) == "true_1");
        CHECK(to_string(inst.description[1]) == "false_2");
        CHECK(to_string(inst.description[2]) == "true_3");
        CHECK(to_string(inst.description[3]) == "false_4");
        CHECK_THROWS_AS(map_instance(bundle, "101"), InputError);
    }
    SECTION("membership is preserved exhaustively") {
        for (int v = 0; v < 16; ++v) CHECK(preserved(bundle, helpers::bits(v, 4)));
    }
    SECTION("the trivial machine covers every input") {
        ReductionBundle trivial = build_thm2(helpers::trivial_accept_tm(), 3);
        for (int v = 0; v < 8; ++v) {
            std::string x = helpers::bits(v, 3);
            CHECK(covers(trivial.program, trivial.database, map_instance(trivial, x)));
            CHECK(preserved(trivial, x));
        }
    }
    SECTION("unnormalizable machines are rejected") {
        DlogTM bad = helpers::trivial_accept_tm();
        bad.accept_state = bad.start_state;
        CHECK_THROWS_AS(build_thm2(bad, 4), InputError);
    }
}

TEST_CASE("theorem 2 alternating variant") {
    AltMachine machine = helpers::alt3_machine();
    ReductionBundle bundle = build_thm2_alt(machine);

    SECTION("universal configurations compile to two recursive literals") {
        RecursionClass rc = recursion_class(bundle.program);
        CHECK(rc.max_recursive_literals_per_clause == 2);
        CHECK(rc.closed);
        for (const Clause& clause : bundle.program.clauses)
            CHECK(variable_depths(clause).clause_depth == 1);
    }
    SECTION("membership against the generic evaluator and a hand oracle") {
        for (int v = 0; v < 4; ++v) {
            std::string x = helpers::bits(v, 2);
            CHECK(preserved(bundle, x));
            bool both_branches = x[1] == '1';  // accept branch && existential branch
            CHECK(covers(bundle.program, bundle.database, map_instance(bundle, x)) ==
                  both_branches);
        }
    }
    SECTION("a purely existential machine degenerates to linear clauses") {
        AltMachine chain;
        chain.input_length = 2;
        chain.configs.resize(3);
        chain.configs[0].input_pos = 1;
        chain.configs[0].successors[0] = {};
        chain.configs[0].successors[1] = {2};
        chain.configs[2].input_pos = 2;
        chain.configs[2].successors[0] = {};
        chain.configs[2].successors[1] = {1};
        ReductionBundle linear = build_thm2_alt(chain);
        RecursionClass rc = recursion_class(linear.program);
        CHECK(rc.max_recursive_literals_per_clause == 1);
        for (int v = 0; v < 4; ++v) {
            std::string x = helpers::bits(v, 2);
            CHECK(preserved(linear, x));
            CHECK(covers(linear.program, linear.database, map_instance(linear, x)) == (x == "11"));
        }
    }
}

TEST_CASE("theorem 3 construction") {
    DlogTM machine = helpers::parity_tm(4);
    int n = 4;
    ReductionBundle bundle = build_thm3(machine, n);
    std::size_t p = config_count(machine, n);

    SECTION("database size follows the status/next family formulas") {
        // status: 2p families over p configurations and 2 bit values;
        // next: p families of 2 facts plus the failure family; one base fact
        CHECK(bundle.database.size() == 4 * p * p + 2 * p + 3);
        CHECK(bundle.database.contains(parse_atom("accepting(c1)")));
        CHECK(bundle.database.contains(parse_atom("next_0(active,c0)")));
        CHECK(bundle.database.contains(parse_atom("next_0(inactive,c1)")));
        CHECK(bundle.database.contains(parse_atom("next_fail(active,cfail)")));
    }
    SECTION("the single clause has one block per position, bit, and configuration") {
        REQUIRE(bundle.program.clauses.size() == 1);
        const Clause& clause = bundle.program.clauses[0];
        CHECK(clause.body.size() == 4 * (n * 2 * p));
        RecursionClass rc = recursion_class(bundle.program);
        CHECK(rc.max_recursive_literals_per_clause == std::size_t(n) * 2 * p);
        CHECK(rc.closed);
        CHECK(variable_depths(clause).clause_depth == 3);
        CHECK(locality(clause).locality == 4);
        CHECK(satisfies_declaration(clause, bundle.declaration));
        CHECK(bundle.declaration.max_mode_arity() == 3);
    }
    SECTION("membership is preserved exhaustively") {
        for (int v = 0; v < 16; ++v) CHECK(preserved(bundle, helpers::bits(v, 4)));
    }
}

TEST_CASE("theorem 4 construction") {
    DFA parity = parse_dfa(helpers::read_fixture("parity.dfa"));
    ReductionBundle bundle = build_thm4(parity);
    DFA wrapped = dfa_augment(parity);
    std::size_t states = wrapped.states.size();
    std::size_t symbols = wrapped.alphabet.size();

    SECTION("arc facts cover every family minus the excluded pattern") {
        std::size_t families = states * states * symbols;
        std::size_t per_family = states * states * symbols - (states - 1);
        CHECK(bundle.database.size() == families * per_family + states + 1);
        CHECK(bundle.database.contains(parse_atom("accept(c,nil,q_e,q_f)")));
        CHECK(bundle.database.contains(parse_atom("state(q_r)")));
        // the family arc_even_0_even excludes exactly the pattern (even, 0, t != even)
        CHECK(bundle.database.contains(parse_atom("arc_even_0_even(even,0,even)")));
        CHECK_FALSE(bundle.database.contains(parse_atom("arc_even_0_even(even,0,odd)")));
        CHECK(bundle.database.contains(parse_atom("arc_even_0_even(odd,0,odd)")));
    }
    SECTION("the clause is linear, closed, 3-local, and declaration-conformant") {
        REQUIRE(bundle.program.clauses.size() == 1);
        const Clause& clause = bundle.program.clauses[0];
        CHECK(clause.body.size() == states * symbols + 3);
        RecursionClass rc = recursion_class(bundle.program);
        CHECK(rc.linear());
        CHECK(rc.closed);
        CHECK(locality(clause).locality == 3);
        CHECK(satisfies_declaration(clause, bundle.declaration));
    }
    SECTION("the empty string maps to the marker chain") {
        ExtendedInstance inst = map_instance(bundle, "");
        CHECK(to_string(inst.fact) == "accept(a,bc,q_pre,even)");
        REQUIRE(inst.size() == 2);
        CHECK(to_string(inst.description[0]) == "components(bc,b,c)");
        CHECK(to_string(inst.description[1]) == "components(c,c,nil)");
        CHECK(covers(bundle.program, bundle.database, inst));
    }
    SECTION("membership is preserved for every string up to length six") {
        for (int len = 0; len <= 6; ++len)
            for (int v = 0; v < (1 << len); ++v) CHECK(preserved(bundle, helpers::bits(v, len)));
    }
    SECTION("the three-state pattern automaton is also preserved") {
        ReductionBundle ab = build_thm4(parse_dfa(helpers::read_fixture("ab_star.dfa")));
        for (int len = 0; len <= 5; ++len)
            for (int v = 0; v < (1 << len); ++v) CHECK(preserved(ab, helpers::bits(v, len)));
    }
    SECTION("raw symbols outside the alphabet are rejected") {
        CHECK_THROWS_AS(map_instance(bundle, "10x"), InputError);
    }
}

TEST_CASE("theorem 5 construction") {
    DnfFormula phi = helpers::fig2_formula();
    ReductionBundle bundle = build_thm5(phi, 3);

    SECTION("database: guard families plus the successor chain") {
        CHECK(bundle.database.size() == 2 * 3 * (2 * 3 - 1) + (3 - 1));
        CHECK(bundle.database.contains(parse_atom("true_1(1,1)")));
        CHECK_FALSE(bundle.database.contains(parse_atom("true_1(0,1)")));
        CHECK(bundle.database.contains(parse_atom("true_1(0,2)")));
        CHECK(bundle.database.contains(parse_atom("succ(1,2)")));
        CHECK_FALSE(bundle.database.contains(parse_atom("succ(3,4)")));
    }
    SECTION("the program is the figure's recursive clause plus base clause") {
        REQUIRE(bundle.program.clauses.size() == 2);
        CHECK(to_string(bundle.program.clauses[0]) == "p(Y) :- succ(Y,Z), p(Z).");
        CHECK(to_string(bundle.program.clauses[1]) ==
              "p(Y) :- bit_1(X1), bit_2(X2), bit_3(X3), bit_4(X4), "
              "true_1(X1,Y), false_1(X3,Y), true_1(X4,Y), "
              "false_2(X2,Y), false_2(X3,Y), "
              "true_3(X1,Y), false_3(X4,Y).");
    }
    SECTION("both clauses are depth one and determinate-conformant") {
        for (const Clause& clause : bundle.program.clauses) {
            CHECK(variable_depths(clause).clause_depth == 1);
            CHECK(satisfies_declaration(clause, bundle.declaration));
        }
        RecursionClass rc = recursion_class(bundle.program);
        CHECK(rc.linear());
        CHECK(rc.closed);
    }
    SECTION("instance mapping matches the figure") {
        ExtendedInstance inst = map_instance(bundle, "1011");
        CHECK(print_instance(inst) ==
              "fact: p(1)\ndesc: bit_1(1)\ndesc: bit_2(0)\ndesc: bit_3(1)\ndesc: bit_4(1)\n");
    }
    SECTION("membership is preserved on all sixteen assignments") {
        for (int v = 0; v < 16; ++v) CHECK(preserved(bundle, helpers::bits(v, 4)));
        CHECK_FALSE(covers(bundle.program, bundle.database, map_instance(bundle, "1011")));
        CHECK(covers(bundle.program, bundle.database, map_instance(bundle, "1001")));
    }
    SECTION("unpadded formulas are rejected") {
        CHECK_THROWS_AS(build_thm5(phi, 4), InputError);
        CHECK(build_thm5(dnf_pad(phi, 4), 4).r == 4);
    }
}

TEST_CASE("theorem 6 construction") {
    DnfFormula phi = dnf_pad(helpers::fig2_formula(), 4);
    ReductionBundle bundle = build_thm6(phi, 4);

    SECTION("database: guards extended to interior nodes, arcs, and leaf base facts") {
        // 2r guard families of (2r - 1) + 2(r - 1) facts, 2(2r - 1) arcs, 2r leaves
        CHECK(bundle.database.size() == 2 * 4 * (2 * 4 - 1 + 2 * (4 - 1)) + 2 * (2 * 4 - 1) + 2 * 4);
        CHECK(bundle.database.contains(parse_atom("leftson(root,nl)")));
        CHECK(bundle.database.contains(parse_atom("rightson(nr,4)")));
        CHECK(bundle.database.contains(parse_atom("leftson(1,w1)")));
        CHECK(bundle.database.contains(parse_atom("p(w8)")));
        // guards pass unconditionally on interior labels, conditionally on 1..r
        CHECK(bundle.database.contains(parse_atom("true_2(0,root)")));
        CHECK(bundle.database.contains(parse_atom("true_2(0,nl)")));
        CHECK_FALSE(bundle.database.contains(parse_atom("true_2(0,2)")));
        CHECK_FALSE(bundle.database.contains(parse_atom("true_2(0,w1)")));
    }
    SECTION("two linear closed recursive depth-one clauses") {
        REQUIRE(bundle.program.clauses.size() == 2);
        RecursionClass rc = recursion_class(bundle.program);
        CHECK(rc.recursive_clause_count == 2);
        CHECK(rc.linear());
        CHECK(rc.closed);
        for (const Clause& clause : bundle.program.clauses) {
            CHECK(variable_depths(clause).clause_depth == 1);
            CHECK(satisfies_declaration(clause, bundle.declaration));
        }
        CHECK(symbol_name(bundle.program.clauses[0].body.back().predicate) == "p");
        CHECK(symbol_name(bundle.program.clauses[0].body[bundle.program.clauses[0].body.size() - 2]
                              .predicate) == "leftson");
    }
    SECTION("instances query the root") {
        ExtendedInstance inst = map_instance(bundle, "1001");
        CHECK(to_string(inst.fact) == "p(root)");
        CHECK(inst.size() == 4);
    }
    SECTION("membership is preserved on all sixteen assignments") {
        for (int v = 0; v < 16; ++v) CHECK(preserved(bundle, helpers::bits(v, 4)));
    }
    SECTION("term counts that are not powers of two are rejected") {
        CHECK_THROWS_AS(build_thm6(dnf_pad(helpers::fig2_formula(), 3), 3), InputError);
    }
    SECTION("the one-term degenerate tree still works") {
        DnfFormula single = parse_dnf("dnf n=2\nterm: v1 !v2\n");
        ReductionBundle tiny = build_thm6(single, 1);
        for (int v = 0; v < 4; ++v) CHECK(preserved(tiny, helpers::bits(v, 2)));
    }
}

TEST_CASE("oracle and mapping dispatch check their inputs") {
    ReductionBundle bundle = build_thm5(helpers::fig2_formula(), 3);
    CHECK_THROWS_AS(map_instance(bundle, "10x1"), InputError);
    CHECK_THROWS_AS(oracle_verdict(bundle, "10"), InputError);
}
