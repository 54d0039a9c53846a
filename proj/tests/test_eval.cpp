#include <catch2/catch_amalgamated.hpp>

#include "reclearn/eval.hpp"

#include <algorithm>
#include <random>

#include "reclearn/reductions.hpp"
#include "reclearn/textio.hpp"
#include "helpers.hpp"

using namespace reclearn;

namespace {

Program append_program() { return parse_program(helpers::read_fixture("append.pl")); }
Database append_db() { return parse_database(helpers::read_fixture("append.facts")); }
ExtendedInstance append_pos() { return parse_instance(helpers::read_fixture("append_pos.inst")); }

}  // namespace

TEST_CASE("covers") {
    SECTION("append example") {
        CHECK(covers(append_program(), append_db(), append_pos()));
    }
    SECTION("fact given directly in the database") {
        Database db;
        db.insert(parse_atom("f(a)"));
        CHECK(covers(Program{}, db, ExtendedInstance(parse_atom("f(a)"), {})));
    }
    SECTION("swapped arguments are not derivable") {
        ExtendedInstance neg(parse_atom("append(list3,list12,list123)"),
                             append_pos().description);
        CHECK_FALSE(covers(append_program(), append_db(), neg));
        CHECK_FALSE(helpers::naive_covers(append_program(), append_db(), neg));
    }
}

TEST_CASE("fixpoint") {
    SECTION("empty program returns the inputs") {
        Database db;
        db.insert(parse_atom("p(a)"));
        auto model = fixpoint(Program{}, db, {});
        REQUIRE(model.size() == 1);
        CHECK(model[0] == parse_atom("p(a)"));
    }
    SECTION("one-step consequences over db and description") {
        Program p = parse_program("q(X) :- p(X).");
        Database db;
        db.insert(parse_atom("p(a)"));
        std::vector<Atom> desc{parse_atom("p(b)")};
        auto model = fixpoint(p, db, desc);
        std::vector<std::string> names;
        for (const Atom& a : model) names.push_back(to_string(a));
        std::sort(names.begin(), names.end());
        CHECK(names == std::vector<std::string>{"p(a)", "p(b)", "q(a)", "q(b)"});
    }
    SECTION("theorem 5 bundle excludes the unsatisfied root") {
        ReductionBundle bundle = build_thm5(helpers::fig2_formula(), 3);
        ExtendedInstance inst = map_instance(bundle, "1011");
        auto model = fixpoint(bundle.program, bundle.database, inst.description);
        Atom root = parse_atom("p(1)");
        CHECK(std::find(model.begin(), model.end(), root) == model.end());
    }
    SECTION("implicit equality supports clauses that use it") {
        Program p = parse_program("same(X,Y) :- equal(X,Y).");
        Database db;
        db.insert(parse_atom("p(a)"));
        auto model = fixpoint(p, db, {});
        CHECK(std::count(model.begin(), model.end(), parse_atom("same(a,a)")) == 1);
        // the seeded equality facts themselves are not part of the model
        CHECK(std::count(model.begin(), model.end(), parse_atom("equal(a,a)")) == 0);
    }
}

TEST_CASE("prove_min_depth") {
    SECTION("database facts prove at depth zero") {
        Database db;
        db.insert(parse_atom("f(a)"));
        auto depth = prove_min_depth(append_program(), db, ExtendedInstance(parse_atom("f(a)"), {}), 5);
        REQUIRE(depth.has_value());
        CHECK(*depth == 0);
    }
    SECTION("append proof needs two recursive unrollings and the base clause") {
        auto depth = prove_min_depth(append_program(), append_db(), append_pos(), 10);
        REQUIRE(depth.has_value());
        CHECK(*depth == 3);
        auto brute = helpers::naive_min_depth(append_program(), append_db(), append_pos(), 10);
        REQUIRE(brute.has_value());
        CHECK(*brute == 3);
    }
    SECTION("absent when the cap is too small") {
        CHECK_FALSE(prove_min_depth(append_program(), append_db(), append_pos(), 2).has_value());
        CHECK_FALSE(
            prove_min_depth(append_program(), append_db(),
                            ExtendedInstance(parse_atom("append(a,b,c)"), {}), 50)
                .has_value());
    }
    SECTION("theorem 6 proofs descend the whole tree") {
        ReductionBundle bundle = build_thm6(dnf_pad(helpers::fig2_formula(), 4), 4);
        for (int v = 0; v < 16; ++v) {
            std::string eta = helpers::bits(v, 4);
            ExtendedInstance inst = map_instance(bundle, eta);
            auto depth = prove_min_depth(bundle.program, bundle.database, inst, 12);
            if (dnf_eval(std::get<DnfFormula>(bundle.source), eta)) {
                REQUIRE(depth.has_value());
                CHECK(*depth == 3);
            } else {
                CHECK_FALSE(depth.has_value());
            }
        }
    }
}

TEST_CASE("evaluation properties on random programs") {
    std::mt19937 rng(20250809);
    int checked = 0;
    for (int trial = 0; trial < 80; ++trial) {
        Program program = helpers::random_program(rng);
        Database db = helpers::random_database(rng);
        std::vector<Atom> desc;
        std::size_t desc_count = 1 + rng() % 3;
        for (std::size_t i = 0; i < desc_count; ++i)
            desc.push_back(helpers::random_atom(rng, helpers::RandomSpec{}, true));
        ExtendedInstance inst(helpers::random_atom(rng, helpers::RandomSpec{}, true), desc);

        helpers::NaiveModel oracle = helpers::naive_model(program, db, desc);
        auto model = fixpoint(program, db, desc);

        // same atom sets
        CHECK(model.size() == oracle.model_atoms().size());
        for (const Atom& a : model) CHECK(oracle.contains(a));

        // covers agrees with naive membership and with depth search
        bool covered = covers(program, db, inst);
        CHECK(covered == oracle.contains(inst.fact));

        // agreement: coverage iff a proof within the atom-count cap exists
        std::set<Symbol> constants;
        for (const Atom& a : db.facts()) collect_constants(a, constants);
        for (const Atom& a : desc) collect_constants(a, constants);
        for (const Clause& c : program.clauses) {
            collect_constants(c.head, constants);
            for (const Atom& lit : c.body) collect_constants(lit, constants);
        }
        std::set<std::uint64_t> preds;
        std::size_t cap = 0;
        for (const Clause& c : program.clauses) {
            auto add = [&](const Atom& a) {
                if (preds.insert(pred_key(a)).second) {
                    std::size_t count = 1;
                    for (std::size_t i = 0; i < a.arity(); ++i) count *= constants.size();
                    cap += count;
                }
            };
            add(c.head);
            for (const Atom& lit : c.body) add(lit);
        }
        auto depth = prove_min_depth(program, db, inst, static_cast<int>(cap));
        CHECK(covered == depth.has_value());
        if (depth) {
            auto brute = helpers::naive_min_depth(program, db, inst, static_cast<int>(cap));
            REQUIRE(brute.has_value());
            CHECK(*depth == *brute);
        }

        // monotonicity: growing the database and description never loses coverage
        if (covered) {
            Database bigger = db;
            bigger.insert(helpers::random_atom(rng, helpers::RandomSpec{}, true));
            std::vector<Atom> bigger_desc = desc;
            bigger_desc.push_back(helpers::random_atom(rng, helpers::RandomSpec{}, true));
            CHECK(covers(program, bigger, ExtendedInstance(inst.fact, bigger_desc)));
        }

        // idempotence: running the program over its own model adds nothing
        Database closed;
        for (const Atom& a : model) closed.insert(a);
        CHECK(fixpoint(program, closed, {}).size() == model.size());

        // body order does not change coverage
        Program shuffled = program;
        for (Clause& c : shuffled.clauses)
            std::shuffle(c.body.begin(), c.body.end(), rng);
        CHECK(covers(shuffled, db, inst) == covered);
        ++checked;
    }
    CHECK(checked == 80);
}

TEST_CASE("ordered determinate evaluation") {
    ReductionBundle bundle = build_thm5(helpers::fig2_formula(), 3);
    const Clause& base = bundle.program.clauses[1];

    SECTION("agrees with bottom-up coverage of the base clause alone") {
        for (int v = 0; v < 16; ++v) {
            std::string eta = helpers::bits(v, 4);
            ExtendedInstance inst = map_instance(bundle, eta);
            OrderedEvaluator evaluator(bundle.database, inst.description);
            bool ordered = evaluator.evaluate(base, inst.fact) == OrderedOutcome::Covered;
            Program only_base;
            only_base.clauses.push_back(base);
            CHECK(ordered == covers(only_base, bundle.database, inst));
        }
    }

    SECTION("goal must unify with the head") {
        ExtendedInstance inst = map_instance(bundle, "1001");
        OrderedEvaluator evaluator(bundle.database, inst.description);
        CHECK_THROWS_AS(evaluator.evaluate(base, parse_atom("q(1)")), InputError);
    }

    SECTION("a literal with two extensions raises a determinacy violation") {
        Database db;
        db.insert(parse_atom("edge(a,b)"));
        db.insert(parse_atom("edge(a,c)"));
        db.insert(parse_atom("node(a)"));
        Clause clause = parse_program("path(X) :- edge(X,Y), node(X).").clauses[0];
        OrderedEvaluator evaluator(db, {});
        CHECK_THROWS_AS(evaluator.evaluate(clause, parse_atom("path(a)")),
                        DeterminacyViolation);
    }
}
