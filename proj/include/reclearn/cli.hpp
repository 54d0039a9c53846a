#pragma once

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "reclearn/bundle_io.hpp"
#include "reclearn/compose.hpp"
#include "reclearn/eval.hpp"
#include "reclearn/reductions.hpp"
#include "reclearn/textio.hpp"
#include "reclearn/verify.hpp"

namespace reclearn::cli {

// Exit codes: 0 = pass, 1 = verification failure, 2 = input or format error.
inline constexpr int kExitPass = 0;
inline constexpr int kExitVerificationFailure = 1;
inline constexpr int kExitInputError = 2;

namespace detail {

inline std::string slurp(const std::string& path) {
    return reclearn::detail::read_file(path);
}

inline void write_or_print(const std::optional<std::string>& path, const std::string& content,
                           std::ostream& out) {
    if (path)
        reclearn::detail::write_file(*path, content);
    else
        out << content;
}

struct VerifyOptions {
    std::string bundle_dir;
    bool exhaustive = false;
    int max_len = 6;
    std::uint64_t seed = 1;
    std::size_t samples = 512;
    std::optional<std::string> out_dir;
};

inline std::vector<std::string> verify_inputs(const ReductionBundle& bundle,
                                              const VerifyOptions& opts, bool& sampled) {
    sampled = false;
    switch (raw_kind_of(bundle.kind)) {
        case RawKind::BitString:
        case RawKind::Assignment:
            if (bundle.n <= 16 || opts.exhaustive) {
                if (bundle.n > 24) throw InputError("input length too large for exhaustive mode");
                return all_bit_strings(bundle.n);
            }
            sampled = true;
            return sample_bit_strings(bundle.n, opts.samples, opts.seed);
        case RawKind::AlphabetString: {
            const DFA& m = std::get<DFA>(bundle.source);
            double total = 0;
            double level = 1;
            for (int len = 0; len <= opts.max_len; ++len) {
                total += level;
                level *= static_cast<double>(m.alphabet.size());
            }
            if (total <= 200000 || opts.exhaustive)
                return all_strings_up_to(m.alphabet, opts.max_len);
            sampled = true;
            return sample_strings(m.alphabet, 0, opts.max_len, opts.samples, opts.seed);
        }
    }
    throw InputError("unknown bundle kind");
}

inline int run_verify(const VerifyOptions& opts, std::ostream& out) {
    ReductionBundle bundle = read_bundle(opts.bundle_dir);
    bool sampled = false;
    std::vector<std::string> inputs = verify_inputs(bundle, opts, sampled);
    PreservationReport preservation =
        check_preservation(bundle, bundle_oracle(bundle), inputs,
                           sampled ? std::optional<std::uint64_t>(opts.seed) : std::nullopt);
    preservation.params = sampled ? "sampled samples=" + std::to_string(opts.samples)
                                  : "exhaustive";
    if (raw_kind_of(bundle.kind) == RawKind::AlphabetString)
        preservation.params += " max_len=" + std::to_string(opts.max_len);
    std::vector<ExtendedInstance> samples;
    for (std::size_t i = 0; i < inputs.size() && samples.size() < 4; i += (inputs.size() / 4) + 1)
        samples.push_back(map_instance(bundle, inputs[i]));
    ConformanceReport conformance =
        check_conformance(bundle, default_expectations(bundle.kind), samples);
    out << to_text(preservation) << to_text(conformance);
    if (opts.out_dir) {
        std::filesystem::create_directories(*opts.out_dir);
        reclearn::detail::write_file(std::filesystem::path(*opts.out_dir) / "preservation.txt",
                                     to_text(preservation));
        reclearn::detail::write_file(std::filesystem::path(*opts.out_dir) / "conformance.txt",
                                     to_text(conformance));
    }
    return preservation.pass() && conformance.pass() ? kExitPass : kExitVerificationFailure;
}

// Splits a two-clause program into (recursive, base).
inline std::pair<Clause, Clause> recursive_and_base(const Program& program) {
    if (program.clauses.size() != 2)
        throw InputError("expected a two-clause program (one recursive clause, one base clause)");
    auto recursive_count = [](const Clause& c) {
        std::size_t k = 0;
        for (const Atom& lit : c.body)
            if (is_recursive_literal(c, lit)) ++k;
        return k;
    };
    std::size_t first = recursive_count(program.clauses[0]);
    std::size_t second = recursive_count(program.clauses[1]);
    if (first >= 1 && second == 0) return {program.clauses[0], program.clauses[1]};
    if (second >= 1 && first == 0) return {program.clauses[1], program.clauses[0]};
    throw InputError("expected exactly one recursive and one nonrecursive clause");
}

}  // namespace detail

inline int run(const std::vector<std::string>& arguments, std::ostream& out, std::ostream& err) {
    CLI::App app{"workbench for restricted recursive logic programs"};
    app.require_subcommand(1);

    // gen
    auto* gen = app.add_subcommand("gen", "compile a source model into a bundle directory");
    gen->require_subcommand(1);
    std::string tm_path, alt_path, dfa_path, dnf_path, out_dir;
    int gen_n = 0, gen_r = 0;
    auto add_out = [&](CLI::App* cmd) {
        cmd->add_option("--out", out_dir, "bundle output directory")->required();
    };
    auto* gen_thm2 = gen->add_subcommand("thm2", "log-space machine to linear recursive clauses");
    gen_thm2->add_option("--tm", tm_path, "machine file")->required();
    gen_thm2->add_option("--n", gen_n, "input length")->required();
    add_out(gen_thm2);
    auto* gen_thm2alt = gen->add_subcommand("thm2alt", "alternating machine to 2-ary recursion");
    gen_thm2alt->add_option("--alt", alt_path, "alternating machine file")->required();
    add_out(gen_thm2alt);
    auto* gen_thm3 = gen->add_subcommand("thm3", "log-space machine to one depth-3 clause");
    gen_thm3->add_option("--tm", tm_path, "machine file")->required();
    gen_thm3->add_option("--n", gen_n, "input length")->required();
    add_out(gen_thm3);
    auto* gen_thm4 = gen->add_subcommand("thm4", "automaton to one 3-local recursive clause");
    gen_thm4->add_option("--dfa", dfa_path, "automaton file")->required();
    add_out(gen_thm4);
    auto* gen_thm5 = gen->add_subcommand("thm5", "DNF to recursive clause plus base clause");
    gen_thm5->add_option("--dnf", dnf_path, "formula file")->required();
    gen_thm5->add_option("--r", gen_r, "term count")->required();
    add_out(gen_thm5);
    auto* gen_thm6 = gen->add_subcommand("thm6", "DNF to two recursive clauses over a tree");
    gen_thm6->add_option("--dnf", dnf_path, "formula file")->required();
    gen_thm6->add_option("--r", gen_r, "term count (power of two)")->required();
    add_out(gen_thm6);

    // map
    auto* map_cmd = app.add_subcommand("map", "map a raw input to an extended instance");
    std::string map_bundle, map_input;
    std::optional<std::string> map_out;
    map_cmd->add_option("--bundle", map_bundle, "bundle directory")->required();
    map_cmd->add_option("--input", map_input, "raw input string")->required();
    map_cmd->add_option("--out", map_out, "instance output file");

    // eval
    auto* eval_cmd = app.add_subcommand("eval", "decide coverage of an instance");
    std::string eval_program, eval_db, eval_instance;
    std::optional<int> eval_depth;
    eval_cmd->add_option("--program", eval_program, "program file")->required();
    eval_cmd->add_option("--database", eval_db, "database file")->required();
    eval_cmd->add_option("--instance", eval_instance, "instance file")->required();
    eval_cmd->add_option("--max-depth", eval_depth, "also report the minimum proof depth");

    // analyze
    auto* analyze_cmd = app.add_subcommand("analyze", "syntactic analysis of a program");
    std::string analyze_program;
    std::optional<std::string> analyze_decl;
    analyze_cmd->add_option("--program", analyze_program, "program file")->required();
    analyze_cmd->add_option("--declaration", analyze_decl, "declaration file");

    // verify
    auto* verify_cmd = app.add_subcommand("verify", "preservation and conformance checks");
    detail::VerifyOptions vopts;
    verify_cmd->add_option("--bundle", vopts.bundle_dir, "bundle directory")->required();
    verify_cmd->add_flag("--exhaustive", vopts.exhaustive, "force exhaustive enumeration");
    verify_cmd->add_option("--max-len", vopts.max_len, "maximum string length (default 6)");
    verify_cmd->add_option("--seed", vopts.seed, "seed for sampled enumeration");
    verify_cmd->add_option("--samples", vopts.samples, "sample count for sampled enumeration");
    verify_cmd->add_option("--out", vopts.out_dir, "directory for report files");

    // compose
    auto* compose_cmd = app.add_subcommand("compose", "clause composition operations");
    compose_cmd->require_subcommand(1);
    std::string comp_program, comp_db, comp_decl, comp_pred;
    std::vector<std::string> comp_instances;
    std::optional<std::string> comp_out, comp_out_db;
    int comp_hmax = 1;
    auto* comp_unroll = compose_cmd->add_subcommand("unroll", "unroll recursive against base");
    comp_unroll->add_option("--program", comp_program, "two-clause program file")->required();
    comp_unroll->add_option("--h-max", comp_hmax, "unrolling bound")->required();
    comp_unroll->add_option("--out", comp_out, "output program file");
    auto* comp_mesh = compose_cmd->add_subcommand("mesh", "compose two recursive clauses");
    comp_mesh->add_option("--program", comp_program, "two-recursive-clause program file")
        ->required();
    comp_mesh->add_option("--h-max", comp_hmax, "composition length bound")->required();
    comp_mesh->add_option("--out", comp_out, "output program file");
    auto* comp_hat = compose_cmd->add_subcommand("hat", "rename a predicate everywhere");
    comp_hat->add_option("--predicate", comp_pred, "predicate to rename")->required();
    comp_hat->add_option("--program", comp_program, "program file");
    comp_hat->add_option("--database", comp_db, "database file");
    comp_hat->add_option("--out", comp_out, "output program file");
    comp_hat->add_option("--out-database", comp_out_db, "output database file");
    auto* comp_prop = compose_cmd->add_subcommand("prop", "chain propositions of a clause");
    comp_prop->add_option("--program", comp_program, "single-clause program file")->required();
    comp_prop->add_option("--database", comp_db, "database file")->required();
    comp_prop->add_option("--declaration", comp_decl, "declaration file")->required();
    comp_prop->add_option("--instance", comp_instances, "instance file")->required();
    auto* comp_dnf = compose_cmd->add_subcommand("dnf", "emulate nonrecursive clauses by a DNF");
    comp_dnf->add_option("--program", comp_program, "nonrecursive program file")->required();
    comp_dnf->add_option("--database", comp_db, "database file")->required();
    comp_dnf->add_option("--declaration", comp_decl, "declaration file")->required();
    comp_dnf->add_option("--instance", comp_instances, "instance files (repeatable)")->required();
    comp_dnf->add_option("--out", comp_out, "output directory")->required();

    try {
        std::vector<std::string> reversed(arguments.rbegin(), arguments.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kExitPass;
    } catch (const CLI::ParseError& e) {
        err << e.what() << "\n";
        return kExitInputError;
    }

    try {
        if (gen->parsed()) {
            ReductionBundle bundle;
            if (gen_thm2->parsed())
                bundle = build_thm2(parse_tm(detail::slurp(tm_path)), gen_n);
            else if (gen_thm2alt->parsed())
                bundle = build_thm2_alt(parse_alt(detail::slurp(alt_path)));
            else if (gen_thm3->parsed())
                bundle = build_thm3(parse_tm(detail::slurp(tm_path)), gen_n);
            else if (gen_thm4->parsed())
                bundle = build_thm4(parse_dfa(detail::slurp(dfa_path)));
            else if (gen_thm5->parsed())
                bundle = build_thm5(dnf_pad(parse_dnf(detail::slurp(dnf_path)), gen_r), gen_r);
            else
                bundle = build_thm6(dnf_pad(parse_dnf(detail::slurp(dnf_path)), gen_r), gen_r);
            write_bundle(bundle, out_dir);
            out << "bundle: " << bundle.id() << "\n"
                << "clauses: " << bundle.program.clauses.size() << "\n"
                << "body_literals: " << bundle.program.body_literal_count() << "\n"
                << "database_facts: " << bundle.database.size() << "\n"
                << "declaration_modes: " << bundle.declaration.size() << "\n";
            return kExitPass;
        }
        if (map_cmd->parsed()) {
            ReductionBundle bundle = read_bundle(map_bundle);
            ExtendedInstance inst = map_instance(bundle, map_input);
            detail::write_or_print(map_out, print_instance(inst), out);
            return kExitPass;
        }
        if (eval_cmd->parsed()) {
            Program program = parse_program(detail::slurp(eval_program));
            Database db = parse_database(detail::slurp(eval_db));
            ExtendedInstance inst = parse_instance(detail::slurp(eval_instance));
            bool covered = covers(program, db, inst);
            out << "covered: " << (covered ? "true" : "false") << "\n";
            if (eval_depth) {
                auto depth = prove_min_depth(program, db, inst, *eval_depth);
                if (depth)
                    out << "min_depth: " << *depth << "\n";
                else
                    out << "min_depth: none within " << *eval_depth << "\n";
            }
            return kExitPass;
        }
        if (analyze_cmd->parsed()) {
            Program program = parse_program(detail::slurp(analyze_program));
            std::optional<Declaration> dec;
            if (analyze_decl) dec = parse_declaration(detail::slurp(*analyze_decl));
            for (std::size_t i = 0; i < program.clauses.size(); ++i) {
                const Clause& clause = program.clauses[i];
                DepthReport depth = variable_depths(clause);
                LocalityReport local = locality(clause);
                ClauseRecursion stats = clause_recursion(clause);
                out << "clause " << i << ": depth=" << depth.clause_depth
                    << " recursive_literals=" << stats.recursive_literals
                    << " closed=" << (stats.closed ? "true" : "false")
                    << " locality=" << local.locality;
                if (dec)
                    out << " declaration="
                        << (satisfies_declaration(clause, *dec) ? "ok" : "violated");
                out << "\n";
                out << "  modes:";
                for (const ModeString& mode : literal_modes(clause))
                    out << " " << to_string(mode);
                out << "\n";
            }
            RecursionClass rc = recursion_class(program);
            out << "program: recursive_clauses=" << rc.recursive_clause_count
                << " base_clauses=" << rc.base_clause_count
                << " max_recursive_literals=" << rc.max_recursive_literals_per_clause
                << " linear=" << (rc.linear() ? "true" : "false")
                << " closed=" << (rc.closed ? "true" : "false") << "\n";
            return kExitPass;
        }
        if (verify_cmd->parsed()) return detail::run_verify(vopts, out);
        if (compose_cmd->parsed()) {
            if (comp_unroll->parsed()) {
                Program program = parse_program(detail::slurp(comp_program));
                auto [recursive, base] = detail::recursive_and_base(program);
                Program unrolled = unroll(recursive, base, comp_hmax);
                detail::write_or_print(comp_out, print_program(unrolled), out);
                return kExitPass;
            }
            if (comp_mesh->parsed()) {
                Program program = parse_program(detail::slurp(comp_program));
                if (program.clauses.size() != 2)
                    throw InputError("mesh expects a program of two recursive clauses");
                std::vector<Clause> meshed =
                    mesh(program.clauses[0], program.clauses[1], comp_hmax);
                detail::write_or_print(comp_out, print_program(Program(std::move(meshed))), out);
                return kExitPass;
            }
            if (comp_hat->parsed()) {
                if (comp_program.empty() && comp_db.empty())
                    throw InputError("hat needs a program and/or a database");
                if (!comp_program.empty()) {
                    Program program = hat_rename(parse_program(detail::slurp(comp_program)),
                                                 comp_pred);
                    detail::write_or_print(comp_out, print_program(program), out);
                }
                if (!comp_db.empty()) {
                    Database db = hat_rename(parse_database(detail::slurp(comp_db)), comp_pred);
                    detail::write_or_print(comp_out_db, print_database(db), out);
                }
                return kExitPass;
            }
            if (comp_prop->parsed()) {
                Program program = parse_program(detail::slurp(comp_program));
                if (program.clauses.size() != 1)
                    throw InputError("prop expects a single-clause program");
                Database db = parse_database(detail::slurp(comp_db));
                Declaration dec = parse_declaration(detail::slurp(comp_decl));
                for (const std::string& path : comp_instances) {
                    ExtendedInstance inst = parse_instance(detail::slurp(path));
                    PropositionAssignment pa =
                        propositionalize(program.clauses[0], db, dec, inst);
                    out << "instance: " << to_string(inst.fact) << "\n";
                    for (std::size_t k = 0; k < pa.propositions.size(); ++k) {
                        out << "  chain_" << pa.propositions[k].literal_index << " = "
                            << (pa.values[k] ? "true" : "false") << " (literals";
                        for (int idx : pa.propositions[k].chain) out << " " << idx;
                        out << ")\n";
                    }
                }
                return kExitPass;
            }
            // compose dnf
            Program program = parse_program(detail::slurp(comp_program));
            Database db = parse_database(detail::slurp(comp_db));
            Declaration dec = parse_declaration(detail::slurp(comp_decl));
            std::vector<ExtendedInstance> instances;
            for (const std::string& path : comp_instances)
                instances.push_back(parse_instance(detail::slurp(path)));
            DnfOverChains result = program_to_dnf(program.clauses, db, dec, instances);
            DnfFormula formula;
            formula.variable_count = static_cast<int>(result.propositions.size());
            for (const auto& monomial : result.monomials) {
                std::vector<DnfFormula::Literal> term;
                for (int index : monomial) term.push_back({index + 1, false});
                formula.terms.push_back(std::move(term));
            }
            std::filesystem::create_directories(*comp_out);
            reclearn::detail::write_file(std::filesystem::path(*comp_out) / "chains.dnf",
                                         print_dnf(formula));
            std::string sidecar;
            for (std::size_t k = 0; k < result.propositions.size(); ++k) {
                const auto& prop = result.propositions[k];
                sidecar += "v" + std::to_string(k + 1) + " " + prop.id + " literals=";
                for (std::size_t j = 0; j < prop.chain.size(); ++j)
                    sidecar += (j ? "," : "") + std::to_string(prop.chain[j]);
                sidecar += "\n";
            }
            reclearn::detail::write_file(std::filesystem::path(*comp_out) / "chains.map", sidecar);
            for (std::size_t i = 0; i < instances.size(); ++i)
                out << "instance " << to_string(instances[i].fact) << ": dnf="
                    << (result.truth[i] ? "true" : "false") << "\n";
            return kExitPass;
        }
        err << "no subcommand given\n";
        return kExitInputError;
    } catch (const InputError& e) {
        err << "error: " << e.what() << "\n";
        return kExitInputError;
    } catch (const DeterminacyViolation& e) {
        err << "determinacy violation: " << e.what() << "\n";
        return kExitVerificationFailure;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitInputError;
    }
}

}  // namespace reclearn::cli
