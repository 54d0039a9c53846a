#pragma once

#include <filesystem>
#include <fstream>
#include <string>

#include <json.hpp>

#include "reclearn/errors.hpp"
#include "reclearn/reductions.hpp"
#include "reclearn/textio.hpp"

namespace reclearn {

// A bundle directory holds four files: the program, the background
// database, the declaration, and a parameters file carrying the build
// parameters plus the source model (in its own text format) so the bundle
// is self-contained for mapping and verification.
inline const char* kBundleProgramFile = "program.pl";
inline const char* kBundleDatabaseFile = "database.facts";
inline const char* kBundleDeclarationFile = "declaration.dec";
inline const char* kBundleParamsFile = "params.json";

namespace detail {

inline void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot write " + path.string());
    out << content;
}

inline std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot read " + path.string());
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

inline std::string source_text(const ReductionBundle& bundle) {
    switch (bundle.kind) {
        case BundleKind::Thm2:
        case BundleKind::Thm3: return print_tm(std::get<DlogTM>(bundle.source));
        case BundleKind::Thm2Alt: return print_alt(std::get<AltMachine>(bundle.source));
        case BundleKind::Thm4: return print_dfa(std::get<DFA>(bundle.source));
        case BundleKind::Thm5:
        case BundleKind::Thm6: return print_dnf(std::get<DnfFormula>(bundle.source));
    }
    throw InputError("unknown bundle kind");
}

}  // namespace detail

inline void write_bundle(const ReductionBundle& bundle, const std::filesystem::path& directory) {
    std::filesystem::create_directories(directory);
    detail::write_file(directory / kBundleProgramFile, print_program(bundle.program));
    detail::write_file(directory / kBundleDatabaseFile, print_database(bundle.database));
    detail::write_file(directory / kBundleDeclarationFile, print_declaration(bundle.declaration));
    nlohmann::json params;
    params["kind"] = bundle_kind_name(bundle.kind);
    params["n"] = bundle.n;
    params["r"] = bundle.r;
    params["source"] = detail::source_text(bundle);
    detail::write_file(directory / kBundleParamsFile, params.dump(2) + "\n");
}

inline ReductionBundle read_bundle(const std::filesystem::path& directory) {
    nlohmann::json params;
    try {
        params = nlohmann::json::parse(detail::read_file(directory / kBundleParamsFile));
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("malformed parameters file: ") + e.what());
    }
    std::string kind = params.value("kind", "");
    int n = params.value("n", 0);
    int r = params.value("r", 0);
    std::string source = params.value("source", "");

    ReductionBundle bundle;
    if (kind == "thm2")
        bundle = build_thm2(parse_tm(source), n);
    else if (kind == "thm2alt")
        bundle = build_thm2_alt(parse_alt(source));
    else if (kind == "thm3")
        bundle = build_thm3(parse_tm(source), n);
    else if (kind == "thm4")
        bundle = build_thm4(parse_dfa(source));
    else if (kind == "thm5")
        bundle = build_thm5(parse_dnf(source), r);
    else if (kind == "thm6")
        bundle = build_thm6(parse_dnf(source), r);
    else
        throw InputError("unknown bundle kind '" + kind + "'");

    // The directory contents are authoritative: a bundle edited on disk
    // (for mutation testing, say) must verify as edited.
    bundle.program = parse_program(detail::read_file(directory / kBundleProgramFile));
    bundle.database = parse_database(detail::read_file(directory / kBundleDatabaseFile));
    bundle.declaration = parse_declaration(detail::read_file(directory / kBundleDeclarationFile));
    return bundle;
}

}  // namespace reclearn
