#pragma once

#include <borel/decomposition.hpp>
#include <borel/envelope.hpp>
#include <borel/errors.hpp>
#include <borel/field.hpp>
#include <borel/flag.hpp>
#include <borel/json_io.hpp>
#include <borel/linalg.hpp>
#include <borel/permutation.hpp>
#include <borel/verify.hpp>

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace borel::cli {

/// Exit codes shared by every subcommand.
enum Exit : int { ok = 0, property_false = 1, input_error = 2 };

inline constexpr const char* schema_help = R"(JSON formats:
  matrix       {"field": "Q" | {"Fp": 5}, "rows": [["1", "-2/3"], ["0", "1"]]}
               rationals as "num/den" strings (integers also accepted),
               F_p entries as integers in [0, p); "field" may be omitted
               when --field is given, and must agree with it otherwise
  flag         a matrix whose first i columns span the i-th step
  weyl set     [[1, 2, 3], [2, 1, 3]]  (permutations as 1-based images)
  permutation  on the command line: "2,1,3", "[2,1,3]" or "2 1 3"

Exit codes: 0 success, 1 a checked property is false, 2 input or usage error.
A path of "-" reads standard input.)";

namespace detail {

using json = nlohmann::json;

inline json read_json(const std::string& path)
{
    std::string text;
    if (path == "-") {
        text.assign(std::istreambuf_iterator<char>(std::cin), {});
    } else {
        std::ifstream in(path);
        if (!in)
            throw InvalidInput("cannot open '" + path + "'");
        text.assign(std::istreambuf_iterator<char>(in), {});
    }
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw InvalidInput("malformed JSON in '" + path + "': " + e.what());
    }
}

inline std::optional<FieldSpec> field_option(const std::string& text)
{
    if (text.empty())
        return std::nullopt;
    return FieldSpec::parse(text);
}

inline std::vector<Permutation> read_weyl_set(const std::string& path)
{
    json j = read_json(path);
    if (j.is_object() && j.contains("weyl_set"))
        j = j["weyl_set"];
    if (!j.is_array())
        throw InvalidInput("weyl set must be a JSON array of permutations");
    std::vector<Permutation> out;
    for (const auto& w : j)
        out.push_back(io::permutation_from_json(w));
    return out;
}

inline void emit(std::ostream& out, const json& j) { out << j.dump(2) << '\n'; }

struct EnvelopeArgs {
    std::string matrix, field, weyl_set;
    bool restricted = false;
};

inline int cmd_envelope(const EnvelopeArgs& a, std::ostream& out)
{
    if (a.restricted && !a.weyl_set.empty())
        throw InvalidInput("--restricted and --weyl-set are mutually exclusive");
    const json doc = read_json(a.matrix);
    const FieldSpec spec = io::resolve_field(doc, field_option(a.field));
    return dispatch(spec, [&](const auto& f) {
        const auto g = io::matrix_from_json(f, doc);
        WeylSelection sel = WeylSelection::full();
        if (a.restricted)
            sel = WeylSelection::restricted();
        else if (!a.weyl_set.empty())
            sel = WeylSelection::of(read_weyl_set(a.weyl_set));
        const auto cert = envelope_certificate(g, sel);
        if (!verify_certificate(cert))
            throw ContractViolation("certificate failed re-verification");
        emit(out, io::certificate_to_json(cert));
        return cert.spans ? Exit::ok : Exit::property_false;
    });
}

struct DecompArgs {
    std::string matrix, field, kind = "bruhat", normalize = "upper";
};

inline int cmd_decomp(const DecompArgs& a, std::ostream& out)
{
    const json doc = read_json(a.matrix);
    const FieldSpec spec = io::resolve_field(doc, field_option(a.field));
    return dispatch(spec, [&](const auto& f) {
        const auto m = io::matrix_from_json(f, doc);
        if (a.kind == "bruhat") {
            const auto b = bruhat_decompose(m);
            if (!(b.recompose() == m))
                throw ContractViolation("Bruhat factors do not recompose the input");
            emit(out, io::bruhat_to_json(b));
        } else {
            const auto norm =
                a.normalize == "lower" ? UlpNormalization::UnipotentLower : UlpNormalization::UnipotentUpper;
            const auto d = ulp_decompose(m, norm);
            if (!d.well_formed() || !(d.recompose() == m))
                throw ContractViolation("ULP factors do not recompose the input");
            emit(out, io::ulp_to_json(d));
        }
        return Exit::ok;
    });
}

struct RelposArgs {
    std::string flag1, flag2, field;
};

inline int cmd_relpos(const RelposArgs& a, std::ostream& out)
{
    const json d1 = read_json(a.flag1);
    const json d2 = read_json(a.flag2);
    const auto requested = field_option(a.field);
    const FieldSpec s1 = io::resolve_field(d1, requested);
    const FieldSpec s2 = io::resolve_field(d2, requested);
    if (!(s1 == s2))
        throw InvalidInput("flags over different fields: " + s1.to_string() + " and " + s2.to_string());
    return dispatch(s1, [&](const auto& f) {
        using Fld = std::decay_t<decltype(f)>;
        const Flag<Fld> f1(io::matrix_from_json(f, d1));
        const Flag<Fld> f2(io::matrix_from_json(f, d2));
        const auto w = relative_position(f1, f2);
        emit(out, json{{"w", io::permutation_to_json(w)}, {"length", w.length()}});
        return Exit::ok;
    });
}

struct Theorem26Args {
    std::string matrix, field;
};

inline int cmd_theorem26(const Theorem26Args& a, std::ostream& out)
{
    const json doc = read_json(a.matrix);
    const FieldSpec spec = io::resolve_field(doc, field_option(a.field));
    return dispatch(spec, [&](const auto& f) {
        const auto [holds, ledger] = theorem26_check(io::matrix_from_json(f, doc));
        emit(out, json{{"holds", holds}, {"ledger", io::ledger_to_json(ledger)}});
        return holds ? Exit::ok : Exit::property_false;
    });
}

struct VerifyArgs {
    std::uint64_t seed = 1;
    std::size_t trials = 20;
    std::string fields = "q,fp:2,fp:3,fp:5,fp:101";
    std::string n = "1..4";
    std::string suite = "all";
    std::string mode = "full";
    std::size_t threads = 1;
};

inline verify::RunConfig run_config(const VerifyArgs& a)
{
    verify::RunConfig c;
    c.seed = a.seed;
    c.trials = a.trials;
    c.fields = verify::parse_field_list(a.fields);
    std::tie(c.n_min, c.n_max) = verify::parse_n_range(a.n);
    c.suite = verify::parse_suite(a.suite);
    if (a.mode == "full")
        c.mode = EnvelopeMode::Full;
    else if (a.mode == "restricted")
        c.mode = EnvelopeMode::Restricted;
    else
        throw InvalidInput("--mode must be full or restricted");
    c.threads = a.threads;
    return c;
}

inline int cmd_verify(const VerifyArgs& a, std::ostream& out)
{
    const auto h = verify::run(run_config(a));
    emit(out, h.report());
    return h.ok() ? Exit::ok : Exit::property_false;
}

struct WeylArgs {
    std::string op;
    std::vector<std::string> operands;
};

inline std::size_t parse_degree(const std::string& s)
{
    if (s.empty() || s.size() > 3 || s.find_first_not_of("0123456789") != std::string::npos)
        throw InvalidInput("expected a degree n, got '" + s + "'");
    const auto n = static_cast<std::size_t>(std::stoul(s));
    if (n == 0)
        throw InvalidInput("degree must be positive");
    return n;
}

inline int cmd_weyl(const WeylArgs& a, std::ostream& out)
{
    auto need = [&](std::size_t k) {
        if (a.operands.size() != k)
            throw InvalidInput("weyl " + a.op + " takes " + std::to_string(k) + " operand(s)");
    };
    auto perm = [&](std::size_t i) { return io::parse_permutation(a.operands[i]); };
    auto perms = [](const std::vector<Permutation>& ws) {
        json arr = json::array();
        for (const auto& w : ws)
            arr.push_back(io::permutation_to_json(w));
        return arr;
    };
    json result;
    if (a.op == "leq") {
        need(2);
        result = json{{"leq", bruhat_leq(perm(0), perm(1))}};
    } else if (a.op == "length") {
        need(1);
        result = json{{"length", perm(0).length()}};
    } else if (a.op == "compose") {
        need(2);
        result = json{{"w", io::permutation_to_json(compose(perm(0), perm(1)))}};
    } else if (a.op == "inverse") {
        need(1);
        result = json{{"w", io::permutation_to_json(perm(0).inverse())}};
    } else if (a.op == "longest") {
        need(1);
        const auto w0 = longest_element(parse_degree(a.operands[0]));
        result = json{{"w", io::permutation_to_json(w0)}, {"length", w0.length()}};
    } else if (a.op == "tset") {
        need(1);
        result = json{{"tset", perms(transposition_set(parse_degree(a.operands[0])))}};
    } else {
        throw InvalidInput("unknown weyl operation '" + a.op + "' (leq|length|compose|inverse|longest|tset)");
    }
    emit(out, result);
    return Exit::ok;
}

} // namespace detail

/// Entry point of the `borel` executable; returns the process exit code.
inline int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Exact Borel subalgebra computations over Q and F_p", "borel"};
    app.footer(schema_help);
    app.require_subcommand(1);

    detail::EnvelopeArgs env;
    auto* envelope = app.add_subcommand("envelope", "Certificate that b_g is spanned by its intersections with Weyl-translated Borels");
    envelope->add_option("--matrix", env.matrix, "Invertible matrix g (JSON)")->required();
    envelope->add_option("--field", env.field, "q or fp:<p>");
    envelope->add_flag("--restricted", env.restricted, "Use only the translate of {e} ∪ transpositions");
    envelope->add_option("--weyl-set", env.weyl_set, "JSON array of permutations to use");

    detail::DecompArgs dec;
    auto* decomp = app.add_subcommand("decomp", "Bruhat or ULP factorization, re-verified before printing");
    decomp->add_option("--matrix", dec.matrix, "Square matrix (JSON)")->required();
    decomp->add_option("--field", dec.field, "q or fp:<p>");
    decomp->add_option("--kind", dec.kind, "bruhat | ulp")->check(CLI::IsMember({"bruhat", "ulp"}));
    decomp->add_option("--normalize", dec.normalize, "ULP unipotent factor: upper | lower")
        ->check(CLI::IsMember({"upper", "lower"}));

    detail::RelposArgs rel;
    auto* relpos = app.add_subcommand("relpos", "Relative position of two complete flags");
    relpos->add_option("--flag1", rel.flag1, "First flag (JSON matrix of an adapted basis)")->required();
    relpos->add_option("--flag2", rel.flag2, "Second flag")->required();
    relpos->add_option("--field", rel.field, "q or fp:<p>");

    detail::WeylArgs wa;
    auto* weyl = app.add_subcommand("weyl", "Symmetric group queries: leq u w | length w | compose u w | inverse w | longest n | tset n");
    weyl->add_option("op", wa.op, "Operation")->required();
    weyl->add_option("operands", wa.operands, "Permutations or a degree");

    detail::Theorem26Args th;
    auto* theorem = app.add_subcommand("theorem26", "Torus-fixed tangent space sum check at the flag of h");
    theorem->add_option("--matrix", th.matrix, "Invertible matrix h (JSON)")->required();
    theorem->add_option("--field", th.field, "q or fp:<p>");

    detail::VerifyArgs va;
    auto* ver = app.add_subcommand("verify", "Seeded property suites with a JSON report");
    ver->add_option("--seed", va.seed, "PRNG seed")->capture_default_str();
    ver->add_option("--trials", va.trials, "Random cases per property, field and n")->capture_default_str();
    ver->add_option("--fields", va.fields, "Comma-separated list of q | fp:<p>")->capture_default_str();
    ver->add_option("--n", va.n, "Degree or range min..max")->capture_default_str();
    ver->add_option("--suite", va.suite, "all | envelope | weyl | decomp | flag")->capture_default_str();
    ver->add_option("--mode", va.mode, "Envelope certificates: full | restricted")->capture_default_str();
    ver->add_option("--threads", va.threads, "Worker threads (does not affect the report)")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return Exit::ok;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return Exit::ok;
    } catch (const CLI::ParseError& e) {
        err << "borel: " << e.what() << '\n';
        return Exit::input_error;
    }

    try {
        if (*envelope)
            return detail::cmd_envelope(env, out);
        if (*decomp)
            return detail::cmd_decomp(dec, out);
        if (*relpos)
            return detail::cmd_relpos(rel, out);
        if (*weyl)
            return detail::cmd_weyl(wa, out);
        if (*theorem)
            return detail::cmd_theorem26(th, out);
        if (*ver)
            return detail::cmd_verify(va, out);
    } catch (const NoFactorization& e) {
        err << "borel: " << e.what() << '\n';
        return Exit::property_false;
    } catch (const ContractViolation& e) {
        err << "borel: internal check failed: " << e.what() << '\n';
        return Exit::property_false;
    } catch (const Error& e) {
        err << "borel: " << e.what() << '\n';
        return Exit::input_error;
    } catch (const nlohmann::json::exception& e) {
        err << "borel: " << e.what() << '\n';
        return Exit::input_error;
    }
    return Exit::input_error;
}

} // namespace borel::cli
