#pragma once

// Command-line driver. `run_cli` is the whole tool: the binary's main() only
// forwards argv and the standard streams, so tests can drive every subcommand
// in-process and capture output.
//
// Exit codes: 0 all checks passed, 1 at least one check row failed,
// 2 input error (bad arguments, unreadable/malformed file, unmet gate).

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "crgeo/acm.hpp"
#include "crgeo/apcm.hpp"
#include "crgeo/bileg.hpp"
#include "crgeo/errors.hpp"
#include "crgeo/mfd.hpp"
#include "crgeo/parallelize.hpp"
#include "crgeo/qsas.hpp"
#include "crgeo/report.hpp"

namespace crgeo {

inline constexpr const char kToolVersion[] = "0.1.0";

namespace cli_detail {

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "' for reading");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void merge_into(Report& dst, const Report& src) {
    for (const CheckRow& row : src.rows) dst.add(row);
    for (const auto& kv : src.labels) dst.labels[kv.first] = kv.second;
}

/// Explicit command-line overrides; file sampling blocks provide defaults.
struct Overrides {
    bool has_tol = false;
    double tol = 1e-8;
    bool has_seed = false;
    std::uint64_t seed = 42;
    bool has_points = false;
    int points = 100;
};

inline ProbeOptions effective_options(const SamplingBlock& s, const Overrides& o) {
    ProbeOptions opts;
    if (s.has_seed) opts.seed = s.seed;
    if (s.has_points) opts.points = s.points;
    if (s.has_tol) opts.tol = s.tol;
    if (o.has_seed) opts.seed = o.seed;
    if (o.has_points) opts.points = o.points;
    if (o.has_tol) opts.tol = o.tol;
    return opts;
}

inline bool parse_numeric(const std::string& s, double& v) {
    const char* c = s.c_str();
    char* end = nullptr;
    v = std::strtod(c, &end);
    return end != c && *end == '\0';
}

/// Compare each certified value against the label the suite recomputed.
/// Ids the suite does not compute become not-applicable rows, never failures.
inline void apply_certifications(Report& r, const std::vector<Certification>& certs,
                                 double tol) {
    for (const Certification& c : certs) {
        const std::string id = "certify." + c.id;
        const std::string identity =
            "recomputed " + c.id + " matches the value certified at emission";
        const auto it = r.labels.find(c.id);
        if (it == r.labels.end()) {
            r.add(CheckRow::not_applicable(
                id, identity, "this suite does not compute '" + c.id + "'"));
            continue;
        }
        double actual = 0.0;
        if (!parse_numeric(it->second, actual)) {
            r.add(CheckRow::not_applicable(
                id, identity, "'" + c.id + "' is not numeric: " + it->second));
            continue;
        }
        const double ctol = std::max(1e-6, 10.0 * tol);
        r.add(CheckRow::make(id, identity, std::abs(actual - c.value), ctol,
                             "certified " + format_double(c.value)));
    }
}

inline Report acm_suite(const ACMStructure& s, const std::string& suite,
                        const ProbeOptions& opts) {
    const bool all = suite == "all";
    Report r;
    if (all || suite == "general") {
        merge_into(r, validate_acm(s, opts));
        merge_into(r, acm_identity_suite(s, opts));
    }
    if (all || suite == "normality") {
        merge_into(r, normality_equivalence(s, opts));
        merge_into(r, autoparallel_equivalences(s, opts));
    }
    if (all || suite == "connection") {
        merge_into(r, parallelization_report(s, opts));
        merge_into(r, specialization_check(s, opts));
    }
    if (all || suite == "qsas") {
        merge_into(r, classify(s, opts));
        merge_into(r, qs_formulas_check(s, opts));
        merge_into(r, foliation_checks(s, opts));
    }
    if (all || suite == "bileg") {
        r.add(CheckRow::not_applicable(
            "bileg.gate", "bi-Legendrian invariants of (tau, dtau)",
            "bi-Legendrian checks need an almost paracontact structure"));
    }
    return r;
}

inline Report apcm_suite(const APCMStructure& s, const std::string& suite,
                         const ProbeOptions& opts) {
    const bool all = suite == "all";
    Report r;
    if (all || suite == "general") {
        merge_into(r, validate_apcm(s, opts));
        merge_into(r, apcm_identity_suite(s, opts));
        merge_into(r, product_nijenhuis_check(s, opts));
    }
    if (all || suite == "normality") {
        merge_into(r, tau_normality_equivalence(s, opts));
        merge_into(r, para_autoparallel_equivalences(s, opts));
    }
    if (all || suite == "connection") {
        merge_into(r, para_parallelization_report(s, opts));
    }
    if (all || suite == "qsas") {
        r.add(CheckRow::not_applicable(
            "qs.gate", "quasi-Sasakian foliation and rank checks",
            "quasi-Sasakian checks need an almost contact metric structure"));
    }
    if (all || suite == "bileg") {
        try {
            merge_into(r, bileg_report(s, opts));
        } catch (const GateError& e) {
            for (const char* id : {"reeb.gate", "pang.gate", "flat.gate", "km.gate"})
                r.add(CheckRow::not_applicable(
                    id, "tau ^ (dtau)^n != 0 (contact condition)", e.what()));
        }
    }
    return r;
}

inline nlohmann::json report_json(const Report& r, const std::string& command,
                                  const std::string& input, const std::string& input_text,
                                  const ProbeOptions& opts, double elapsed_ms) {
    nlohmann::json j = to_json(r);
    j["version"] = kToolVersion;
    j["command"] = command;
    j["input"] = input;
    j["input_hash"] = hex64(fnv1a(input_text));
    j["seed"] = opts.seed;
    j["points"] = opts.points;
    j["tol"] = opts.tol;
    j["elapsed_ms"] = elapsed_ms;
    return j;
}

inline void write_json_file(const std::string& path, const nlohmann::json& j) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out << j.dump(2) << "\n";
}

inline void print_human(std::ostream& out, const std::string& heading, const Report& rep,
                        const ProbeOptions& opts) {
    out << "crgeo " << kToolVersion << "  " << heading << "\n";
    out << "  seed " << opts.seed << ", points " << opts.points << ", tol "
        << format_double(opts.tol) << "\n";
    std::size_t idw = 0;
    for (const CheckRow& r : rep.rows) idw = std::max(idw, r.id.size());
    int fails = 0, nas = 0;
    for (const CheckRow& r : rep.rows) {
        if (r.verdict == "fail") ++fails;
        if (r.verdict == "n/a") ++nas;
        out << "  [" << (r.verdict == "n/a" ? "n/a " : r.verdict) << "] " << r.id
            << std::string(idw - r.id.size(), ' ') << "  " << r.identity;
        if (r.verdict != "n/a")
            out << "  |residual| " << format_double(r.residual) << " vs tol "
                << format_double(r.tol);
        out << "\n";
        if (!r.note.empty()) out << std::string(idw + 11, ' ') << r.note << "\n";
    }
    if (!rep.labels.empty()) {
        out << "  labels:\n";
        for (const auto& kv : rep.labels)
            out << "    " << kv.first << " = " << kv.second << "\n";
    }
    if (fails == 0)
        out << "result: PASS (" << rep.rows.size() << " rows, " << nas
            << " not applicable)\n";
    else
        out << "result: FAIL (" << fails << " of " << rep.rows.size() << " rows failed)\n";
}

inline MatD parse_matrix_arg(const std::string& text, int n) {
    const auto bad = [&](const std::string& why) {
        throw GateError("matrix '" + text + "': " + why);
    };
    std::vector<std::vector<double>> rows;
    std::stringstream rs(text);
    std::string row;
    while (std::getline(rs, row, ';')) {
        std::vector<double> entries;
        std::stringstream es(row);
        std::string entry;
        while (std::getline(es, entry, ',')) {
            const std::size_t a = entry.find_first_not_of(" \t");
            if (a == std::string::npos) bad("empty entry");
            const std::size_t b = entry.find_last_not_of(" \t");
            double v = 0.0;
            if (!parse_numeric(entry.substr(a, b - a + 1), v))
                bad("entry '" + entry + "' is not a number");
            entries.push_back(v);
        }
        rows.push_back(std::move(entries));
    }
    if (static_cast<int>(rows.size()) != n)
        bad("expected " + std::to_string(n) + " rows, got " + std::to_string(rows.size()));
    MatD a(n, n);
    for (int i = 0; i < n; ++i) {
        if (static_cast<int>(rows[static_cast<std::size_t>(i)].size()) != n)
            bad("row " + std::to_string(i) + " has " +
                std::to_string(rows[static_cast<std::size_t>(i)].size()) + " entries, expected " +
                std::to_string(n));
        for (int j = 0; j < n; ++j)
            a(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    }
    return a;
}

} // namespace cli_detail

inline int run_cli(const std::vector<std::string>& args, std::ostream& out,
                   std::ostream& err) {
    namespace cd = cli_detail;

    CLI::App app{"numerical checks for almost contact and almost paracontact metric "
                 "structures on coordinate charts"};
    app.name("crgeo");

    std::string file, json_path, suite = "all";
    double tol = 1e-8;
    std::uint64_t seed = 42;
    int points = 100;

    const auto add_common = [&](CLI::App* sub, bool with_file) {
        if (with_file)
            sub->add_option("file", file, "manifold spec file (.mfd)")->required();
        sub->add_option("--tol", tol, "identity residual tolerance");
        sub->add_option("--seed", seed, "sampling seed");
        sub->add_option("--points", points, "sample point count")
            ->check(CLI::Range(1, 1000000));
        sub->add_option("--json", json_path, "write the JSON report to this path");
    };

    CLI::App* c_validate =
        app.add_subcommand("validate", "check the structure axioms of a spec file");
    add_common(c_validate, true);

    CLI::App* c_classify =
        app.add_subcommand("classify", "classification labels, rank, and signatures");
    add_common(c_classify, true);

    CLI::App* c_ident =
        app.add_subcommand("identities", "residual table for an identity suite");
    add_common(c_ident, true);
    c_ident->add_option("--suite", suite, "general|normality|connection|qsas|bileg|all")
        ->check(CLI::IsMember({"general", "normality", "connection", "qsas", "bileg", "all"}));

    CLI::App* c_conn =
        app.add_subcommand("connection", "parallelizing connection and torsion checks");
    add_common(c_conn, true);

    CLI::App* c_bileg =
        app.add_subcommand("bileg", "bi-Legendrian invariants, flatness, curvature fit");
    add_common(c_bileg, true);

    CLI::App* c_ex =
        app.add_subcommand("example", "emit a built-in example as a manifold spec file");
    std::string ex_name, ex_a, ex_out;
    int ex_n = 1, ex_dim = 3;
    double ex_alpha = 1.0, ex_mu = 2.0;
    c_ex->add_option("name", ex_name,
                     "heisenberg|alpha_sasakian|para_cosymplectic|para_kenmotsu|"
                     "para_sasakian|kappa_mu")
        ->required()
        ->check(CLI::IsMember({"heisenberg", "alpha_sasakian", "para_cosymplectic",
                               "para_kenmotsu", "para_sasakian", "kappa_mu"}));
    c_ex->add_option("--n", ex_n, "half-dimension parameter (dimension 2n+1)")
        ->check(CLI::Range(1, 5));
    c_ex->add_option("--a", ex_a,
                     "symmetric matrix for heisenberg: rows ';'-separated, entries "
                     "','-separated (default: identity)");
    c_ex->add_option("--alpha", ex_alpha, "alpha for alpha_sasakian (0 gives cosymplectic)");
    c_ex->add_option("--dim", ex_dim, "dimension for para_sasakian");
    c_ex->add_option("--mu", ex_mu, "mu for kappa_mu");
    c_ex->add_option("--out", ex_out, "write the spec file here instead of standard output");
    add_common(c_ex, false);

    app.require_subcommand(1);

    {
        std::vector<const char*> argv;
        argv.reserve(args.size() + 1);
        argv.push_back("crgeo");
        for (const std::string& a : args) argv.push_back(a.c_str());
        try {
            app.parse(static_cast<int>(argv.size()), argv.data());
        } catch (const CLI::CallForHelp&) {
            out << app.help();
            return 0;
        } catch (const CLI::CallForAllHelp&) {
            out << app.help("", CLI::AppFormatMode::All);
            return 0;
        } catch (const CLI::ParseError& e) {
            err << "error: " << e.what() << "\n";
            return 2;
        }
    }

    try {
        const auto t0 = std::chrono::steady_clock::now();
        const auto elapsed_ms = [&t0]() {
            return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                             t0)
                .count();
        };

        CLI::App* active = nullptr;
        for (CLI::App* sub : {c_validate, c_classify, c_ident, c_conn, c_bileg, c_ex})
            if (sub->parsed()) active = sub;

        cd::Overrides ov;
        ov.has_tol = active->count("--tol") > 0;
        ov.tol = tol;
        ov.has_seed = active->count("--seed") > 0;
        ov.seed = seed;
        ov.has_points = active->count("--points") > 0;
        ov.points = points;

        if (active == c_ex) {
            // Build the requested model; bad parameters are input errors.
            std::optional<ACMStructure> acm;
            std::optional<APCMStructure> apcm;
            std::string mname;
            if (ex_name == "heisenberg") {
                HeisenbergSpec hs;
                hs.n = ex_n;
                if (ex_a.empty()) {
                    hs.a = MatD(ex_n, ex_n);
                    for (int i = 0; i < ex_n; ++i) hs.a(i, i) = 1.0;
                } else {
                    hs.a = cd::parse_matrix_arg(ex_a, ex_n);
                }
                acm = heisenberg(hs);
                mname = "heisenberg_n" + std::to_string(ex_n);
            } else if (ex_name == "alpha_sasakian") {
                acm = alpha_sasakian(ex_n, ex_alpha);
                mname = "alpha_sasakian_n" + std::to_string(ex_n) + "_alpha" +
                        format_double(ex_alpha);
            } else if (ex_name == "para_cosymplectic") {
                apcm = flat_para_cosymplectic(ex_n);
                mname = "para_cosymplectic_n" + std::to_string(ex_n);
            } else if (ex_name == "para_kenmotsu") {
                apcm = para_kenmotsu();
                mname = "para_kenmotsu";
            } else if (ex_name == "para_sasakian") {
                if (ex_dim != 3) {
                    err << "error: unsupported --dim " << ex_dim
                        << " for para_sasakian (only the three-dimensional model is "
                           "built in)\n";
                    return 2;
                }
                apcm = para_sasakian();
                mname = "para_sasakian_dim3";
            } else {
                if (std::abs(ex_mu - 2.0) > 1e-12) {
                    err << "error: unsupported --mu " << format_double(ex_mu)
                        << " for kappa_mu (the built-in model has kappa = -1, mu = 2;"
                           " other values of mu are not realized by this family)\n";
                    return 2;
                }
                apcm = kappa_mu_example();
                mname = "kappa_mu";
            }

            const ProbeOptions opts = cd::effective_options(SamplingBlock{}, ov);

            // Validate before emitting; para_sasakian and kappa_mu additionally
            // certify their defining residuals inside the emitted file.
            Report rep;
            ManifoldSpec spec;
            if (acm) {
                cd::merge_into(rep, validate_acm(*acm, opts));
                cd::merge_into(rep, classify(*acm, opts));
                spec = from_acm(*acm);
            } else {
                cd::merge_into(rep, validate_apcm(*apcm, opts));
                cd::merge_into(rep, para_class_check(*apcm, opts));
                spec = from_apcm(*apcm);
                if (ex_name == "para_sasakian" || ex_name == "kappa_mu") {
                    const Report bl = bileg_report(*apcm, opts);
                    cd::merge_into(rep, bl);
                    const auto cert = [&](const std::string& id) {
                        double v = 0.0;
                        if (cd::parse_numeric(bl.labels.at(id), v))
                            spec.certifications.push_back({id, v});
                    };
                    if (ex_name == "para_sasakian") {
                        cert("residual.dtau_minus_Psi");
                        cert("residual.K1");
                    } else {
                        cert("kappa");
                        cert("mu");
                        cert("residual.curvature");
                    }
                }
            }
            spec.name = mname;
            if (ov.has_seed) {
                spec.sampling.has_seed = true;
                spec.sampling.seed = ov.seed;
            }
            if (ov.has_points) {
                spec.sampling.has_points = true;
                spec.sampling.points = ov.points;
            }
            if (ov.has_tol) {
                spec.sampling.has_tol = true;
                spec.sampling.tol = ov.tol;
            }

            const std::string text = emit_mfd(spec);
            const std::string command = "example " + ex_name;
            if (!json_path.empty())
                cd::write_json_file(json_path, cd::report_json(rep, command, command, text,
                                                               opts, elapsed_ms()));
            if (!rep.all_passed()) {
                cd::print_human(out, command, rep, opts);
                err << "error: example '" << ex_name
                    << "' failed its own checks; no file emitted\n";
                return 1;
            }
            if (!ex_out.empty()) {
                save_mfd(ex_out, spec);
                cd::print_human(out, command + " -> " + ex_out, rep, opts);
            } else {
                out << text;  // raw spec file on stdout, pipeable
            }
            return 0;
        }

        // File-driven subcommands.
        const std::string text = cd::read_file(file);
        ManifoldSpec spec;
        try {
            spec = parse_mfd(text);
        } catch (const ParseError& e) {
            throw ParseError(file + ": " + e.what(), e.offset());
        }
        const ProbeOptions opts = cd::effective_options(spec.sampling, ov);
        const bool is_acm = spec.kind == "acm";

        Report rep;
        std::string command = active->get_name();
        if (active == c_validate) {
            rep = is_acm ? validate_acm(to_acm(spec), opts) : validate_apcm(to_apcm(spec), opts);
        } else if (active == c_classify) {
            rep = is_acm ? classify(to_acm(spec), opts) : para_class_check(to_apcm(spec), opts);
        } else if (active == c_ident) {
            rep = is_acm ? cd::acm_suite(to_acm(spec), suite, opts)
                         : cd::apcm_suite(to_apcm(spec), suite, opts);
            cd::apply_certifications(rep, spec.certifications, opts.tol);
            command = "identities --suite " + suite;
        } else if (active == c_conn) {
            if (is_acm) {
                const ACMStructure s = to_acm(spec);
                cd::merge_into(rep, parallelization_report(s, opts));
                cd::merge_into(rep, specialization_check(s, opts));
            } else {
                rep = para_parallelization_report(to_apcm(spec), opts);
            }
        } else {  // bileg
            if (is_acm)
                throw GateError(
                    "bi-Legendrian checks need an almost paracontact structure (kind "
                    "apcm), got kind 'acm'");
            rep = bileg_report(to_apcm(spec), opts);
            cd::apply_certifications(rep, spec.certifications, opts.tol);
        }

        if (!json_path.empty())
            cd::write_json_file(json_path,
                                cd::report_json(rep, command, file, text, opts, elapsed_ms()));
        cd::print_human(out, command + " " + file, rep, opts);
        return rep.all_passed() ? 0 : 1;
    } catch (const ParseError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const IoError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const GateError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
}

} // namespace crgeo
