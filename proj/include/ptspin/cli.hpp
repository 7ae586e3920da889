#pragma once

/**
 * @file cli.hpp
 * @brief Command implementations behind the `ptspin` executable.
 *
 * Exit codes: 0 success, 1 mathematical failure (invalid condition, singular
 * operator, no admissible state), 2 usage, parse or parameter error.
 */

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ptspin/io.hpp"
#include "ptspin/spectra.hpp"

namespace ptspin::cli {

using io::json;

struct CommandResult {
    int exit_code = 0;
    std::string out;
    std::string err;
};

struct CliConfig {
    std::string subcommand;
    std::string input;
    std::optional<double> tol_flag;
    /// Resolved tolerance: --tol, then PTSPIN_TOL, then the library default.
    double tolerance = default_tolerance;
    bool tolerance_explicit = false;
    std::string statistics = "boson";
    std::string family = "pt";
    double k1 = 0.0, k2 = 0.0;
    std::vector<double> momenta;
    std::vector<double> x;
    std::string u;
    std::size_t particles = 2;
    std::string param;
    std::string run;
    std::string format = "csv";
    std::string output;
};

/// Writes a double with 17 significant digits.
inline std::string format_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace detail {

inline Statistics statistics_of(const CliConfig& cfg) {
    const auto s = parse_statistics(cfg.statistics);
    if (!s) throw ParseError("--statistics must be \"boson\" or \"fermion\"");
    return *s;
}

inline CommandResult ok(const json& j) { return {0, j.dump() + "\n", ""}; }

inline const SeparatedBC& require_separated(const io::BoundaryDocument& doc, const char* what) {
    if (!doc.separated()) throw DomainError(std::string(what) + " requires separated BC");
    return std::get<SeparatedBC>(doc.condition);
}

inline json report_json(const ValidationReport& r) {
    json residuals = json::object();
    for (const auto& [label, value] : r.residuals) residuals[label] = value;
    return {{"valid", r.valid}, {"residuals", residuals}, {"tolerance", r.tolerance}};
}

inline ValidationReport validate_document(const io::BoundaryDocument& doc, const CliConfig& cfg) {
    const double tol = cfg.tolerance;
    if (const auto* ns = std::get_if<NonseparatedBC>(&doc.condition)) {
        if (cfg.family == "selfadjoint") return validate_selfadjoint(*ns, tol);
        return validate_nonseparated_pt(*ns, tol);
    }
    const auto& sep = std::get<SeparatedBC>(doc.condition);
    if (cfg.family == "selfadjoint") {
        if (sep.dirichlet) return validate_separated_selfadjoint(sep.F, sep.F, tol);
        return validate_separated_selfadjoint(sep.F, sep.G(), tol);
    }
    ValidationReport r = validate_separated_pt(sep.F, sep.G(), tol);
    if (doc.kind == "hspin") {
        const ComplexMatrix p = swap_pair(2);
        r.residuals["Fp-pF"] = max_abs(ComplexMatrix(sep.F * p - p * sep.F));
        r.valid = r.valid && r.residuals["Fp-pF"] <= tol;
    }
    return r;
}

inline YFactory factory_of(const io::BoundaryDocument& doc, Statistics s) {
    if (doc.separated()) return separated_factory(std::get<SeparatedBC>(doc.condition));
    return nonseparated_factory(std::get<NonseparatedBC>(doc.condition), s);
}

inline double realness_tolerance(const SeparatedBC& bc, const CliConfig& cfg) {
    return cfg.tolerance_explicit ? cfg.tolerance : default_realness_tolerance(bc.F);
}

} // namespace detail

// ---------------------------------------------------------------------------
// Commands. Each takes an already-parsed boundary document.
// ---------------------------------------------------------------------------

inline CommandResult cmd_validate(const json& doc_json, const CliConfig& cfg) {
    const io::BoundaryDocument doc = io::parse_boundary(doc_json);
    const ValidationReport r = detail::validate_document(doc, cfg);
    return {r.valid ? 0 : 1, detail::report_json(r).dump() + "\n", ""};
}

inline CommandResult cmd_yop(const json& doc_json, const CliConfig& cfg) {
    const io::BoundaryDocument doc = io::parse_boundary(doc_json);
    const Statistics s = detail::statistics_of(cfg);
    const double k12 = Kinematics{cfg.k1, cfg.k2}.relative();
    const ComplexMatrix Y = detail::factory_of(doc, s)(k12);
    return detail::ok({{"k12", k12}, {"Y", io::to_json(Y)}});
}

inline CommandResult cmd_ybe(const json& doc_json, const CliConfig& cfg) {
    if (cfg.momenta.size() != 3) throw ParseError("ybe needs exactly three momenta via --k a,b,c");
    const io::BoundaryDocument doc = io::parse_boundary(doc_json);
    const Statistics s = detail::statistics_of(cfg);
    const double r = ybe_residual(detail::factory_of(doc, s), cfg.momenta[0], cfg.momenta[1], cfg.momenta[2],
                                  SpinDims{doc.n(), 3});
    return detail::ok({{"residual", r}});
}

inline CommandResult cmd_bethe(const json& doc_json, const CliConfig& cfg) {
    const io::BoundaryDocument doc = io::parse_boundary(doc_json);
    const SeparatedBC& bc = detail::require_separated(doc, "Bethe coefficient propagation");
    const Statistics s = detail::statistics_of(cfg);
    if (cfg.momenta.size() < 2) throw ParseError("bethe needs at least two momenta via --k");
    const SpinDims dims{bc.n, cfg.momenta.size()};
    ComplexVector u = ComplexVector::Zero(static_cast<Eigen::Index>(dims.total_dim()));
    if (cfg.u.empty())
        u(0) = 1.0;
    else
        u = io::vector_from(io::parse_json_text(cfg.u, "--u"), "--u");

    const BetheState state = bethe_coefficients(bc, cfg.momenta, u, s);
    json coefficients = json::array();
    for (const auto& [sigma, coeff] : state.coefficients) {
        json ordering = json::array();
        for (std::size_t label : sigma) ordering.push_back(label + 1);
        coefficients.push_back(
            {{"ordering", ordering}, {"word", state.words.at(sigma)}, {"u", io::to_json(coeff)}});
    }
    json out = {{"k", cfg.momenta}, {"statistics", to_string(s)}, {"coefficients", coefficients}};
    if (dims.N >= 3) out["path_consistency"] = path_consistency(bc, cfg.momenta, u, s);
    if (!cfg.x.empty()) out["psi"] = io::to_json(evaluate_wavefunction(state, cfg.x, s));
    return detail::ok(out);
}

inline CommandResult cmd_bound(const json& doc_json, const CliConfig& cfg) {
    if (cfg.particles < 2) throw DomainError("--particles must be >= 2");
    const io::BoundaryDocument doc = io::parse_boundary(doc_json);
    const SeparatedBC& bc = detail::require_separated(doc, "bound-state construction");
    const Statistics s = detail::statistics_of(cfg);
    const double tol = bc.dirichlet ? cfg.tolerance : detail::realness_tolerance(bc, cfg);
    json out = json::array();
    for (const BoundState& st : bound_states(bc, cfg.particles, s, tol)) {
        out.push_back({{"lambda", st.lambda},
                       {"energy", st.energy},
                       {"epsilon", st.eps.ordered()},
                       {"v", io::to_json(st.v)}});
    }
    return detail::ok(out);
}

inline CommandResult cmd_classify(const json& doc_json, const CliConfig& cfg) {
    const io::BoundaryDocument doc = io::parse_boundary(doc_json);
    const SeparatedBC& bc = detail::require_separated(doc, "spectral classification");
    if (bc.dirichlet) throw DomainError("the Dirichlet condition has no finite coupling to classify");
    const SpectrumReport r = classify_spectrum(bc.F, detail::realness_tolerance(bc, cfg));
    json eigen = json::array(), real = json::array(), pairs = json::array(), unpaired = json::array();
    for (const auto& z : r.eigenvalues) eigen.push_back(io::to_json(z));
    for (double x : r.real_subset) real.push_back(x);
    for (const auto& [a, b] : r.complex_pairs) pairs.push_back(json::array({io::to_json(a), io::to_json(b)}));
    for (const auto& z : r.unpaired) unpaired.push_back(io::to_json(z));
    return detail::ok({{"eigenvalues", eigen},
                       {"real", real},
                       {"complex_pairs", pairs},
                       {"unpaired", unpaired},
                       {"tolerance", r.tol}});
}

// ---------------------------------------------------------------------------
// Dispatch
// ---------------------------------------------------------------------------

namespace detail {

template <typename Fn>
CommandResult guarded(Fn&& fn) {
    try {
        return fn();
    } catch (const SingularityError& e) {
        return {1, json({{"error", "singular"}, {"detail", e.what()}}).dump() + "\n", std::string(e.what()) + "\n"};
    } catch (const ExistenceError& e) {
        return {1, json({{"error", "no_state"}, {"detail", e.what()}}).dump() + "\n", std::string(e.what()) + "\n"};
    } catch (const NumericalError& e) {
        return {1, "", std::string("numerical error: ") + e.what() + "\n"};
    } catch (const Error& e) {
        return {2, "", std::string("error: ") + e.what() + "\n"};
    } catch (const json::exception& e) {
        return {2, "", std::string("error: ") + e.what() + "\n"};
    }
}

inline CLI::App* add_bc_positional(CLI::App* sub, CliConfig& cfg) {
    sub->add_option("bc", cfg.input, "Boundary-condition JSON path ('-' for standard input)");
    return sub;
}

inline void add_statistics(CLI::App* sub, CliConfig& cfg) {
    sub->add_option("--statistics", cfg.statistics, "boson or fermion")
        ->check(CLI::IsMember({"boson", "fermion"}));
}

/// Registers the subcommands that act on a single boundary document.
inline void register_document_commands(CLI::App& app, CliConfig& cfg) {
    auto* validate = add_bc_positional(app.add_subcommand("validate", "Check boundary-condition constraints"), cfg);
    validate->add_option("--family", cfg.family, "Constraint family: pt or selfadjoint")
        ->check(CLI::IsMember({"pt", "selfadjoint"}));

    auto* yop = add_bc_positional(app.add_subcommand("yop", "Two-body exchange operator Y"), cfg);
    yop->add_option("--k1", cfg.k1, "Momentum of particle 1")->required();
    yop->add_option("--k2", cfg.k2, "Momentum of particle 2")->required();
    add_statistics(yop, cfg);

    auto* ybe = add_bc_positional(app.add_subcommand("ybe", "Yang-Baxter residual for three momenta"), cfg);
    ybe->add_option("--k", cfg.momenta, "Three momenta a,b,c")->delimiter(',')->required();
    add_statistics(ybe, cfg);

    auto* bethe = add_bc_positional(app.add_subcommand("bethe", "N-particle Bethe coefficients"), cfg);
    bethe->add_option("--k", cfg.momenta, "Momenta k1,...,kN")->delimiter(',')->required();
    bethe->add_option("--u", cfg.u, "Initial coefficient as a JSON array of [re, im]");
    bethe->add_option("--x", cfg.x, "Evaluate the wavefunction at x1,...,xN")->delimiter(',');
    add_statistics(bethe, cfg);

    auto* bound = add_bc_positional(app.add_subcommand("bound", "Bound states of a separated coupling"), cfg);
    bound->add_option("--particles", cfg.particles, "Particle count N");
    add_statistics(bound, cfg);

    add_bc_positional(app.add_subcommand("classify", "Real/complex classification of the spectrum of F"), cfg);
}

inline void register_global_options(CLI::App& app, CliConfig& cfg) {
    app.add_option("--tol", cfg.tol_flag, "Tolerance (overrides PTSPIN_TOL)");
    app.add_option("-o,--output", cfg.output, "Write output to this path instead of standard output");
    app.add_option("--format", cfg.format, "Output format for sweep: csv or json")
        ->check(CLI::IsMember({"json", "csv"}));
}

inline std::string selected_subcommand(const CLI::App& app) {
    for (const auto* sub : app.get_subcommands()) return sub->get_name();
    return "";
}

inline CommandResult dispatch_document(const json& doc, const CliConfig& cfg) {
    if (cfg.subcommand == "validate") return cmd_validate(doc, cfg);
    if (cfg.subcommand == "yop") return cmd_yop(doc, cfg);
    if (cfg.subcommand == "ybe") return cmd_ybe(doc, cfg);
    if (cfg.subcommand == "bethe") return cmd_bethe(doc, cfg);
    if (cfg.subcommand == "bound") return cmd_bound(doc, cfg);
    if (cfg.subcommand == "classify") return cmd_classify(doc, cfg);
    throw ParseError("unknown subcommand " + cfg.subcommand);
}

inline void resolve_tolerance(CliConfig& cfg, const char* env_value) {
    if (cfg.tol_flag) {
        cfg.tolerance = *cfg.tol_flag;
        cfg.tolerance_explicit = true;
    } else if (env_value != nullptr && *env_value != '\0') {
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(env_value, &used);
        } catch (const std::exception&) {
            throw ParseError(std::string("PTSPIN_TOL is not a number: ") + env_value);
        }
        if (used != std::string(env_value).size()) throw ParseError(std::string("PTSPIN_TOL is not a number: ") + env_value);
        cfg.tolerance = v;
        cfg.tolerance_explicit = true;
    }
    if (!(cfg.tolerance > 0.0) || !std::isfinite(cfg.tolerance)) throw ParseError("tolerance must be positive");
}

struct ParamRange {
    std::string name;
    double lo = 0, hi = 0;
    std::size_t steps = 1;

    double at(std::size_t i) const {
        if (steps == 1) return lo;
        if (i + 1 == steps) return hi;
        return lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(steps - 1);
    }
};

inline ParamRange parse_param_range(const std::string& text) {
    const auto eq = text.find('=');
    if (eq == std::string::npos || eq == 0) throw ParseError("--param must look like name=lo:hi:steps");
    ParamRange r;
    r.name = text.substr(0, eq);
    std::vector<std::string> parts;
    std::stringstream ss(text.substr(eq + 1));
    for (std::string part; std::getline(ss, part, ':');) parts.push_back(part);
    if (parts.size() != 3) throw ParseError("--param must look like name=lo:hi:steps");
    try {
        std::size_t used = 0;
        r.lo = std::stod(parts[0], &used);
        if (used != parts[0].size()) throw ParseError("bad lo");
        r.hi = std::stod(parts[1], &used);
        if (used != parts[1].size()) throw ParseError("bad hi");
        const long long steps = std::stoll(parts[2], &used);
        if (used != parts[2].size() || steps < 1) throw ParseError("bad steps");
        r.steps = static_cast<std::size_t>(steps);
    } catch (const std::exception&) {
        throw ParseError("--param must look like name=lo:hi:steps with numeric bounds and steps >= 1");
    }
    if (!std::isfinite(r.lo) || !std::isfinite(r.hi)) throw ParseError("--param bounds must be finite");
    return r;
}

/// Locates the JSON slot a sweep parameter refers to.
inline json& param_slot(json& doc, const std::string& name) {
    const std::string kind = doc.is_object() && doc.contains("kind") && doc["kind"].is_string()
                                 ? doc["kind"].get<std::string>()
                                 : std::string{};
    const auto names = io::scalar_parameters(kind);
    if (std::find(names.begin(), names.end(), name) == names.end())
        throw ParseError("unknown sweep parameter \"" + name + "\" for kind \"" + kind + "\"");
    if (kind == "hspin") {
        if (!doc.contains("params") || !doc["params"].is_object()) throw ParseError("hspin template lacks params");
        return doc["params"][name];
    }
    return doc[name];
}

inline std::vector<std::string> sweep_columns(const std::string& run) {
    if (run == "validate") return {"valid", "max_residual"};
    if (run == "ybe") return {"residual"};
    if (run == "classify") return {"real_count", "complex_count", "max_abs_imag"};
    if (run == "bound") return {"states", "min_energy"};
    throw ParseError("sweep cannot run \"" + run + "\" (use validate, ybe, classify or bound)");
}

/// One sweep row: result cells, or a single failure label.
inline std::vector<std::string> sweep_row(const json& doc, const CliConfig& run_cfg) {
    const CommandResult r = guarded([&] { return dispatch_document(doc, run_cfg); });
    if (r.exit_code == 2) return {"parameter_error"};
    if (r.out.empty()) return {"numerical_error"};
    const json out = r.out.empty() ? json() : json::parse(r.out);
    if (out.is_object() && out.contains("error")) return {out["error"].get<std::string>()};
    if (run_cfg.subcommand == "validate") {
        double worst = 0.0;
        for (const auto& [label, value] : out["residuals"].items()) worst = std::max(worst, value.get<double>());
        return {out["valid"].get<bool>() ? "true" : "false", format_number(worst)};
    }
    if (run_cfg.subcommand == "ybe") return {format_number(out["residual"].get<double>())};
    if (run_cfg.subcommand == "classify") {
        double imag = 0.0;
        for (const auto& z : out["eigenvalues"]) imag = std::max(imag, std::abs(z[1].get<double>()));
        const std::size_t complex_count = out["eigenvalues"].size() - out["real"].size();
        return {std::to_string(out["real"].size()), std::to_string(complex_count), format_number(imag)};
    }
    // bound
    if (out.empty()) return {"0", ""};
    double lowest = out[0]["energy"].get<double>();
    for (const auto& st : out) lowest = std::min(lowest, st["energy"].get<double>());
    return {std::to_string(out.size()), format_number(lowest)};
}

/// CSV cell as a JSON value: booleans, counts and measurements keep their type, failure labels stay strings.
inline json typed_cell(const std::string& column, const std::string& cell) {
    if (cell.empty()) return nullptr;
    if (cell == "true") return true;
    if (cell == "false") return false;
    const bool count = column == "states" || column.ends_with("_count");
    try {
        std::size_t used = 0;
        if (count) {
            const long long v = std::stoll(cell, &used);
            if (used == cell.size()) return v;
        } else {
            const double v = std::stod(cell, &used);
            if (used == cell.size()) return v;
        }
    } catch (const std::exception&) {
    }
    return cell;
}

inline std::vector<std::string> tokenize(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream is(text);
    for (std::string tok; is >> tok;) out.push_back(tok);
    return out;
}

} // namespace detail

inline CommandResult cmd_sweep(const json& template_doc, const CliConfig& cfg) {
    const detail::ParamRange range = detail::parse_param_range(cfg.param);

    // Parse the --run argument with the same option grammar as the CLI.
    CliConfig run_cfg;
    {
        CLI::App run_app{"sweep --run"};
        detail::register_document_commands(run_app, run_cfg);
        run_app.require_subcommand(1);
        auto tokens = detail::tokenize(cfg.run);
        if (tokens.empty()) throw ParseError("--run needs a subcommand");
        std::reverse(tokens.begin(), tokens.end());
        try {
            run_app.parse(tokens);
        } catch (const CLI::ParseError& e) {
            throw ParseError(std::string("--run: ") + e.what());
        }
        run_cfg.subcommand = detail::selected_subcommand(run_app);
        if (!run_cfg.input.empty()) throw ParseError("--run must not name an input file");
    }
    run_cfg.tolerance = cfg.tolerance;
    run_cfg.tolerance_explicit = cfg.tolerance_explicit;
    const auto columns = detail::sweep_columns(run_cfg.subcommand);

    json doc = template_doc;
    detail::param_slot(doc, range.name);

    std::ostringstream csv;
    json rows = json::array();
    csv << "param,value";
    for (const auto& c : columns) csv << "," << c;
    csv << "\n";
    for (std::size_t i = 0; i < range.steps; ++i) {
        const double value = range.at(i);
        detail::param_slot(doc, range.name) = value;
        auto cells = detail::sweep_row(doc, run_cfg);
        cells.resize(columns.size());
        csv << range.name << "," << format_number(value);
        for (const auto& cell : cells) csv << "," << cell;
        csv << "\n";
        json result = json::object();
        for (std::size_t c = 0; c < columns.size(); ++c) result[columns[c]] = detail::typed_cell(columns[c], cells[c]);
        rows.push_back({{"param", range.name}, {"value", value}, {"result", result}});
    }
    if (cfg.format == "json") return {0, rows.dump() + "\n", ""};
    return {0, csv.str(), ""};
}

/**
 * Runs the command line `args` (args[0] is the program name) and returns
 * exit code and captured streams. `env_tol` stands in for PTSPIN_TOL.
 */
inline CommandResult run(const std::vector<std::string>& args, const char* env_tol) {
    CliConfig cfg;
    CLI::App app{"Spin-coupling PT-symmetric point interactions: validation, scattering, integrability, bound states",
                 "ptspin"};
    app.fallthrough();
    app.require_subcommand(1);
    detail::register_global_options(app, cfg);
    detail::register_document_commands(app, cfg);
    auto* sweep = app.add_subcommand("sweep", "Parameter sweep of another subcommand, CSV output");
    sweep->add_option("bc", cfg.input, "Template boundary-condition JSON path")->required();
    sweep->add_option("--param", cfg.param, "name=lo:hi:steps")->required();
    sweep->add_option("--run", cfg.run, "Subcommand and flags to run per grid point")->required();

    std::vector<std::string> reversed(args.begin() + (args.empty() ? 0 : 1), args.end());
    std::reverse(reversed.begin(), reversed.end());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        return {0, app.help(), ""};
    } catch (const CLI::CallForAllHelp&) {
        return {0, app.help("", CLI::AppFormatMode::All), ""};
    } catch (const CLI::ParseError& e) {
        return {2, "", std::string("error: ") + e.what() + "\n"};
    }
    cfg.subcommand = detail::selected_subcommand(app);

    CommandResult result = detail::guarded([&]() -> CommandResult {
        detail::resolve_tolerance(cfg, env_tol);
        if (cfg.input.empty()) throw ParseError(cfg.subcommand + " needs a boundary-condition path");
        const json doc = io::read_json(cfg.input);
        if (cfg.subcommand == "sweep") return cmd_sweep(doc, cfg);
        return detail::dispatch_document(doc, cfg);
    });

    if (!cfg.output.empty() && !result.out.empty()) {
        std::ofstream out(cfg.output, std::ios::binary);
        if (!out) return {2, "", "error: cannot write " + cfg.output + "\n"};
        out << result.out;
        result.out.clear();
    }
    return result;
}

inline CommandResult run(const std::vector<std::string>& args) { return run(args, std::getenv("PTSPIN_TOL")); }

} // namespace ptspin::cli
