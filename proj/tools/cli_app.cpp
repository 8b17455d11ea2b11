#include "cli_app.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <future>
#include <iostream>
#include <utility>

#include <CLI11.hpp>

#include "fms/common.hpp"
#include "fms/contraction.hpp"
#include "fms/fuzzy_space.hpp"
#include "fms/relation.hpp"
#include "fms/sequences.hpp"
#include "fms/solver.hpp"
#include "fms/tnorm.hpp"

namespace fms::cli {

using nlohmann::json;

namespace {

// ---------------------------------------------------------------------------
// Config access. All numeric parameters are decimal strings so that parsing
// never depends on the process locale.
// ---------------------------------------------------------------------------

const json& require_field(const json& j, const std::string& key) {
    if (!j.contains(key)) throw config_error("missing config field '" + key + "'");
    return j.at(key);
}

std::string text_field(const json& j, const std::string& key) {
    const json& v = require_field(j, key);
    if (!v.is_string()) throw config_error("config field '" + key + "' must be a string");
    return v.get<std::string>();
}

std::string text_field_or(const json& j, const std::string& key, const std::string& fallback) {
    if (!j.contains(key)) return fallback;
    return text_field(j, key);
}

double number_field(const json& j, const std::string& key) {
    try {
        return parse_double(text_field(j, key));
    } catch (const invalid_input& e) {
        throw config_error("config field '" + key + "': " + e.what());
    }
}

double number_field_or(const json& j, const std::string& key, double fallback) {
    if (!j.contains(key)) return fallback;
    return number_field(j, key);
}

std::size_t count_field_or(const json& j, const std::string& key, std::size_t fallback) {
    if (!j.contains(key)) return fallback;
    const double v = number_field(j, key);
    if (v < 0 || v != std::floor(v)) throw config_error("config field '" + key + "' must be a count");
    return static_cast<std::size_t>(v);
}

std::vector<double> grid_field_or(const json& j, const std::string& key,
                                  std::vector<double> fallback) {
    if (!j.contains(key)) return fallback;
    const json& v = j.at(key);
    if (!v.is_array() || v.empty()) throw config_error("config field '" + key + "' must be a nonempty array");
    std::vector<double> out;
    for (const auto& item : v) {
        if (!item.is_string()) throw config_error("config field '" + key + "' must hold decimal strings");
        try {
            out.push_back(parse_double(item.get<std::string>()));
        } catch (const invalid_input& e) {
            throw config_error("config field '" + key + "': " + e.what());
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Registries
// ---------------------------------------------------------------------------

using Metric = std::function<double(const double&, const double&)>;
using Map = std::function<double(const double&)>;

Metric make_metric(const std::string& name, const json& j) {
    if (name == "euclidean") {
        return [](const double& x, const double& y) { return std::abs(x - y); };
    }
    if (name == "discrete") {
        return [](const double& x, const double& y) { return x == y ? 0.0 : 1.0; };
    }
    if (name == "scaled_euclidean") {
        const double scale = number_field(j, "scale");
        if (!(scale > 0.0)) throw config_error("metric scale must be positive");
        return [scale](const double& x, const double& y) { return scale * std::abs(x - y); };
    }
    throw config_error("unknown metric '" + name + "'");
}

std::function<double(double)> make_vartheta(const std::string& name, const json& j) {
    if (name == "ratio") {
        const double a = number_field_or(j, "a", 1.0);
        if (!(a > 0.0)) throw config_error("vartheta parameter a must be positive");
        return [a](double t) { return t / (a + t); };
    }
    throw config_error("unknown vartheta '" + name + "'");
}

FuzzySpace<double> make_space(const json& j) {
    if (!j.is_object()) throw config_error("space descriptor must be an object");
    const std::string kind = text_field(j, "kind");
    if (kind == "md") {
        const std::string metric = text_field(j, "metric");
        return from_metric<double>(make_metric(metric, j), "md_" + metric);
    }
    if (kind == "exponential") {
        const std::string metric = text_field_or(j, "metric", "euclidean");
        const std::string vartheta = text_field_or(j, "vartheta", "ratio");
        return exponential_space<double>(make_metric(metric, j), make_vartheta(vartheta, j),
                                         "exp_" + metric + "_" + vartheta);
    }
    if (kind == "stationary_ratio") {
        return stationary_ratio_space();
    }
    throw config_error("unknown space kind '" + kind + "'");
}

TNorm make_tnorm(const json& j) {
    if (!j.is_string()) throw config_error("tnorm must be a name string");
    try {
        return builtin_tnorm(j.get<std::string>());
    } catch (const invalid_input& e) {
        throw config_error(e.what());
    }
}

Relation<double> make_relation(const json& j) {
    if (!j.is_object()) throw config_error("relation descriptor must be an object");
    const std::string kind = text_field(j, "kind");
    if (kind == "trivial") return trivial_relation<double>();
    if (kind == "leq_reals") return leq_reals();
    if (kind == "from_alpha") {
        const std::string alpha = text_field(j, "alpha");
        if (alpha == "one") {
            return from_alpha<double>([](const double&, const double&) { return 1.0; }, "alpha_one");
        }
        if (alpha == "leq_indicator") {
            return from_alpha<double>(
                [](const double& x, const double& y) { return x <= y ? 2.0 : 0.0; },
                "alpha_leq_indicator");
        }
        throw config_error("unknown alpha '" + alpha + "'");
    }
    throw config_error("unknown relation kind '" + kind + "'");
}

ThetaComparator make_theta(const json& j) {
    if (!j.is_object()) throw config_error("theta descriptor must be an object");
    const std::string kind = text_field(j, "kind");
    ThetaComparator theta;
    try {
        if (kind == "psi") {
            const std::string name = text_field(j, "psi");
            if (name == "sqrt") {
                theta = theta_from_psi(psi_sqrt());
            } else if (name == "power") {
                theta = theta_from_psi(psi_power(number_field(j, "alpha")));
            } else if (name == "blend") {
                theta = theta_from_psi(psi_blend(number_field(j, "beta")));
            } else {
                throw config_error("unknown psi gauge '" + name + "'");
            }
        } else if (kind == "radu") {
            theta = theta_radu(number_field(j, "k"));
        } else if (kind == "banach") {
            theta = theta_banach(number_field(j, "lambda"));
        } else if (kind == "rho") {
            const std::string name = text_field(j, "rho");
            if (name != "linear") throw config_error("unknown rho '" + name + "'");
            auto rho = rho_linear(number_field(j, "lambda"));
            if (!check_scale_invariance(rho, default_rho_triple_grid()).holds) {
                throw config_error("rho comparator failed the scale-invariance grid check");
            }
            theta = theta_from_rho(rho);
        } else {
            throw config_error("unknown theta kind '" + kind + "'");
        }
    } catch (const invalid_input& e) {
        throw config_error(e.what());
    }
    // Verified-claim flags for the non-psi constructors.
    const auto grid = unit_pair_grid(101);
    check_dominated(theta, grid);
    check_positivity_propagation(theta, grid);
    return theta;
}

Map make_map(const json& j, std::string* label) {
    if (!j.is_object()) throw config_error("map descriptor must be an object");
    const std::string kind = text_field(j, "kind");
    if (kind == "banach_ln") {
        const double lambda = number_field(j, "lambda");
        if (!(lambda >= 0.0 && lambda < 1.0)) throw config_error("banach_ln lambda must lie in [0,1)");
        *label = "banach_ln(" + format_double(lambda) + ")";
        return [lambda](const double& x) { return lambda * std::log1p(x); };
    }
    if (kind == "half") {
        *label = "half";
        return [](const double& x) { return 0.5 * x; };
    }
    if (kind == "identity") {
        *label = "identity";
        return [](const double& x) { return x; };
    }
    if (kind == "square") {
        *label = "square";
        return [](const double& x) { return x * x; };
    }
    if (kind == "affine") {
        const double a = number_field(j, "a");
        const double b = number_field(j, "b");
        *label = "affine(" + format_double(a) + "," + format_double(b) + ")";
        return [a, b](const double& x) { return a * x + b; };
    }
    if (kind == "logistic") {
        const double r = number_field(j, "r");
        *label = "logistic(" + format_double(r) + ")";
        return [r](const double& x) { return r * x * (1.0 - x); };
    }
    throw config_error("unknown map kind '" + kind + "'");
}

std::vector<double> make_points(const json& j, Rng& rng) {
    if (!j.is_object()) throw config_error("points descriptor must be an object");
    const std::string kind = text_field(j, "kind");
    if (kind == "list") {
        const json& values = require_field(j, "values");
        if (!values.is_array()) throw config_error("points values must be an array");
        std::vector<double> out;
        for (const auto& v : values) {
            if (!v.is_string()) throw config_error("points values must be decimal strings");
            out.push_back(parse_double(v.get<std::string>()));
        }
        return out;
    }
    if (kind == "random_uniform") {
        const std::size_t count = count_field_or(j, "count", 20);
        const double lo = number_field_or(j, "lo", 0.0);
        const double hi = number_field_or(j, "hi", 10.0);
        std::vector<double> out;
        out.reserve(count);
        for (std::size_t i = 0; i < count; ++i) out.push_back(rng.uniform(lo, hi));
        return out;
    }
    throw config_error("unknown points kind '" + kind + "'");
}

std::vector<double> make_sequence(const json& j) {
    if (!j.is_object()) throw config_error("sequence descriptor must be an object");
    const std::string kind = text_field(j, "kind");
    const std::size_t n = count_field_or(j, "n_terms", 100);
    if (n < 2) throw config_error("sequence n_terms must be at least 2");
    std::vector<double> out;
    out.reserve(n);
    if (kind == "harmonic_sums") {
        double sum = 0.0;
        for (std::size_t i = 1; i <= n; ++i) {
            sum += 1.0 / static_cast<double>(i);
            out.push_back(sum);
        }
        return out;
    }
    if (kind == "reciprocal") {
        for (std::size_t i = 1; i <= n; ++i) out.push_back(1.0 / static_cast<double>(i));
        return out;
    }
    if (kind == "arithmetic") {
        const double step = number_field_or(j, "step", 1.0);
        for (std::size_t i = 0; i < n; ++i) out.push_back(step * static_cast<double>(i));
        return out;
    }
    if (kind == "picard") {
        std::string label;
        const Map map = make_map(require_field(j, "map"), &label);
        const double x0 = number_field(j, "x0");
        return picard<double>(map, x0, n, label).points;
    }
    throw config_error("unknown sequence kind '" + kind + "'");
}

// ---------------------------------------------------------------------------
// Output plumbing
// ---------------------------------------------------------------------------

std::filesystem::path resolve_out(const Invocation& inv, const std::string& filename) {
    std::filesystem::create_directories(inv.out_dir);
    return std::filesystem::path(inv.out_dir) / filename;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw config_error("cannot open output file " + path.string());
    out << text;
}

void write_report(const std::filesystem::path& path, const json& report) {
    write_text(path, report.dump(2) + "\n");
}

json base_report(const char* command, const json& config, const Invocation& inv) {
    json report;
    report["command"] = command;
    report["config"] = config;
    report["seed"] = std::to_string(inv.seed);
    return report;
}

template <class P>
json witness_json(const AxiomWitness<P>& w) {
    json out;
    out["x"] = point_traits<P>::to_string(w.x);
    out["y"] = point_traits<P>::to_string(w.y);
    if (w.z) out["z"] = point_traits<P>::to_string(*w.z);
    out["t"] = format_double(w.t);
    out["s"] = format_double(w.s);
    return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// verify-space
// ---------------------------------------------------------------------------

int cmd_verify_space(const json& config, const Invocation& inv) {
    const auto space = make_space(require_field(config, "space"));
    const auto norm = make_tnorm(require_field(config, "tnorm"));

    std::vector<Axiom> which;
    if (config.contains("axioms")) {
        const json& axioms = config.at("axioms");
        if (!axioms.is_array() || axioms.empty()) throw config_error("axioms must be a nonempty array");
        for (const auto& a : axioms) {
            if (!a.is_string()) throw config_error("axiom names must be strings");
            const auto parsed = axiom_from_string(a.get<std::string>());
            if (!parsed) throw config_error("unknown axiom '" + a.get<std::string>() + "'");
            which.push_back(*parsed);
        }
    } else {
        which = km_axioms();
        which.push_back(Axiom::monotone_in_t);
    }

    Rng rng(inv.seed);
    const auto points = make_points(
        config.contains("points")
            ? config.at("points")
            : json{{"kind", "list"}, {"values", json::array({"0", "1", "2"})}},
        rng);
    const auto t_grid = grid_field_or(config, "t_grid", default_t_grid());
    const double tolerance = inv.tol_override.value_or(
        number_field_or(config, "tolerance", kDefaultTolerance));

    json report = base_report("verify-space", config, inv);
    report["space"] = space.label;
    bool all_passed = true;
    json entries = json::array();
    try {
        const auto reports = verify_axioms<double>(space, norm, points, t_grid, which, tolerance);
        for (const auto& r : reports) {
            json entry;
            entry["axiom"] = std::string(to_string(r.axiom));
            entry["verdict"] = std::string(to_string(r.verdict));
            if (r.witness) entry["witness"] = witness_json(*r.witness);
            if (r.verdict != Verdict::pass_on_grid) all_passed = false;
            entries.push_back(std::move(entry));
        }
    } catch (const invalid_input& e) {
        report["error"] = e.what();
        write_report(resolve_out(inv, text_field_or(config.contains("output") ? config.at("output") : json::object(),
                                                    "report", "verify_space.json")),
                     report);
        std::cerr << "verify-space: " << e.what() << "\n";
        return kExitFailure;
    }
    report["reports"] = std::move(entries);
    report["all_passed"] = all_passed;

    const json output = config.contains("output") ? config.at("output") : json::object();
    write_report(resolve_out(inv, text_field_or(output, "report", "verify_space.json")), report);
    return all_passed ? kExitSuccess : kExitFailure;
}

// ---------------------------------------------------------------------------
// verify-tnorm
// ---------------------------------------------------------------------------

int cmd_verify_tnorm(const json& config, const Invocation& inv) {
    const auto norm = make_tnorm(require_field(config, "tnorm"));
    const std::size_t grid_points = count_field_or(config, "grid_points", 21);
    if (grid_points < 2) throw config_error("grid_points must be at least 2");
    const auto s_grid = grid_field_or(config, "s_grid", {0.0, 0.25, 0.5, 0.75, 1.0});
    const double n_max_value = number_field_or(config, "n_max", 2147483648.0);
    if (n_max_value < 2) throw config_error("n_max must be at least 2");
    const auto n_max = static_cast<std::uint64_t>(n_max_value);
    const double tolerance = inv.tol_override.value_or(
        number_field_or(config, "tolerance", kDefaultTolerance));

    json report = base_report("verify-tnorm", config, inv);
    bool all_passed = true;

    json axioms = json::array();
    for (const auto& r : check_tnorm_axioms(norm, linspace(0.0, 1.0, grid_points))) {
        json entry;
        entry["axiom"] = std::string(to_string(r.axiom));
        entry["holds"] = r.holds;
        if (r.witness) {
            entry["witness"]["t"] = format_double(r.witness->t);
            entry["witness"]["s"] = format_double(r.witness->s);
            if (r.witness_third) entry["witness"]["third"] = format_double(*r.witness_third);
        }
        if (!r.holds) all_passed = false;
        axioms.push_back(std::move(entry));
    }
    report["axioms"] = std::move(axioms);

    const auto pair_grid = unit_pair_grid(grid_points);
    const auto above_drastic = check_order(builtin_tnorm("drastic"), norm, pair_grid);
    const auto below_minimum = check_order(norm, builtin_tnorm("minimum"), pair_grid);
    report["order"]["above_drastic"] = above_drastic.holds;
    report["order"]["below_minimum"] = below_minimum.holds;
    if (!above_drastic.holds || !below_minimum.holds) all_passed = false;

    const auto boundary = check_boundary_continuity(norm, s_grid, n_max, tolerance);
    report["boundary_continuity"]["holds"] = boundary.holds;
    report["boundary_continuity"]["n_max"] = std::to_string(boundary.n_max);
    report["boundary_continuity"]["s_samples"] = std::to_string(boundary.s_samples);
    if (boundary.witness_s) report["boundary_continuity"]["witness_s"] = format_double(*boundary.witness_s);
    if (!boundary.holds) all_passed = false;

    report["all_passed"] = all_passed;
    const json output = config.contains("output") ? config.at("output") : json::object();
    write_report(resolve_out(inv, text_field_or(output, "report", "verify_tnorm.json")), report);
    return all_passed ? kExitSuccess : kExitFailure;
}

// ---------------------------------------------------------------------------
// solve
// ---------------------------------------------------------------------------

namespace {

SolveOptions<double> make_solve_options(const json& config, const Invocation& inv) {
    SolveOptions<double> opts;
    const json options = config.contains("options") ? config.at("options") : json::object();
    opts.max_iterations = count_field_or(options, "max_iterations", 200);
    opts.tolerance = number_field_or(options, "tolerance", 1e-8);
    opts.t_grid = grid_field_or(options, "t_grid", default_t_grid());
    opts.eps_grid = grid_field_or(options, "eps_grid", default_eps_grid());
    opts.convergence_window = count_field_or(options, "window", 20);
    const std::string variant = text_field_or(options, "variant", "type1");
    if (variant == "type1") {
        opts.variant = SolveVariant::type1;
    } else if (variant == "type2") {
        opts.variant = SolveVariant::type2;
    } else {
        throw config_error("unknown variant '" + variant + "'");
    }
    const std::string mode = text_field_or(options, "termination_mode", "a");
    if (mode == "a") {
        opts.termination_mode = TerminationMode::a_continuity;
    } else if (mode == "b") {
        opts.termination_mode = TerminationMode::b_regular_f5;
    } else if (mode == "c") {
        opts.termination_mode = TerminationMode::c_regular_dominated;
    } else {
        throw config_error("unknown termination_mode '" + mode + "'");
    }
    if (inv.max_iter_override) opts.max_iterations = *inv.max_iter_override;
    if (inv.tol_override) opts.tolerance = *inv.tol_override;
    return opts;
}

json probe_side_json(const ProbeSide& side) {
    json out;
    out["margin_audit_passed"] = side.margin_audit_passed;
    out["converged"] = side.converged;
    if (side.first_failure_row) out["first_failure_row"] = std::to_string(*side.first_failure_row);
    if (side.first_failure_t) out["first_failure_t"] = format_double(*side.first_failure_t);
    return out;
}

}  // namespace

int cmd_solve(const json& config, const Invocation& inv) {
    const auto space = make_space(require_field(config, "space"));
    const auto norm = make_tnorm(require_field(config, "tnorm"));
    const auto rel = make_relation(
        config.contains("relation") ? config.at("relation") : json{{"kind", "trivial"}});
    const auto theta = make_theta(require_field(config, "theta"));
    std::string map_name;
    const auto map = make_map(require_field(config, "map"), &map_name);
    const double x0 = number_field(config, "x0");
    const auto opts = make_solve_options(config, inv);

    const auto result = solve<double>(space, norm, rel, theta, map, x0, opts);

    json report = base_report("solve", config, inv);
    report["space"] = space.label;
    report["map"] = map_name;
    report["theta"] = theta.label;
    report["outcome"] = std::string(to_string(result.outcome));
    report["iterations"] = std::to_string(result.iterations);
    report["trace_rows"] = std::to_string(result.trace.rows.size());
    if (result.fixed_point) report["fixed_point"] = format_double(*result.fixed_point);
    if (!result.violated_hypothesis.empty()) {
        report["violated_hypothesis"] = result.violated_hypothesis;
        if (result.violation_row) report["violation_row"] = std::to_string(*result.violation_row);
    }
    report["assumed_hypotheses"] = result.assumed_hypotheses;

    if (config.contains("uniqueness")) {
        const json& probe_cfg = config.at("uniqueness");
        try {
            const auto probe = uniqueness_probe<double>(
                space, norm, rel, theta, map, number_field(probe_cfg, "fp_a"),
                number_field(probe_cfg, "fp_b"), number_field(probe_cfg, "bridge"), opts);
            json pj;
            pj["toward_a"] = probe_side_json(probe.toward_a);
            pj["toward_b"] = probe_side_json(probe.toward_b);
            pj["fixed_points_equal"] = probe.fixed_points_equal;
            pj["unique_supported"] = probe.unique_supported;
            pj["orbit_length"] = std::to_string(probe.orbit_length);
            json degrees = json::array();
            for (std::size_t i = 0; i < probe.t_grid.size(); ++i) {
                degrees.push_back(json{{"t", format_double(probe.t_grid[i])},
                                       {"M", format_double(probe.discrepancy[i])}});
            }
            pj["discrepancy"] = std::move(degrees);
            report["uniqueness"] = std::move(pj);
        } catch (const invalid_input& e) {
            report["uniqueness"] = json{{"error", e.what()}};
        }
    }

    const json output = config.contains("output") ? config.at("output") : json::object();
    write_report(resolve_out(inv, text_field_or(output, "report", "solve.json")), report);
    write_text(resolve_out(inv, text_field_or(output, "trace", "trace.csv")),
               trace_csv(result.trace));

    switch (result.outcome) {
        case SolveOutcome::fixed_point: return kExitSuccess;
        case SolveOutcome::hypothesis_violation: return kExitFailure;
        case SolveOutcome::nonconvergent: return kExitNoResult;
    }
    return kExitFailure;
}

// ---------------------------------------------------------------------------
// nc-demo
// ---------------------------------------------------------------------------

int cmd_nc_demo(const json& config, const Invocation& inv) {
    const auto space = make_space(require_field(config, "space"));
    const auto seq = make_sequence(require_field(config, "sequence"));
    const auto eps_grid = grid_field_or(config, "eps_grid", nc_eps_grid());
    const auto t_grid = grid_field_or(config, "t_grid", default_t_grid());
    const double tolerance = inv.tol_override.value_or(
        number_field_or(config, "tolerance", kDefaultTolerance));

    json report = base_report("nc-demo", config, inv);
    report["space"] = space.label;
    report["sequence_length"] = std::to_string(seq.size());
    const json output = config.contains("output") ? config.at("output") : json::object();
    const auto report_path = resolve_out(inv, text_field_or(output, "report", "nc.json"));

    std::optional<NCWitness> witness;
    try {
        witness = extract_nc_witness<double>(space, seq, eps_grid, t_grid, tolerance);
    } catch (const invalid_input& e) {
        report["error"] = e.what();
        report["found"] = false;
        write_report(report_path, report);
        std::cerr << "nc-demo: " << e.what() << "\n";
        return kExitFailure;
    }

    if (!witness) {
        report["found"] = false;
        write_report(report_path, report);
        return kExitNoResult;
    }

    const bool verified = verify_nc_witness<double>(space, seq, *witness);
    report["found"] = true;
    report["invariants_verified"] = verified;
    report["eps0"] = format_double(witness->eps0);
    report["t0"] = format_double(witness->t0);
    report["entries"] = std::to_string(witness->nk.size());
    report["limit_gap_outer"] = format_double(witness->limit_gap_outer);
    report["limit_gap_inner"] = format_double(witness->limit_gap_inner);
    json weak = json::array();
    for (const auto& pair : witness->weak_form_pairs) {
        weak.push_back(json{{"eps", format_double(pair.eps)}, {"t", format_double(pair.t)}});
    }
    report["weak_form_pairs"] = std::move(weak);

    write_report(report_path, report);
    write_text(resolve_out(inv, text_field_or(output, "witness", "nc_witness.csv")),
               nc_witness_csv(*witness));
    return verified ? kExitSuccess : kExitFailure;
}

// ---------------------------------------------------------------------------
// report: batch runner with isolated outputs
// ---------------------------------------------------------------------------

namespace {

int dispatch(const std::string& command, const json& config, const Invocation& inv) {
    if (command == "verify-space") return cmd_verify_space(config, inv);
    if (command == "verify-tnorm") return cmd_verify_tnorm(config, inv);
    if (command == "solve") return cmd_solve(config, inv);
    if (command == "nc-demo") return cmd_nc_demo(config, inv);
    throw config_error("unknown command '" + command + "'");
}

}  // namespace

int cmd_report(const json& config, const Invocation& inv) {
    const json& experiments = require_field(config, "experiments");
    if (!experiments.is_array() || experiments.empty()) {
        throw config_error("experiments must be a nonempty array");
    }

    struct Entry {
        std::string name;
        std::string command;
        json cfg;
    };
    std::vector<Entry> entries;
    for (const auto& item : experiments) {
        Entry entry;
        entry.name = text_field(item, "name");
        entry.command = text_field(item, "command");
        entry.cfg = item;
        entry.cfg.erase("name");
        entry.cfg.erase("command");
        for (const auto& other : entries) {
            if (other.name == entry.name) throw config_error("duplicate experiment name '" + entry.name + "'");
        }
        entries.push_back(std::move(entry));
    }

    // Experiments run concurrently; outputs stay isolated per subdirectory.
    std::vector<std::future<int>> futures;
    futures.reserve(entries.size());
    for (const auto& entry : entries) {
        futures.push_back(std::async(std::launch::async, [&entry, &inv]() {
            Invocation sub = inv;
            sub.out_dir = (std::filesystem::path(inv.out_dir) / entry.name).string();
            try {
                return dispatch(entry.command, entry.cfg, sub);
            } catch (const config_error& e) {
                std::cerr << entry.name << ": " << e.what() << "\n";
                return kExitConfigError;
            }
        }));
    }

    json summary = base_report("report", config, inv);
    json rows = json::array();
    bool any_config = false, any_failure = false, any_noresult = false;
    for (std::size_t i = 0; i < entries.size(); ++i) {
        const int code = futures[i].get();
        rows.push_back(json{{"name", entries[i].name},
                            {"command", entries[i].command},
                            {"exit_code", std::to_string(code)}});
        if (code == kExitConfigError) any_config = true;
        if (code == kExitFailure) any_failure = true;
        if (code == kExitNoResult) any_noresult = true;
    }
    summary["experiments"] = std::move(rows);
    const int code = any_config ? kExitConfigError
                     : any_failure ? kExitFailure
                     : any_noresult ? kExitNoResult
                                    : kExitSuccess;
    summary["exit_code"] = std::to_string(code);
    write_report(resolve_out(inv, "report.json"), summary);
    return code;
}

// ---------------------------------------------------------------------------
// Argument parsing
// ---------------------------------------------------------------------------

namespace {

json load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw config_error("cannot open config file " + path);
    json config;
    try {
        in >> config;
    } catch (const json::exception& e) {
        throw config_error(std::string("config is not valid JSON: ") + e.what());
    }
    if (!config.is_object()) throw config_error("config root must be an object");
    return config;
}

struct CommandSpec {
    std::string name;
    int (*handler)(const json&, const Invocation&);
};

}  // namespace

int run(std::vector<std::string> args) {
    CLI::App app{"fuzzy metric space toolkit: sampled verification and fixed-point runs"};
    app.require_subcommand(1);

    const std::vector<CommandSpec> commands = {
        {"verify-space", &cmd_verify_space}, {"verify-tnorm", &cmd_verify_tnorm},
        {"solve", &cmd_solve},               {"nc-demo", &cmd_nc_demo},
        {"report", &cmd_report},
    };

    std::string config_path;
    Invocation inv;
    std::size_t max_iter = 0;
    double tol = 0.0;

    std::vector<CLI::App*> subs;
    for (const auto& command : commands) {
        CLI::App* sub = app.add_subcommand(command.name);
        sub->add_option("--config", config_path, "experiment configuration (JSON)")->required();
        sub->add_option("--out", inv.out_dir, "output directory");
        sub->add_option("--seed", inv.seed, "seed for randomized grids");
        sub->add_option("--max-iter", max_iter, "override options.max_iterations");
        sub->add_option("--tol", tol, "override the tolerance");
        subs.push_back(sub);
    }

    std::reverse(args.begin(), args.end());
    try {
        app.parse(args);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitSuccess : kExitConfigError;
    }

    for (std::size_t i = 0; i < commands.size(); ++i) {
        if (!subs[i]->parsed()) continue;
        if (subs[i]->count("--max-iter") > 0) inv.max_iter_override = max_iter;
        if (subs[i]->count("--tol") > 0) inv.tol_override = tol;
        try {
            return commands[i].handler(load_config(config_path), inv);
        } catch (const config_error& e) {
            std::cerr << commands[i].name << ": " << e.what() << "\n";
            return kExitConfigError;
        } catch (const invalid_input& e) {
            std::cerr << commands[i].name << ": " << e.what() << "\n";
            return kExitFailure;
        }
    }
    return kExitConfigError;
}

int run(int argc, char** argv) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return run(std::move(args));
}

}  // namespace fms::cli
