#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "fms/common.hpp"
#include "fms/contraction.hpp"
#include "fms/fuzzy_space.hpp"
#include "fms/point_traits.hpp"
#include "fms/relation.hpp"
#include "fms/sequences.hpp"

namespace fms {

enum class SolveVariant { type1, type2 };

inline std::string_view to_string(SolveVariant v) {
    return v == SolveVariant::type1 ? "type1" : "type2";
}

/// How a detected limit is certified to be fixed. Iteration is identical in
/// all three modes; only the final audit differs.
enum class TerminationMode { a_continuity, b_regular_f5, c_regular_dominated };

inline std::string_view to_string(TerminationMode m) {
    switch (m) {
        case TerminationMode::a_continuity: return "a_continuity";
        case TerminationMode::b_regular_f5: return "b_regular_f5";
        case TerminationMode::c_regular_dominated: return "c_regular_dominated";
    }
    return "?";
}

template <class P>
struct SolveOptions {
    std::size_t max_iterations = 200;
    std::vector<double> t_grid = default_t_grid();
    std::vector<double> eps_grid = default_eps_grid();
    double tolerance = 1e-8;
    SolveVariant variant = SolveVariant::type1;
    TerminationMode termination_mode = TerminationMode::a_continuity;
    std::size_t convergence_window = 20;
    /// Extra pairs for the upfront contractivity audit, on top of the pairs
    /// synthesized from the orbit prefix (and, for scalar domains, a couple
    /// of deterministic forward offsets from x0).
    std::vector<std::pair<P, P>> audit_pairs;
};

template <class P>
struct TraceRow {
    std::size_t n = 0;
    P x;
    std::vector<double> m;       // M(x_n, x_{n+1}, t) per grid t
    std::vector<double> margin;  // theta margin per grid t; NaN where not audited
    bool relation_ok = false;    // x_n S x_{n+1}
    bool strict_pair = false;    // x_n S* x_{n+1} and x_{n+1} S* x_{n+2}
};

template <class P>
struct SolveTrace {
    std::vector<double> t_grid;
    std::vector<TraceRow<P>> rows;  // contiguous from 0
};

enum class SolveOutcome { fixed_point, nonconvergent, hypothesis_violation };

inline std::string_view to_string(SolveOutcome o) {
    switch (o) {
        case SolveOutcome::fixed_point: return "fixed_point";
        case SolveOutcome::nonconvergent: return "nonconvergent";
        case SolveOutcome::hypothesis_violation: return "hypothesis_violation";
    }
    return "?";
}

template <class P>
struct SolveResult {
    SolveOutcome outcome = SolveOutcome::nonconvergent;
    std::optional<P> fixed_point;
    std::string violated_hypothesis;           // named clause, when violated
    std::optional<std::size_t> violation_row;
    SolveTrace<P> trace;
    std::vector<std::string> assumed_hypotheses;  // not auditable from samples
    std::size_t iterations = 0;                   // row index at termination
};

/// CSV export of a trace: n, x_n, then per-t columns M_t<value> and
/// margin_t<value>.
template <class P>
std::string trace_csv(const SolveTrace<P>& trace) {
    std::string out = "n,x_n";
    for (double t : trace.t_grid) out += ",M_t" + format_double(t);
    for (double t : trace.t_grid) out += ",margin_t" + format_double(t);
    out += '\n';
    for (const TraceRow<P>& row : trace.rows) {
        out += std::to_string(row.n);
        out += ',';
        out += point_traits<P>::to_string(row.x);
        for (double v : row.m) out += "," + format_double(v);
        for (double v : row.margin) out += "," + (std::isnan(v) ? std::string("nan") : format_double(v));
        out += '\n';
    }
    return out;
}

namespace detail {

template <class P>
std::vector<P> default_audit_points(const std::vector<P>& orbit_prefix, const P& x0) {
    std::vector<P> points;
    for (const P& p : orbit_prefix) {
        bool seen = false;
        for (const P& q : points) {
            if (q == p) {
                seen = true;
                break;
            }
        }
        if (!seen) points.push_back(p);
    }
    if constexpr (std::is_floating_point_v<P>) {
        // Forward offsets only, so maps defined on a half line stay in domain.
        const P scale = std::max(P(1), std::abs(x0));
        points.push_back(x0 + P(0.5) * scale);
        points.push_back(x0 + scale);
    }
    return points;
}

}  // namespace detail

/// Guided Picard iteration with inline hypothesis auditing.
///
/// Preconditions audited before iterating: x0 S T x0; for the type-2 variant
/// a positivity-propagating comparator and M(x0, Tx0, t) > 0 on the grid;
/// transitivity and map monotonicity of the relation on orbit samples; a
/// contractivity spot check over sampled pairs. Violations surface as
/// hypothesis_violation naming the clause, never as exceptions.
///
/// During iteration every audited margin theta(M(x_{n+1}, x_{n+2}, t),
/// M(x_n, x_{n+1}, t)) must stay above -tolerance, and in a type-2 run the
/// step degrees must stay positive. The orbit terminates through one of:
/// exact eventual constancy (the tail value is the fixed point), empirical
/// convergence (the last convergence_window points are pairwise within
/// tolerance of degree 1 and the point residuals have stabilized, after
/// which the candidate is certified per the termination mode), or an
/// exhausted budget (nonconvergent; never guessed past max_iterations).
template <class P>
SolveResult<P> solve(const FuzzySpace<P>& space,
                     const TNorm& norm,
                     const Relation<P>& rel,
                     const ThetaComparator& theta,
                     const std::function<P(const P&)>& map,
                     const P& x0,
                     const SolveOptions<P>& opts) {
    SolveResult<P> result;
    result.trace.t_grid = opts.t_grid;

    result.assumed_hypotheses.push_back("T(X) is (S,M)-strictly-increasing-precomplete");
    result.assumed_hypotheses.push_back("(X, M) satisfies the non-Cauchy interleaving property");
    if (norm.continuity_class == ContinuityClass::unknown) {
        result.assumed_hypotheses.push_back("t-norm continuity at the 1-boundary (class unknown for '" +
                                            norm.name + "')");
    }
    if (opts.variant == SolveVariant::type2) {
        result.assumed_hypotheses.push_back(
            "precompleteness read with respect to M (statement writes the metric there)");
    }
    switch (opts.termination_mode) {
        case TerminationMode::a_continuity:
            result.assumed_hypotheses.push_back("T is S-strictly-increasing-continuous (mode a)");
            break;
        case TerminationMode::b_regular_f5:
            result.assumed_hypotheses.push_back("space regularity and condition f5 (mode b)");
            break;
        case TerminationMode::c_regular_dominated:
            result.assumed_hypotheses.push_back("space regularity (mode c)");
            break;
    }

    auto violate = [&](std::string clause, std::optional<std::size_t> row = std::nullopt) {
        result.outcome = SolveOutcome::hypothesis_violation;
        result.violated_hypothesis = std::move(clause);
        result.violation_row = row;
        return result;
    };

    if (opts.termination_mode == TerminationMode::c_regular_dominated && !theta.dominated) {
        return violate("dominated comparator unverified (termination mode c)");
    }
    if (opts.variant == SolveVariant::type2 && !theta.positivity_propagating) {
        return violate("positivity propagation (34) unverified for theta");
    }

    std::vector<P> orbit;
    orbit.push_back(x0);
    std::size_t applications = 0;
    auto extend_to = [&](std::size_t size) {
        while (orbit.size() < size && applications < opts.max_iterations) {
            orbit.push_back(map(orbit.back()));
            ++applications;
        }
        return orbit.size() >= size;
    };

    if (!extend_to(2)) return violate("iteration budget cannot reach T x0");
    if (!rel.holds(orbit[0], orbit[1])) return violate("x0 S Tx0");
    if (opts.variant == SolveVariant::type2) {
        for (double t : opts.t_grid) {
            if (t <= 0.0) continue;
            if (!(space.eval(orbit[0], orbit[1], t) > 0.0)) {
                return violate("positivity at x0");
            }
        }
    }

    extend_to(8);
    std::vector<P> sample = detail::default_audit_points(orbit, x0);
    if (sample.size() >= 3) {
        auto transitivity = is_transitive<P>(rel, sample);
        if (!transitivity.holds) return violate("transitivity");
    }
    auto monotone = nondecreasing_map<P>(rel, map, sample);
    if (!monotone.holds) return violate("nondecreasing");

    std::vector<std::pair<P, P>> audit_pairs = opts.audit_pairs;
    for (std::size_t i = 0; i < sample.size(); ++i) {
        for (std::size_t j = 0; j < sample.size(); ++j) {
            if (i != j) audit_pairs.emplace_back(sample[i], sample[j]);
        }
    }
    const auto spot = opts.variant == SolveVariant::type1
                          ? check_f4<P>(theta, space, rel, map, audit_pairs, opts.t_grid, opts.tolerance)
                          : check_f4_tilde<P>(theta, space, rel, map, audit_pairs, opts.t_grid,
                                              opts.tolerance);
    if (spot.verdict == ContractionVerdict::f1_violation) {
        return violate("F1: comparator arguments left B on sampled pairs");
    }
    if (spot.verdict == ContractionVerdict::f4_violation) {
        return violate("F4");
    }

    const double nan = std::numeric_limits<double>::quiet_NaN();
    const std::size_t window = std::max<std::size_t>(2, opts.convergence_window);

    for (std::size_t n = 0;; ++n) {
        if (!extend_to(n + 2)) break;  // budget exhausted before x_{n+1}
        const bool has_lookahead = extend_to(n + 3);

        TraceRow<P> row;
        row.n = n;
        row.x = orbit[n];
        row.relation_ok = rel.holds(orbit[n], orbit[n + 1]);
        row.m.reserve(opts.t_grid.size());
        for (double t : opts.t_grid) {
            row.m.push_back(t > 0.0 ? space.eval(orbit[n], orbit[n + 1], t) : 0.0);
        }
        row.margin.assign(opts.t_grid.size(), nan);

        if (!row.relation_ok) {
            result.trace.rows.push_back(std::move(row));
            return violate("nondecreasing", n);
        }
        if (opts.variant == SolveVariant::type2) {
            for (std::size_t ti = 0; ti < opts.t_grid.size(); ++ti) {
                if (opts.t_grid[ti] > 0.0 && !(row.m[ti] > 0.0)) {
                    result.trace.rows.push_back(std::move(row));
                    return violate("positivity propagation broke along the orbit", n);
                }
            }
        }

        const bool constant_here = orbit[n + 1] == orbit[n];
        if (has_lookahead && !constant_here) {
            row.strict_pair = rel.strict(orbit[n], orbit[n + 1]) &&
                              rel.strict(orbit[n + 1], orbit[n + 2]);
            if (row.strict_pair) {
                for (std::size_t ti = 0; ti < opts.t_grid.size(); ++ti) {
                    const double t = opts.t_grid[ti];
                    if (t <= 0.0) continue;
                    const double source = row.m[ti];
                    if (opts.variant == SolveVariant::type2 && !(source > 0.0)) continue;
                    const double image = space.eval(orbit[n + 1], orbit[n + 2], t);
                    if (!theta.in_domain(image, source)) {
                        result.trace.rows.push_back(std::move(row));
                        return violate("F1: comparator arguments left B along the orbit", n);
                    }
                    const double v = theta.value(image, source);
                    row.margin[ti] = v;
                    if (v < -opts.tolerance) {
                        result.trace.rows.push_back(std::move(row));
                        return violate("F4", n);
                    }
                }
            }
        }
        result.trace.rows.push_back(std::move(row));

        if (constant_here) {
            PicardOrbit<P> packaged;
            packaged.points = orbit;
            packaged.points.resize(n + 2);
            packaged.map_label = "T";
            packaged.classification = OrbitClass::eventually_constant;
            const P z = *extract_fixed_point_if_constant(packaged);
            for (double t : opts.t_grid) {
                if (t <= 0.0) continue;
                if (!(space.eval(z, z, t) > 1.0 - opts.tolerance)) {
                    return violate("self-degree below 1 at the fixed point (km2)", n);
                }
            }
            result.outcome = SolveOutcome::fixed_point;
            result.fixed_point = z;
            result.iterations = n;
            return result;
        }

        if (orbit.size() >= window) {
            const std::size_t w0 = orbit.size() - window;
            bool settled = true;
            for (std::size_t i = w0; settled && i + 1 < orbit.size(); ++i) {
                if (point_traits<P>::residual(orbit[i], orbit[i + 1]) > opts.tolerance) settled = false;
            }
            for (std::size_t i = w0; settled && i < orbit.size(); ++i) {
                for (std::size_t j = i + 1; settled && j < orbit.size(); ++j) {
                    for (double t : opts.t_grid) {
                        if (t <= 0.0) continue;
                        if (!(space.eval(orbit[i], orbit[j], t) > 1.0 - opts.tolerance)) {
                            settled = false;
                            break;
                        }
                    }
                }
            }
            if (settled) {
                const P z = orbit.back();
                const P tz = map(z);
                bool certified = point_traits<P>::residual(tz, z) <= opts.tolerance;
                for (double t : opts.t_grid) {
                    if (!certified) break;
                    if (t <= 0.0) continue;
                    if (!(space.eval(z, tz, t) > 1.0 - opts.tolerance)) certified = false;
                }
                if (certified && opts.termination_mode != TerminationMode::a_continuity) {
                    // Case (b)/(c): additionally audit the margins between the
                    // orbit tail and the candidate limit.
                    for (std::size_t i = w0; certified && i + 1 < orbit.size(); ++i) {
                        if (!(rel.strict(orbit[i], z) && rel.strict(orbit[i + 1], tz))) continue;
                        for (double t : opts.t_grid) {
                            if (t <= 0.0) continue;
                            const double source = space.eval(orbit[i], z, t);
                            if (opts.variant == SolveVariant::type2 && !(source > 0.0)) continue;
                            const double image = space.eval(orbit[i + 1], tz, t);
                            if (!theta.in_domain(image, source) ||
                                theta.value(image, source) < -opts.tolerance) {
                                certified = false;
                                break;
                            }
                        }
                    }
                }
                if (certified) {
                    result.outcome = SolveOutcome::fixed_point;
                    result.fixed_point = z;
                    result.iterations = n;
                    return result;
                }
            }
        }
    }

    result.outcome = SolveOutcome::nonconvergent;
    result.iterations = result.trace.rows.size();
    return result;
}

// ---------------------------------------------------------------------------
// Uniqueness probing
// ---------------------------------------------------------------------------

struct ProbeSide {
    bool margin_audit_passed = true;
    std::optional<std::size_t> first_failure_row;
    std::optional<double> first_failure_t;
    bool converged = false;
};

template <class P>
struct UniquenessReport {
    ProbeSide toward_a, toward_b;
    std::vector<double> t_grid;
    std::vector<double> discrepancy;  // M(fp_a, fp_b, t) per grid t
    bool fixed_points_equal = false;
    bool unique_supported = false;  // bridge orbit converged to both
    std::size_t orbit_length = 0;
};

/// Iterates the Picard orbit of a bridge point that is comparable to both
/// candidate fixed points, auditing the margins
/// theta(M(z_{n+1}, fp, t), M(z_n, fp, t)) >= 0 toward each of them, and
/// reports whether the orbit empirically converges to both (which supports
/// fp_a = fp_b) together with the direct degrees M(fp_a, fp_b, t).
template <class P>
UniquenessReport<P> uniqueness_probe(const FuzzySpace<P>& space,
                                     const TNorm& norm,
                                     const Relation<P>& rel,
                                     const ThetaComparator& theta,
                                     const std::function<P(const P&)>& map,
                                     const P& fp_a,
                                     const P& fp_b,
                                     const P& bridge,
                                     const SolveOptions<P>& opts) {
    (void)norm;
    if (point_traits<P>::residual(map(fp_a), fp_a) > opts.tolerance) {
        throw invalid_input("uniqueness_probe: fp_a is not fixed within tolerance");
    }
    if (point_traits<P>::residual(map(fp_b), fp_b) > opts.tolerance) {
        throw invalid_input("uniqueness_probe: fp_b is not fixed within tolerance");
    }
    if (!comparable(rel, bridge, fp_a) || !comparable(rel, bridge, fp_b)) {
        throw invalid_input("uniqueness_probe: bridge point is not comparable to both fixed points");
    }

    std::vector<P> orbit;
    orbit.push_back(bridge);
    for (std::size_t i = 0; i < opts.max_iterations; ++i) {
        orbit.push_back(map(orbit.back()));
        if (orbit.size() >= 2 && orbit[orbit.size() - 1] == orbit[orbit.size() - 2]) break;
    }

    UniquenessReport<P> report;
    report.t_grid = opts.t_grid;
    report.orbit_length = orbit.size();
    report.fixed_points_equal = point_traits<P>::equal(fp_a, fp_b);

    auto audit_side = [&](const P& fp) {
        ProbeSide side;
        for (std::size_t nrow = 0; nrow + 1 < orbit.size(); ++nrow) {
            if (!(rel.strict(orbit[nrow], fp) && rel.strict(orbit[nrow + 1], fp))) continue;
            for (double t : opts.t_grid) {
                if (t <= 0.0) continue;
                const double source = space.eval(orbit[nrow], fp, t);
                const double image = space.eval(orbit[nrow + 1], fp, t);
                if (!theta.in_domain(image, source) || theta.value(image, source) < -opts.tolerance) {
                    side.margin_audit_passed = false;
                    side.first_failure_row = nrow;
                    side.first_failure_t = t;
                    return side;
                }
            }
        }
        return side;
    };
    report.toward_a = audit_side(fp_a);
    report.toward_b = audit_side(fp_b);

    const std::size_t window = orbit.size() / 2;
    report.toward_a.converged =
        empirically_convergent<P>(space, orbit, fp_a, opts.eps_grid, opts.t_grid, window).holds;
    report.toward_b.converged =
        empirically_convergent<P>(space, orbit, fp_b, opts.eps_grid, opts.t_grid, window).holds;

    for (double t : opts.t_grid) {
        report.discrepancy.push_back(t > 0.0 ? space.eval(fp_a, fp_b, t) : 0.0);
    }
    report.unique_supported = report.toward_a.converged && report.toward_b.converged;
    return report;
}

}  // namespace fms
