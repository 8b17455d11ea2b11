#include "fms/tnorm.hpp"

#include <algorithm>
#include <cmath>

namespace fms {

std::string_view to_string(ContinuityClass c) {
    switch (c) {
        case ContinuityClass::continuous: return "continuous";
        case ContinuityClass::one_boundary_continuous: return "one_boundary_continuous";
        case ContinuityClass::unknown: return "unknown";
    }
    return "unknown";
}

std::string_view to_string(TNormAxiom a) {
    switch (a) {
        case TNormAxiom::unit: return "unit";
        case TNormAxiom::commutativity: return "commutativity";
        case TNormAxiom::associativity: return "associativity";
        case TNormAxiom::monotonicity: return "monotonicity";
    }
    return "?";
}

TNorm builtin_tnorm(std::string_view name) {
    if (name == "product") {
        return {"product", [](double t, double s) { return t * s; }, ContinuityClass::continuous};
    }
    if (name == "lukasiewicz") {
        // t + (s - 1) keeps the unit element exact: apply(t, 1) == t bitwise.
        return {"lukasiewicz", [](double t, double s) { return std::max(0.0, t + (s - 1.0)); },
                ContinuityClass::continuous};
    }
    if (name == "minimum") {
        return {"minimum", [](double t, double s) { return std::min(t, s); }, ContinuityClass::continuous};
    }
    if (name == "drastic") {
        return {"drastic",
                [](double t, double s) {
                    if (t < 1.0 && s < 1.0) return 0.0;
                    return std::min(t, s);
                },
                ContinuityClass::unknown};
    }
    throw invalid_input("unknown t-norm name: '" + std::string(name) + "'");
}

std::vector<std::string> builtin_tnorm_names() {
    return {"product", "lukasiewicz", "minimum", "drastic"};
}

std::vector<TNormAxiomReport> check_tnorm_axioms(const TNorm& norm,
                                                 std::span<const double> values,
                                                 double tolerance) {
    if (values.empty()) throw invalid_input("check_tnorm_axioms: empty value sample");

    std::vector<TNormAxiomReport> reports;

    TNormAxiomReport unit{TNormAxiom::unit, true, std::nullopt, std::nullopt};
    for (double t : values) {
        if (std::abs(norm.apply(t, 1.0) - t) > tolerance) {
            unit.holds = false;
            unit.witness = GridPair{t, 1.0};
            break;
        }
    }
    reports.push_back(unit);

    TNormAxiomReport comm{TNormAxiom::commutativity, true, std::nullopt, std::nullopt};
    for (double t : values) {
        for (double s : values) {
            if (std::abs(norm.apply(t, s) - norm.apply(s, t)) > tolerance) {
                comm.holds = false;
                comm.witness = GridPair{t, s};
                break;
            }
        }
        if (!comm.holds) break;
    }
    reports.push_back(comm);

    TNormAxiomReport assoc{TNormAxiom::associativity, true, std::nullopt, std::nullopt};
    for (double t : values) {
        for (double s : values) {
            for (double r : values) {
                const double left = norm.apply(norm.apply(t, s), r);
                const double right = norm.apply(t, norm.apply(s, r));
                if (std::abs(left - right) > tolerance) {
                    assoc.holds = false;
                    assoc.witness = GridPair{t, s};
                    assoc.witness_third = r;
                    break;
                }
            }
            if (!assoc.holds) break;
        }
        if (!assoc.holds) break;
    }
    reports.push_back(assoc);

    TNormAxiomReport mono{TNormAxiom::monotonicity, true, std::nullopt, std::nullopt};
    for (double t : values) {
        for (double u : values) {
            if (t > u) continue;
            for (double s : values) {
                if (norm.apply(t, s) > norm.apply(u, s) + tolerance) {
                    mono.holds = false;
                    mono.witness = GridPair{t, u};
                    mono.witness_third = s;
                    break;
                }
            }
            if (!mono.holds) break;
        }
        if (!mono.holds) break;
    }
    reports.push_back(mono);

    return reports;
}

OrderCheck check_order(const TNorm& lo, const TNorm& hi, std::span<const GridPair> grid,
                       double tolerance) {
    if (grid.empty()) throw invalid_input("check_order: empty grid");
    for (const GridPair& p : grid) {
        if (lo.apply(p.t, p.s) > hi.apply(p.t, p.s) + tolerance) {
            return {false, p};
        }
    }
    return {true, std::nullopt};
}

BoundaryContinuityCheck check_boundary_continuity(const TNorm& norm,
                                                  std::span<const double> s_grid,
                                                  std::uint64_t n_max,
                                                  double tolerance) {
    if (s_grid.empty()) throw invalid_input("check_boundary_continuity: empty s grid");
    if (n_max < 2) throw invalid_input("check_boundary_continuity: n_max must be >= 2");

    // Dense evaluation is affordable only for modest n_max; beyond that a
    // doubling schedule reaches the same final residual test.
    std::vector<std::uint64_t> schedule;
    if (n_max <= 4096) {
        for (std::uint64_t n = 2; n <= n_max; ++n) schedule.push_back(n);
    } else {
        for (std::uint64_t n = 2; n < n_max; n *= 2) schedule.push_back(n);
        schedule.push_back(n_max);
    }

    BoundaryContinuityCheck result;
    result.holds = true;
    result.n_max = n_max;
    result.s_samples = s_grid.size();
    for (double s : s_grid) {
        double residual = 0.0;
        for (std::uint64_t n : schedule) {
            const double t = 1.0 - 1.0 / static_cast<double>(n);
            residual = std::abs(norm.apply(t, s) - s);
        }
        if (residual > tolerance) {
            result.holds = false;
            result.witness_s = s;
            return result;
        }
    }
    return result;
}

CancellationCheck check_cancellation(const TNorm& norm,
                                     const CancellationInput& input,
                                     double tolerance,
                                     double limit_tolerance) {
    const std::size_t n = input.a.size();
    if (n == 0) throw invalid_input("check_cancellation: empty sequences");
    if (input.b.size() != n || input.c.size() != n || input.d.size() != n || input.e.size() != n) {
        throw invalid_input("check_cancellation: sequences must share one length");
    }

    // Sandwich shape, term by term, with a sliver of slack for rounding.
    for (std::size_t i = 0; i < n; ++i) {
        const double mid = norm.apply(input.b[i], norm.apply(input.c[i], input.d[i]));
        if (input.a[i] < mid - 1e-15 || mid < input.e[i] - 1e-15) {
            throw invalid_input("check_cancellation: sandwich violated at index " + std::to_string(i));
        }
    }

    // Limit hypotheses, validated over the tail of the finite prefixes.
    const auto validate_limit = [&](const std::vector<double>& seq, double limit, const char* name) {
        for (std::size_t i = tail_start(n); i < n; ++i) {
            if (std::abs(seq[i] - limit) > limit_tolerance) {
                throw invalid_input(std::string("check_cancellation: {") + name +
                                    "} does not approach its stated limit within limit_tolerance");
            }
        }
    };
    validate_limit(input.a, input.limit, "a");
    validate_limit(input.b, 1.0, "b");
    validate_limit(input.d, 1.0, "d");
    validate_limit(input.e, input.limit, "e");

    CancellationCheck out;
    out.c_tail_deviation = 0.0;
    for (std::size_t i = tail_start(n); i < n; ++i) {
        out.c_tail_deviation = std::max(out.c_tail_deviation, std::abs(input.c[i] - input.limit));
    }
    out.converged = out.c_tail_deviation <= tolerance;
    return out;
}

}  // namespace fms
