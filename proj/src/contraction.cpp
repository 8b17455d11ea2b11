#include "fms/contraction.hpp"

#include <cmath>

namespace fms {

namespace {

bool unit_square(double t, double s) {
    return t >= 0.0 && t <= 1.0 && s >= 0.0 && s <= 1.0;
}

bool open_unit_square(double t, double s) {
    return t > 0.0 && t <= 1.0 && s > 0.0 && s <= 1.0;
}

}  // namespace

PsiGauge psi_sqrt() {
    return {"sqrt", [](double s) { return std::sqrt(s); }};
}

PsiGauge psi_power(double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw invalid_input("psi_power: alpha must lie in (0,1)");
    return {"power(" + format_double(alpha) + ")", [alpha](double s) { return std::pow(s, alpha); }};
}

PsiGauge psi_blend(double beta) {
    if (!(beta > 0.0 && beta <= 1.0)) throw invalid_input("psi_blend: beta must lie in (0,1]");
    return {"blend(" + format_double(beta) + ")", [beta](double s) { return s + beta * (1.0 - s); }};
}

RhoComparator rho_linear(double lambda) {
    return {"linear(" + format_double(lambda) + ")",
            [lambda](double a, double b) { return lambda * b - a; },
            false};
}

ThetaComparator theta_from_psi(const PsiGauge& gauge, std::size_t grid_points, double tolerance) {
    if (grid_points < 3) throw invalid_input("theta_from_psi: grid too small");
    const std::vector<double> grid = linspace(0.0, 1.0, grid_points);
    double previous = -1.0;
    for (double s : grid) {
        const double v = gauge.psi(s);
        if (v < 0.0 || v > 1.0) {
            throw invalid_input("theta_from_psi: psi(" + format_double(s) + ") outside [0,1]");
        }
        if (v < previous - tolerance) {
            throw invalid_input("theta_from_psi: psi not nondecreasing at s = " + format_double(s));
        }
        if (s > 0.0 && s < 1.0 && !(v > s)) {
            throw invalid_input("theta_from_psi: psi(s) <= s at s = " + format_double(s));
        }
        previous = v;
    }
    if (std::abs(gauge.psi(1.0) - 1.0) > tolerance) {
        throw invalid_input("theta_from_psi: psi(1) != 1");
    }

    ThetaComparator theta;
    theta.label = "psi:" + gauge.label;
    theta.in_domain = unit_square;
    theta.value = [psi = gauge.psi](double t, double s) { return t - psi(s); };

    const std::vector<GridPair> pair_grid = unit_pair_grid(grid_points);
    if (!check_dominated(theta, pair_grid).holds) {
        throw invalid_input("theta_from_psi: domination failed on the validation grid");
    }
    if (!check_positivity_propagation(theta, pair_grid).holds) {
        throw invalid_input("theta_from_psi: positivity propagation failed on the validation grid");
    }
    return theta;
}

ThetaComparator theta_radu(double k) {
    if (!(k > 0.0 && k < 1.0)) throw invalid_input("theta_radu: k must lie in (0,1)");
    ThetaComparator theta;
    theta.label = "radu(" + format_double(k) + ")";
    theta.in_domain = unit_square;
    theta.value = [k](double t, double s) {
        if (s == 0.0) return t;
        return t - s / (s + k * (1.0 - s));
    };
    return theta;
}

ThetaComparator theta_from_rho(const RhoComparator& rc) {
    if (!rc.scale_invariant) {
        throw invalid_input("theta_from_rho: scale invariance unverified; run check_scale_invariance");
    }
    ThetaComparator theta;
    theta.label = "rho:" + rc.label;
    theta.in_domain = open_unit_square;
    theta.value = [rho = rc.rho](double t, double s) {
        return rho((1.0 - t) / t, (1.0 - s) / s);
    };
    return theta;
}

ThetaComparator theta_banach(double lambda) {
    if (!(lambda >= 0.0 && lambda < 1.0)) throw invalid_input("theta_banach: lambda must lie in [0,1)");
    ThetaComparator theta;
    theta.label = "banach(" + format_double(lambda) + ")";
    theta.in_domain = open_unit_square;
    theta.value = [lambda](double t, double s) {
        return lambda * (1.0 - s) / s - (1.0 - t) / t;
    };
    return theta;
}

std::vector<RhoTriple> default_rho_triple_grid() {
    const std::vector<double> values = {0.1, 0.25, 0.5, 1.0, 2.5, 5.0, 10.0};
    std::vector<RhoTriple> grid;
    grid.reserve(values.size() * values.size() * values.size());
    for (double t : values) {
        for (double s : values) {
            for (double r : values) {
                grid.push_back({t, s, r});
            }
        }
    }
    return grid;
}

ScaleInvarianceCheck check_scale_invariance(RhoComparator& rc, std::span<const RhoTriple> grid) {
    if (grid.empty()) throw invalid_input("check_scale_invariance: empty grid");
    for (const RhoTriple& triple : grid) {
        if (!(triple.t > 0.0 && triple.s > 0.0 && triple.r > 0.0)) continue;
        if (rc.rho(triple.t, triple.s) < 0.0) continue;
        if (rc.rho(triple.t / triple.r, triple.s / triple.r) < 0.0) {
            return {false, triple};
        }
    }
    rc.scale_invariant = true;
    return {true, std::nullopt};
}

DominationCheck check_dominated(ThetaComparator& theta, std::span<const GridPair> grid) {
    for (const GridPair& p : grid) {
        if (!unit_square(p.t, p.s) || !theta.in_domain(p.t, p.s)) continue;
        if (theta.value(p.t, p.s) > p.t - p.s + 1e-12) {
            return {false, p};
        }
    }
    theta.dominated = true;
    return {true, std::nullopt};
}

PositivityPropagationCheck check_positivity_propagation(ThetaComparator& theta,
                                                        std::span<const GridPair> grid) {
    for (const GridPair& p : grid) {
        if (!theta.in_domain(p.t, p.s)) continue;
        if (theta.value(p.t, p.s) >= 0.0 && p.s > 0.0 && !(p.t > 0.0)) {
            return {false, p};
        }
    }
    theta.positivity_propagating = true;
    return {true, std::nullopt};
}

}  // namespace fms
