#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "fms/common.hpp"
#include "fms/fuzzy_space.hpp"
#include "fms/relation.hpp"

namespace fms {

/// Comparator theta: B -> R whose nonnegativity on
/// (M(Tx,Ty,t), M(x,y,t)) is the contractivity test. The two flags are
/// verified claims: they are only set after a grid check passes.
struct ThetaComparator {
    std::string label;
    std::function<bool(double, double)> in_domain;  // membership of B
    std::function<double(double, double)> value;
    bool dominated = false;                 // theta(t,s) <= t - s on B cap [0,1]^2
    bool positivity_propagating = false;    // theta(t,s) >= 0, s > 0  =>  t > 0
};

/// Gauge for the separate-variable lift: psi nondecreasing, psi(t) > t on
/// (0,1), psi(1) = 1.
struct PsiGauge {
    std::string label;
    std::function<double(double)> psi;
};

PsiGauge psi_sqrt();
PsiGauge psi_power(double alpha);        // s^alpha, 0 < alpha < 1
PsiGauge psi_blend(double beta);         // s + beta * (1 - s), 0 < beta <= 1

/// Real-side comparator used by the metric lift. scale_invariant is only set
/// by a passing check_scale_invariance.
struct RhoComparator {
    std::string label;
    std::function<double(double, double)> rho;
    bool scale_invariant = false;
};

RhoComparator rho_linear(double lambda);  // rho(a, b) = lambda * b - a

// ---------------------------------------------------------------------------
// Constructors
// ---------------------------------------------------------------------------

/// theta(t,s) = t - psi(s) on [0,1]^2. The gauge is validated on a sampled
/// grid (rejected with a witness on violation); the resulting comparator
/// carries verified dominated and positivity-propagation flags.
ThetaComparator theta_from_psi(const PsiGauge& gauge,
                               std::size_t grid_points = 101,
                               double tolerance = 1e-12);

/// theta(t,s) = t - s / (s + k(1-s)) on [0,1]^2, with theta(t,0) = t (the
/// inner ratio extends continuously to 0 at s = 0). Requires 0 < k < 1.
ThetaComparator theta_radu(double k);

/// Lift of a scale-invariant real comparator:
/// theta(t,s) = rho((1-t)/t, (1-s)/s) on (0,1]^2. Rejects comparators whose
/// scale invariance has not been verified.
ThetaComparator theta_from_rho(const RhoComparator& rc);

/// theta(t,s) = lambda (1-s)/s - (1-t)/t on (0,1]^2; pointwise equal to
/// theta_from_rho(rho_linear(lambda)). Requires 0 <= lambda < 1.
ThetaComparator theta_banach(double lambda);

// ---------------------------------------------------------------------------
// Grid checks
// ---------------------------------------------------------------------------

struct RhoTriple {
    double t = 0.0, s = 0.0, r = 0.0;
};

std::vector<RhoTriple> default_rho_triple_grid();

struct ScaleInvarianceCheck {
    bool holds = false;
    std::optional<RhoTriple> witness;
};

/// For every grid triple (t,s,r) with rho(t,s) >= 0, checks
/// rho(t/r, s/r) >= 0. Sets rc.scale_invariant on success.
ScaleInvarianceCheck check_scale_invariance(RhoComparator& rc, std::span<const RhoTriple> grid);

struct DominationCheck {
    bool holds = false;
    std::optional<GridPair> witness;
};

/// theta(t,s) <= t - s over the grid restricted to B cap [0,1]^2; sets the
/// dominated flag on success.
DominationCheck check_dominated(ThetaComparator& theta, std::span<const GridPair> grid);

struct PositivityPropagationCheck {
    bool holds = false;
    std::optional<GridPair> witness;  // theta >= 0, s > 0, t = 0
};

/// Condition "theta(t,s) >= 0 and s > 0 imply t > 0" over the grid; sets the
/// positivity_propagating flag on success.
PositivityPropagationCheck check_positivity_propagation(ThetaComparator& theta,
                                                        std::span<const GridPair> grid);

// ---------------------------------------------------------------------------
// Pointwise contractivity checks over a fuzzy space
// ---------------------------------------------------------------------------

enum class ContractionVerdict { pass, f4_violation, f1_violation };

inline std::string_view to_string(ContractionVerdict v) {
    switch (v) {
        case ContractionVerdict::pass: return "pass";
        case ContractionVerdict::f4_violation: return "f4_violation";
        case ContractionVerdict::f1_violation: return "f1_violation";
    }
    return "?";
}

template <class P>
struct ContractionWitness {
    P x, y;
    double t = 0.0;
    double image_degree = 0.0;   // M(Tx, Ty, t)
    double source_degree = 0.0;  // M(x, y, t)
    double theta_value = 0.0;    // meaningless for an f1 violation
};

template <class P>
struct ContractionCheck {
    ContractionVerdict verdict = ContractionVerdict::pass;
    std::optional<ContractionWitness<P>> witness;
    std::size_t audited = 0;  // number of (pair, t) combinations actually tested
};

namespace detail {

template <class P>
ContractionCheck<P> check_f4_impl(const ThetaComparator& theta,
                                  const FuzzySpace<P>& space,
                                  const Relation<P>& rel,
                                  const std::function<P(const P&)>& map,
                                  std::span<const std::pair<P, P>> pairs,
                                  std::span<const double> t_grid,
                                  double tolerance,
                                  bool require_positive_source) {
    ContractionCheck<P> result;
    for (const auto& [x, y] : pairs) {
        if (!rel.strict(x, y)) continue;
        const P tx = map(x);
        const P ty = map(y);
        if (!rel.strict(tx, ty)) continue;
        for (double t : t_grid) {
            if (t <= 0.0) continue;
            const double source = space.eval(x, y, t);
            if (require_positive_source && !(source > 0.0)) continue;
            const double image = space.eval(tx, ty, t);
            if (!theta.in_domain(image, source)) {
                result.verdict = ContractionVerdict::f1_violation;
                result.witness = ContractionWitness<P>{x, y, t, image, source, 0.0};
                return result;
            }
            ++result.audited;
            const double v = theta.value(image, source);
            if (v < -tolerance) {
                result.verdict = ContractionVerdict::f4_violation;
                result.witness = ContractionWitness<P>{x, y, t, image, source, v};
                return result;
            }
        }
    }
    return result;
}

}  // namespace detail

/// Contractivity test theta(M(Tx,Ty,t), M(x,y,t)) >= 0 over every sampled
/// pair with x S* y and Tx S* Ty and every grid time. Argument pairs that
/// leave the comparator's domain are reported as a distinct f1 violation.
template <class P>
ContractionCheck<P> check_f4(const ThetaComparator& theta,
                             const FuzzySpace<P>& space,
                             const Relation<P>& rel,
                             const std::function<P(const P&)>& map,
                             std::span<const std::pair<P, P>> pairs,
                             std::span<const double> t_grid,
                             double tolerance = 1e-12) {
    return detail::check_f4_impl(theta, space, rel, map, pairs, t_grid, tolerance, false);
}

/// Weakened test: the inequality is only required where M(x,y,t) > 0.
template <class P>
ContractionCheck<P> check_f4_tilde(const ThetaComparator& theta,
                                   const FuzzySpace<P>& space,
                                   const Relation<P>& rel,
                                   const std::function<P(const P&)>& map,
                                   std::span<const std::pair<P, P>> pairs,
                                   std::span<const double> t_grid,
                                   double tolerance = 1e-12) {
    return detail::check_f4_impl(theta, space, rel, map, pairs, t_grid, tolerance, true);
}

}  // namespace fms
