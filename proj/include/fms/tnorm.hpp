#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fms/common.hpp"

namespace fms {

enum class ContinuityClass { continuous, one_boundary_continuous, unknown };

std::string_view to_string(ContinuityClass c);

/// A triangular norm: a binary operation on [0,1] that is associative,
/// commutative, monotone in each argument and has 1 as unit.
struct TNorm {
    std::string name;
    std::function<double(double, double)> apply;
    ContinuityClass continuity_class = ContinuityClass::unknown;
};

/// Named norms: product, lukasiewicz, minimum, drastic. The drastic norm is
/// flagged `unknown` because its boundary behavior has to be probed, not
/// assumed. Throws invalid_input for unrecognized names.
TNorm builtin_tnorm(std::string_view name);

std::vector<std::string> builtin_tnorm_names();

// ---------------------------------------------------------------------------
// Sampled checks. All of these are falsifiers: a pass means "no violation on
// the supplied samples", never a proof.
// ---------------------------------------------------------------------------

enum class TNormAxiom { unit, commutativity, associativity, monotonicity };

std::string_view to_string(TNormAxiom a);

struct TNormAxiomReport {
    TNormAxiom axiom;
    bool holds = false;
    std::optional<GridPair> witness;     // violating arguments
    std::optional<double> witness_third; // third argument (associativity/monotonicity)
};

/// Checks the four defining axioms on value x value (x value) samples.
std::vector<TNormAxiomReport> check_tnorm_axioms(const TNorm& norm,
                                                 std::span<const double> values,
                                                 double tolerance = 1e-12);

struct OrderCheck {
    bool holds = false;
    std::optional<GridPair> witness;
};

/// True iff lo.apply <= hi.apply (up to rounding slack) on every grid pair.
/// Empty grid is rejected.
OrderCheck check_order(const TNorm& lo, const TNorm& hi, std::span<const GridPair> grid,
                       double tolerance = 1e-12);

struct BoundaryContinuityCheck {
    bool holds = false;
    std::optional<double> witness_s;
    std::uint64_t n_max = 0;       // evaluation schedule actually used
    std::size_t s_samples = 0;
};

/// Probes continuity at the 1-boundary: for each s, apply(1 - 1/n, s) must
/// approach s as n grows. Evaluates every n in [2, n_max] when n_max is
/// small, otherwise a geometric subsample of that range, and requires the
/// final residual |apply(1 - 1/n_max, s) - s| <= tolerance. n_max must be
/// at least 2.
BoundaryContinuityCheck check_boundary_continuity(const TNorm& norm,
                                                  std::span<const double> s_grid,
                                                  std::uint64_t n_max,
                                                  double tolerance = kDefaultTolerance);

/// Five bounded sequences in [0,1] with the sandwich shape
/// a_n >= b_n * (c_n * d_n) >= e_n, where {a_n} -> L, {b_n} -> 1,
/// {d_n} -> 1 and {e_n} -> L.
struct CancellationInput {
    std::vector<double> a, b, c, d, e;
    double limit = 0.0;
};

struct CancellationCheck {
    bool converged = false;       // tail of {c_n} within tolerance of the limit
    double c_tail_deviation = 0.0;  // max |c_n - L| over the tail
};

/// The cancellation property: under the sandwich hypotheses the middle
/// sequence {c_n} must converge to L. The sandwich inequality is validated
/// term by term (violation -> invalid_input naming the first bad index); the
/// four limit hypotheses are validated on the finite prefixes against
/// limit_tolerance.
CancellationCheck check_cancellation(const TNorm& norm,
                                     const CancellationInput& input,
                                     double tolerance = kDefaultTolerance,
                                     double limit_tolerance = kDefaultTolerance);

}  // namespace fms
