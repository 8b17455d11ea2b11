#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "fms/common.hpp"
#include "fms/contraction.hpp"
#include "fms/fuzzy_space.hpp"
#include "fms/relation.hpp"

namespace fms {

// ---------------------------------------------------------------------------
// Picard orbits
// ---------------------------------------------------------------------------

enum class OrbitClass { infinite_on_prefix, almost_periodic, eventually_constant };

inline std::string_view to_string(OrbitClass c) {
    switch (c) {
        case OrbitClass::infinite_on_prefix: return "infinite_on_prefix";
        case OrbitClass::almost_periodic: return "almost_periodic";
        case OrbitClass::eventually_constant: return "eventually_constant";
    }
    return "?";
}

template <class P>
struct PicardOrbit {
    std::vector<P> points;  // points[n+1] = T(points[n]), exactly
    std::string map_label;
    OrbitClass classification = OrbitClass::infinite_on_prefix;
};

/// Orbit x0, T x0, T^2 x0, ... of length n_terms. Classification uses the
/// trichotomy on the recorded prefix: a repeated value forces almost
/// periodicity, and a constant tail (which certifies T(z) = z through the
/// recurrence itself) refines that to eventually_constant. Repeats are
/// detected with representation equality, not tolerance equality, so a
/// strictly decreasing convergent orbit stays infinite_on_prefix.
template <class P>
PicardOrbit<P> picard(const std::function<P(const P&)>& map,
                      P x0,
                      std::size_t n_terms,
                      std::string map_label = "T") {
    if (n_terms < 2) throw invalid_input("picard: need at least 2 terms");
    PicardOrbit<P> orbit;
    orbit.map_label = std::move(map_label);
    orbit.points.reserve(n_terms);
    orbit.points.push_back(std::move(x0));
    for (std::size_t i = 1; i < n_terms; ++i) {
        try {
            orbit.points.push_back(map(orbit.points.back()));
        } catch (const std::exception& e) {
            throw invalid_input("picard: map evaluation failed at index " + std::to_string(i) +
                                ": " + e.what());
        }
    }

    const auto& pts = orbit.points;
    const std::size_t n = pts.size();

    std::size_t suffix_start = n - 1;
    while (suffix_start > 0 && pts[suffix_start - 1] == pts[n - 1]) --suffix_start;
    if (n - suffix_start >= 2) {
        orbit.classification = OrbitClass::eventually_constant;
        return orbit;
    }

    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (pts[i] == pts[j]) {
                orbit.classification = OrbitClass::almost_periodic;
                return orbit;
            }
        }
    }
    orbit.classification = OrbitClass::infinite_on_prefix;
    return orbit;
}

/// The orbit's constant tail value, when there is one. The recurrence makes
/// the tail's first repetition a certificate that the value is fixed.
template <class P>
std::optional<P> extract_fixed_point_if_constant(const PicardOrbit<P>& orbit) {
    if (orbit.classification != OrbitClass::eventually_constant) return std::nullopt;
    return orbit.points.back();
}

/// CSV rows n, x_n.
template <class P>
std::string orbit_csv(const PicardOrbit<P>& orbit) {
    std::string out = "n,x_n\n";
    for (std::size_t n = 0; n < orbit.points.size(); ++n) {
        out += std::to_string(n);
        out += ',';
        out += point_traits<P>::to_string(orbit.points[n]);
        out += '\n';
    }
    return out;
}

/// True iff the tail of M(x_n, x_{n+1}, t) is within tolerance of 1 for
/// every grid time. Requires at least 10 orbit points.
template <class P>
bool asymptotically_regular(const FuzzySpace<P>& space,
                            const PicardOrbit<P>& orbit,
                            std::span<const double> t_grid,
                            double tolerance = kDefaultTolerance) {
    if (orbit.points.size() < 10) throw invalid_input("asymptotically_regular: need >= 10 points");
    const std::size_t steps = orbit.points.size() - 1;
    for (double t : t_grid) {
        if (t <= 0.0) continue;
        for (std::size_t i = tail_start(steps); i < steps; ++i) {
            if (1.0 - space.eval(orbit.points[i], orbit.points[i + 1], t) > tolerance) {
                return false;
            }
        }
    }
    return true;
}

// ---------------------------------------------------------------------------
// (T, S*, M)-sequences: paired degree evaluators phi_n(t) = M(Tx_n, Ty_n, t)
// and psi_n(t) = M(x_n, y_n, t) with their provenance pairs.
// ---------------------------------------------------------------------------

template <class P>
struct TSMSequence {
    FuzzySpace<P> space;
    std::vector<std::pair<P, P>> pairs;        // (x_n, y_n)
    std::vector<std::pair<P, P>> image_pairs;  // (T x_n, T y_n)

    std::size_t size() const { return pairs.size(); }
    double phi(std::size_t n, double t) const {
        return space.eval(image_pairs[n].first, image_pairs[n].second, t);
    }
    double psi(std::size_t n, double t) const {
        return space.eval(pairs[n].first, pairs[n].second, t);
    }
};

/// Packages the pairs after validating x_n S* y_n and T x_n S* T y_n for
/// every n (distinctness taken in the representation sense).
template <class P>
TSMSequence<P> make_tsm_sequence(const FuzzySpace<P>& space,
                                 const Relation<P>& rel,
                                 const std::function<P(const P&)>& map,
                                 std::vector<std::pair<P, P>> pairs) {
    if (pairs.empty()) throw invalid_input("make_tsm_sequence: empty pair list");
    TSMSequence<P> seq;
    seq.space = space;
    seq.image_pairs.reserve(pairs.size());
    for (std::size_t n = 0; n < pairs.size(); ++n) {
        const auto& [x, y] = pairs[n];
        if (!(rel.holds(x, y) && !(x == y))) {
            throw invalid_input("make_tsm_sequence: x_n S* y_n fails at index " + std::to_string(n));
        }
        P tx = map(x);
        P ty = map(y);
        if (!(rel.holds(tx, ty) && !(tx == ty))) {
            throw invalid_input("make_tsm_sequence: Tx_n S* Ty_n fails at index " + std::to_string(n));
        }
        seq.image_pairs.emplace_back(std::move(tx), std::move(ty));
    }
    seq.pairs = std::move(pairs);
    return seq;
}

// ---------------------------------------------------------------------------
// Property NC witness extraction
// ---------------------------------------------------------------------------

/// Interleaved index pair witnessing non-Cauchy behavior at (eps0, t0):
///   k < n(k) < m(k) < n(k+1)
///   M(x_{n(k)}, x_{m(k)-1}, t0) > 1-eps0 >= M(x_{n(k)}, x_{m(k)}, t0)
/// together with the residuals of the two recorded value sequences against
/// 1 - eps0. Limits are never claimed: the gaps are tail means over the
/// recorded k, to be compared across growing scan windows.
struct NCWitness {
    double eps0 = 0.0;
    double t0 = 0.0;
    std::vector<std::size_t> nk, mk;   // 0-based indices into the sequence
    std::vector<double> outer;         // M(x_{n(k)}, x_{m(k)}, t0)
    std::vector<double> inner;         // M(x_{n(k)-1}, x_{m(k)-1}, t0)
    double limit_gap_outer = 0.0;      // tail mean of |outer - (1-eps0)|
    double limit_gap_inner = 0.0;      // tail mean of |inner - (1-eps0)|
    struct EpsT {
        double eps = 0.0;
        double t = 0.0;
    };
    std::vector<EpsT> weak_form_pairs;  // grid pairs where only the weak bound held
};

/// CSV rows k, n_k, m_k, M_outer, M_inner, residual_outer, residual_inner
/// (k is 1-based; n_k and m_k are 0-based sequence indices).
std::string nc_witness_csv(const NCWitness& witness);

namespace detail {

inline double tail_mean_abs_gap(std::span<const double> values, double reference) {
    double sum = 0.0;
    std::size_t count = 0;
    for (std::size_t i = tail_start(values.size()); i < values.size(); ++i) {
        sum += std::abs(values[i] - reference);
        ++count;
    }
    return count == 0 ? 0.0 : sum / static_cast<double>(count);
}

// Regularity in trend form: per grid time, the mean step residual
// 1 - M(x_i, x_{i+1}, t) over the last quarter must either sit below the
// tolerance or have decayed to at most 0.9x the first quarter's mean. The
// strict-tolerance form would reject slowly regular sequences at short
// windows even though their residuals are clearly shrinking.
template <class P>
bool regular_in_trend(const FuzzySpace<P>& space,
                      std::span<const P> seq,
                      std::span<const double> t_grid,
                      double tolerance) {
    const std::size_t steps = seq.size() - 1;
    const std::size_t quarter = std::max<std::size_t>(1, steps / 4);
    for (double t : t_grid) {
        if (t <= 0.0) continue;
        double head = 0.0;
        double tail = 0.0;
        for (std::size_t i = 0; i < quarter; ++i) {
            head += 1.0 - space.eval(seq[i], seq[i + 1], t);
        }
        for (std::size_t i = steps - quarter; i < steps; ++i) {
            tail += 1.0 - space.eval(seq[i], seq[i + 1], t);
        }
        head /= static_cast<double>(quarter);
        tail /= static_cast<double>(quarter);
        if (tail > tolerance && tail > 0.9 * head) return false;
    }
    return true;
}

}  // namespace detail

/// Searches the (eps, t) grid for a witness of non-Cauchy interleaving and
/// returns the one with the smallest combined tail gap (ties resolved by
/// grid order). n(k) is chosen canonically as the smallest index past
/// m(k-1) from which some later index breaks the 1-eps0 bound, and m(k) as
/// the least such breaker, which makes the strict predecessor inequality
/// automatic. Preconditions: the sequence must be asymptotically regular in
/// trend on the grid, and must fail the empirical Cauchy predicate at
/// window length/2 (both rejected with a named diagnostic). Returns nullopt
/// when no grid pair yields at least two interleaved entries.
template <class P>
std::optional<NCWitness> extract_nc_witness(const FuzzySpace<P>& space,
                                            std::span<const P> seq,
                                            std::span<const double> eps_grid,
                                            std::span<const double> t_grid,
                                            double tolerance = kDefaultTolerance) {
    if (seq.size() < 8) throw invalid_input("extract_nc_witness: sequence too short");
    if (!detail::regular_in_trend(space, seq, t_grid, tolerance)) {
        throw invalid_input("extract_nc_witness: precondition failed: asymptotic regularity");
    }
    if (empirically_cauchy(space, seq, eps_grid, t_grid, seq.size() / 2).holds) {
        throw invalid_input(
            "extract_nc_witness: precondition failed: not Cauchy (sequence is empirically Cauchy "
            "on the sampled grid)");
    }

    std::optional<NCWitness> best;
    std::vector<NCWitness::EpsT> weak_pairs;

    for (double eps : eps_grid) {
        if (!(eps > 0.0 && eps < 1.0)) continue;
        for (double t0 : t_grid) {
            if (t0 <= 0.0) continue;
            const double bound = 1.0 - eps;

            NCWitness candidate;
            candidate.eps0 = eps;
            candidate.t0 = t0;
            bool weak_only = false;

            std::size_t n = 2;  // guarantees k < n(k) for every recorded k
            int failed_scans = 0;
            while (n + 1 < seq.size() && failed_scans < 8) {
                std::optional<std::size_t> found;
                for (std::size_t m = n + 1; m < seq.size(); ++m) {
                    if (space.eval(seq[n], seq[m], t0) <= bound) {
                        found = m;
                        break;
                    }
                }
                if (!found) {
                    ++failed_scans;
                    ++n;
                    continue;
                }
                const std::size_t m = *found;
                const double predecessor =
                    m == n + 1 ? 1.0 : space.eval(seq[n], seq[m - 1], t0);
                if (!(predecessor > bound)) {
                    weak_only = true;
                    break;
                }
                candidate.nk.push_back(n);
                candidate.mk.push_back(m);
                candidate.outer.push_back(space.eval(seq[n], seq[m], t0));
                candidate.inner.push_back(space.eval(seq[n - 1], seq[m - 1], t0));
                n = m + 1;
            }

            if (weak_only) {
                weak_pairs.push_back({eps, t0});
                continue;
            }
            if (candidate.nk.size() < 2) continue;

            candidate.limit_gap_outer = detail::tail_mean_abs_gap(candidate.outer, bound);
            candidate.limit_gap_inner = detail::tail_mean_abs_gap(candidate.inner, bound);
            const double score = candidate.limit_gap_outer + candidate.limit_gap_inner;
            if (!best || score < best->limit_gap_outer + best->limit_gap_inner) {
                best = std::move(candidate);
            }
        }
    }

    if (best) best->weak_form_pairs = std::move(weak_pairs);
    return best;
}

/// Re-verifies the recorded interleaving and bound inequalities of a
/// witness against the sequence it came from.
template <class P>
bool verify_nc_witness(const FuzzySpace<P>& space, std::span<const P> seq, const NCWitness& w) {
    if (w.nk.size() != w.mk.size() || w.nk.size() != w.outer.size() ||
        w.nk.size() != w.inner.size() || w.nk.size() < 2) {
        return false;
    }
    const double bound = 1.0 - w.eps0;
    for (std::size_t i = 0; i < w.nk.size(); ++i) {
        const std::size_t n = w.nk[i];
        const std::size_t m = w.mk[i];
        if (!(i + 1 < n && n < m)) return false;                        // k < n(k) < m(k)
        if (i + 1 < w.nk.size() && !(m < w.nk[i + 1])) return false;    // m(k) < n(k+1)
        if (n == 0 || m >= seq.size()) return false;
        const double outer = space.eval(seq[n], seq[m], w.t0);
        const double inner = space.eval(seq[n - 1], seq[m - 1], w.t0);
        const double predecessor = m == n + 1 ? 1.0 : space.eval(seq[n], seq[m - 1], w.t0);
        if (!(predecessor > bound && bound >= outer)) return false;
        if (outer != w.outer[i] || inner != w.inner[i]) return false;
    }
    return true;
}

// ---------------------------------------------------------------------------
// Falsifiers for the sequence-quantified contraction conditions. These never
// claim a condition holds universally: they evaluate its conclusion on the
// supplied witness material after validating every hypothesis clause.
// ---------------------------------------------------------------------------

enum class SeqCondition { f2, f2_prime, f3, f5, f2_tilde, f2_prime_tilde, f5_tilde };

inline std::string_view to_string(SeqCondition c) {
    switch (c) {
        case SeqCondition::f2: return "f2";
        case SeqCondition::f2_prime: return "f2'";
        case SeqCondition::f3: return "f3";
        case SeqCondition::f5: return "f5";
        case SeqCondition::f2_tilde: return "f2~";
        case SeqCondition::f2_prime_tilde: return "f2'~";
        case SeqCondition::f5_tilde: return "f5~";
    }
    return "?";
}

template <class P>
struct WitnessBundle {
    std::optional<std::vector<P>> orbit;    // Picard sequence (f2 family)
    std::optional<std::vector<P>> orbit_y;  // second Picard sequence (f2' family)
    std::optional<TSMSequence<P>> tsm;      // f3 / f5 family
    std::optional<double> t0;               // f3
    std::optional<double> limit;            // f3: the claimed common limit L
};

struct FalsificationResult {
    bool counterexample_found = false;
    std::string detail;  // what part of the conclusion failed
};

namespace detail {

template <class P>
void require_picard(const std::vector<P>& orbit,
                    const std::function<P(const P&)>& map,
                    const char* which) {
    if (orbit.size() < 3) {
        throw invalid_input(std::string("falsify: ") + which + " needs at least 3 terms");
    }
    for (std::size_t i = 0; i + 1 < orbit.size(); ++i) {
        if (!(map(orbit[i]) == orbit[i + 1])) {
            throw invalid_input(std::string("falsify: hypothesis clause 'Picard recurrence' fails in ") +
                                which + " at index " + std::to_string(i));
        }
    }
}

// Hypothesis-side strictness is taken in the representation sense: witness
// orbits are bit-exact Picard sequences, so tolerance equality would
// misclassify late near-converged terms.
template <class P>
bool strict_exact(const Relation<P>& rel, const P& x, const P& y) {
    return rel.holds(x, y) && !(x == y);
}

}  // namespace detail

template <class P>
FalsificationResult falsify_sequence_condition(SeqCondition condition,
                                               const ThetaComparator& theta,
                                               const FuzzySpace<P>& space,
                                               const Relation<P>& rel,
                                               const std::function<P(const P&)>& map,
                                               const WitnessBundle<P>& bundle,
                                               std::span<const double> t_grid,
                                               double tolerance = 1e-12,
                                               double limit_tolerance = kDefaultTolerance) {
    const auto theta_at = [&](double image, double source, const char* where) {
        if (!theta.in_domain(image, source)) {
            throw invalid_input(std::string("falsify: hypothesis clause 'arguments in B' fails (") +
                                where + ")");
        }
        return theta.value(image, source);
    };

    switch (condition) {
        case SeqCondition::f2:
        case SeqCondition::f2_tilde: {
            if (!bundle.orbit) throw invalid_input("falsify: f2 family needs a Picard orbit witness");
            const auto& xs = *bundle.orbit;
            detail::require_picard(xs, map, "orbit");
            const bool tilde = condition == SeqCondition::f2_tilde;
            for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
                if (!detail::strict_exact(rel, xs[i], xs[i + 1])) {
                    throw invalid_input(
                        "falsify: hypothesis clause 'S-strictly-increasing' fails at index " +
                        std::to_string(i));
                }
            }
            for (std::size_t i = 0; i + 2 < xs.size(); ++i) {
                for (double t : t_grid) {
                    if (t <= 0.0) continue;
                    const double source = space.eval(xs[i], xs[i + 1], t);
                    if (tilde && !(source > 0.0)) {
                        throw invalid_input(
                            "falsify: hypothesis clause 'M(x_n, x_{n+1}, t) > 0' fails at index " +
                            std::to_string(i));
                    }
                    const double image = space.eval(xs[i + 1], xs[i + 2], t);
                    if (theta_at(image, source, "f2") < -tolerance) {
                        throw invalid_input(
                            "falsify: hypothesis clause 'theta >= 0 along the orbit' fails at index " +
                            std::to_string(i));
                    }
                }
            }
            const std::size_t steps = xs.size() - 1;
            for (double t : t_grid) {
                if (t <= 0.0) continue;
                for (std::size_t i = tail_start(steps); i < steps; ++i) {
                    if (1.0 - space.eval(xs[i], xs[i + 1], t) > limit_tolerance) {
                        return {true, "step degrees do not approach 1 at t = " + format_double(t) +
                                          ", index " + std::to_string(i)};
                    }
                }
            }
            return {false, ""};
        }

        case SeqCondition::f2_prime:
        case SeqCondition::f2_prime_tilde: {
            if (!bundle.orbit || !bundle.orbit_y) {
                throw invalid_input("falsify: f2' family needs two Picard orbit witnesses");
            }
            const auto& xs = *bundle.orbit;
            const auto& ys = *bundle.orbit_y;
            if (xs.size() != ys.size()) {
                throw invalid_input("falsify: paired orbits must share one length");
            }
            detail::require_picard(xs, map, "orbit");
            detail::require_picard(ys, map, "orbit_y");
            const bool tilde = condition == SeqCondition::f2_prime_tilde;
            for (std::size_t i = 0; i < xs.size(); ++i) {
                if (!detail::strict_exact(rel, xs[i], ys[i])) {
                    throw invalid_input("falsify: hypothesis clause 'x_n S* y_n' fails at index " +
                                        std::to_string(i));
                }
            }
            for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
                for (double t : t_grid) {
                    if (t <= 0.0) continue;
                    const double source = space.eval(xs[i], ys[i], t);
                    if (tilde && !(source > 0.0)) {
                        throw invalid_input(
                            "falsify: hypothesis clause 'M(x_n, y_n, t) > 0' fails at index " +
                            std::to_string(i));
                    }
                    const double image = space.eval(xs[i + 1], ys[i + 1], t);
                    if (theta_at(image, source, "f2'") < -tolerance) {
                        throw invalid_input(
                            "falsify: hypothesis clause 'theta >= 0 along the pair' fails at index " +
                            std::to_string(i));
                    }
                }
            }
            for (double t : t_grid) {
                if (t <= 0.0) continue;
                for (std::size_t i = tail_start(xs.size()); i < xs.size(); ++i) {
                    if (1.0 - space.eval(xs[i], ys[i], t) > limit_tolerance) {
                        return {true, "pair degrees do not approach 1 at t = " + format_double(t) +
                                          ", index " + std::to_string(i)};
                    }
                }
            }
            return {false, ""};
        }

        case SeqCondition::f3: {
            if (!bundle.tsm || !bundle.t0 || !bundle.limit) {
                throw invalid_input("falsify: f3 needs a (T,S*,M)-sequence, t0 and a claimed limit");
            }
            const auto& tsm = *bundle.tsm;
            const double t0 = *bundle.t0;
            const double L = *bundle.limit;
            if (!(t0 > 0.0)) throw invalid_input("falsify: f3 needs t0 > 0");
            if (L < 0.0 || L > 1.0) throw invalid_input("falsify: f3 limit must lie in [0,1]");
            std::vector<double> phis(tsm.size()), psis(tsm.size());
            for (std::size_t i = 0; i < tsm.size(); ++i) {
                phis[i] = tsm.phi(i, t0);
                psis[i] = tsm.psi(i, t0);
                if (!(L > phis[i])) {
                    throw invalid_input("falsify: hypothesis clause 'L > phi_n(t0)' fails at index " +
                                        std::to_string(i));
                }
                if (theta_at(phis[i], psis[i], "f3") < -tolerance) {
                    throw invalid_input(
                        "falsify: hypothesis clause 'theta(phi_n, psi_n) >= 0' fails at index " +
                        std::to_string(i));
                }
            }
            for (std::size_t i = tail_start(tsm.size()); i < tsm.size(); ++i) {
                if (std::abs(phis[i] - L) > limit_tolerance || std::abs(psis[i] - L) > limit_tolerance) {
                    throw invalid_input(
                        "falsify: hypothesis clause 'common limit L' fails at index " +
                        std::to_string(i));
                }
            }
            if (std::abs(L - 1.0) > limit_tolerance) {
                return {true, "claimed common limit L = " + format_double(L) + " is not 1"};
            }
            return {false, ""};
        }

        case SeqCondition::f5:
        case SeqCondition::f5_tilde: {
            if (!bundle.tsm) throw invalid_input("falsify: f5 family needs a (T,S*,M)-sequence");
            const auto& tsm = *bundle.tsm;
            const bool tilde = condition == SeqCondition::f5_tilde;
            if (tilde) {
                for (std::size_t i = 0; i < tsm.size(); ++i) {
                    for (double t : t_grid) {
                        if (t <= 0.0) continue;
                        if (!(tsm.phi(i, t) > 0.0 && tsm.psi(i, t) > 0.0)) {
                            throw invalid_input(
                                "falsify: hypothesis clause 'phi_n, psi_n > 0' fails at index " +
                                std::to_string(i));
                        }
                    }
                }
            }
            for (double t : t_grid) {
                if (t <= 0.0) continue;
                for (std::size_t i = tail_start(tsm.size()); i < tsm.size(); ++i) {
                    if (1.0 - tsm.psi(i, t) > limit_tolerance) {
                        throw invalid_input(
                            "falsify: hypothesis clause 'psi_n(t) -> 1' fails at index " +
                            std::to_string(i));
                    }
                }
            }
            for (std::size_t i = 0; i < tsm.size(); ++i) {
                for (double t : t_grid) {
                    if (t <= 0.0) continue;
                    if (theta_at(tsm.phi(i, t), tsm.psi(i, t), "f5") < -tolerance) {
                        throw invalid_input(
                            "falsify: hypothesis clause 'theta(phi_n, psi_n) >= 0' fails at index " +
                            std::to_string(i));
                    }
                }
            }
            for (double t : t_grid) {
                if (t <= 0.0) continue;
                for (std::size_t i = tail_start(tsm.size()); i < tsm.size(); ++i) {
                    if (1.0 - tsm.phi(i, t) > limit_tolerance) {
                        return {true, "phi degrees do not approach 1 at t = " + format_double(t) +
                                          ", index " + std::to_string(i)};
                    }
                }
            }
            return {false, ""};
        }
    }
    throw invalid_input("falsify: unknown condition");
}

}  // namespace fms
