#pragma once

#include <cmath>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "fms/common.hpp"
#include "fms/point_traits.hpp"
#include "fms/tnorm.hpp"

namespace fms {

/// A fuzzy space: a point domain together with an evaluator
/// (x, y, t) -> [0,1] defined for t >= 0. No axioms are assumed by the type
/// itself; verify_axioms probes them on samples.
template <class P>
struct FuzzySpace {
    std::string label;
    std::function<double(const P&, const P&, double)> eval;
};

/// Canonical fuzzy metric of a classical metric: 0 at t = 0 and
/// t / (t + d(x,y)) for t > 0. Symmetry and d(x,x) = 0 are spot-checked on
/// the optional sample points; the rest is the caller's responsibility.
template <class P>
FuzzySpace<P> from_metric(std::function<double(const P&, const P&)> d,
                          std::string label = "md",
                          std::span<const P> spot_check_points = {}) {
    for (const P& x : spot_check_points) {
        if (std::abs(d(x, x)) > 1e-12) {
            throw invalid_input("from_metric: d(x,x) != 0 at a sampled point");
        }
        for (const P& y : spot_check_points) {
            if (std::abs(d(x, y) - d(y, x)) > 1e-12) {
                throw invalid_input("from_metric: metric sample is not symmetric");
            }
        }
    }
    return {std::move(label), [d = std::move(d)](const P& x, const P& y, double t) {
                if (t < 0.0) throw invalid_input("fuzzy space evaluated at negative time");
                if (t == 0.0) return 0.0;
                return t / (t + d(x, y));
            }};
}

/// Exponential construction: M(x,y,t) = vartheta(t)^d(x,y) for t > 0, with 0
/// at t = 0. vartheta must be nondecreasing from (0,inf) into (0,1) with
/// limit 1; it is spot-checked on a geometric time sample and rejected on
/// violation.
template <class P>
FuzzySpace<P> exponential_space(std::function<double(const P&, const P&)> d,
                                std::function<double(double)> vartheta,
                                std::string label = "exponential") {
    double previous = 0.0;
    bool first = true;
    for (double t = 1e-3; t <= 1e6; t *= 10.0) {
        const double v = vartheta(t);
        if (!(v > 0.0 && v < 1.0)) {
            throw invalid_input("exponential_space: vartheta sample outside (0,1)");
        }
        if (!first && v < previous) {
            throw invalid_input("exponential_space: vartheta sample not nondecreasing");
        }
        previous = v;
        first = false;
    }
    return {std::move(label),
            [d = std::move(d), vartheta = std::move(vartheta)](const P& x, const P& y, double t) {
                if (t < 0.0) throw invalid_input("fuzzy space evaluated at negative time");
                if (t == 0.0) return 0.0;
                return std::pow(vartheta(t), d(x, y));
            }};
}

/// Stationary space on the positive reals: M(x,y,t) = min(x,y)/max(x,y),
/// independent of t for t > 0.
inline FuzzySpace<double> stationary_ratio_space() {
    return {"stationary_ratio", [](const double& x, const double& y, double t) {
                if (x <= 0.0 || y <= 0.0) {
                    throw invalid_input("stationary_ratio: points must be positive");
                }
                if (t < 0.0) throw invalid_input("fuzzy space evaluated at negative time");
                if (t == 0.0) return 0.0;
                return std::min(x, y) / std::max(x, y);
            }};
}

// ---------------------------------------------------------------------------
// Sampled axiom verification
// ---------------------------------------------------------------------------

enum class Axiom {
    km1, km2, km3, km4, km5,
    gv1, gv2, gv3, gv4, gv5,
    non_archimedean,
    monotone_in_t,
};

inline std::string_view to_string(Axiom a) {
    switch (a) {
        case Axiom::km1: return "km1";
        case Axiom::km2: return "km2";
        case Axiom::km3: return "km3";
        case Axiom::km4: return "km4";
        case Axiom::km5: return "km5";
        case Axiom::gv1: return "gv1";
        case Axiom::gv2: return "gv2";
        case Axiom::gv3: return "gv3";
        case Axiom::gv4: return "gv4";
        case Axiom::gv5: return "gv5";
        case Axiom::non_archimedean: return "non_archimedean";
        case Axiom::monotone_in_t: return "monotone_in_t";
    }
    return "?";
}

inline std::optional<Axiom> axiom_from_string(std::string_view name) {
    for (Axiom a : {Axiom::km1, Axiom::km2, Axiom::km3, Axiom::km4, Axiom::km5,
                    Axiom::gv1, Axiom::gv2, Axiom::gv3, Axiom::gv4, Axiom::gv5,
                    Axiom::non_archimedean, Axiom::monotone_in_t}) {
        if (to_string(a) == name) return a;
    }
    return std::nullopt;
}

inline std::vector<Axiom> km_axioms() {
    return {Axiom::km1, Axiom::km2, Axiom::km3, Axiom::km4, Axiom::km5};
}

inline std::vector<Axiom> gv_axioms() {
    return {Axiom::gv1, Axiom::gv2, Axiom::gv3, Axiom::gv4, Axiom::gv5};
}

enum class Verdict { pass_on_grid, fail };

inline std::string_view to_string(Verdict v) {
    return v == Verdict::pass_on_grid ? "pass_on_grid" : "fail";
}

template <class P>
struct AxiomWitness {
    P x, y;
    std::optional<P> z;
    double t = 0.0;
    double s = 0.0;
};

template <class P>
struct AxiomReport {
    Axiom axiom{};
    Verdict verdict = Verdict::fail;
    std::optional<AxiomWitness<P>> witness;
};

namespace detail {

// One-sided continuity probe along t -/+ 1/n, n = 2..64. Halving the
// approach step (n = 32 to n = 64) roughly halves the residual of a
// continuous limit, while a jump keeps it flat, so the final residual must
// drop below max(tolerance, 0.8 x the half-step residual). When the
// admissible window is too short to compare two step sizes, the probe says
// nothing and passes.
template <class P>
bool one_sided_continuous_at(const FuzzySpace<P>& space, const P& x, const P& y, double t,
                             double direction, double tolerance, double& failing_s) {
    const double reference = space.eval(x, y, t);
    double mid = -1.0;
    double last = -1.0;
    double last_s = t;
    for (int n = 2; n <= 64; ++n) {
        const double s = t + direction / static_cast<double>(n);
        if (s <= 0.0) continue;
        const double r = std::abs(space.eval(x, y, s) - reference);
        if ((n <= 32 || mid < 0.0) && n <= 48) {
            mid = r;  // residual at the coarsest usable comparison step
        }
        last = r;
        last_s = s;
    }
    if (mid < 0.0) return true;  // window too short to trend
    if (last <= std::max(tolerance, 0.8 * mid)) return true;
    failing_s = last_s;
    return false;
}

template <class P>
bool left_continuous_at(const FuzzySpace<P>& space, const P& x, const P& y, double t,
                        double tolerance, double& failing_s) {
    return one_sided_continuous_at(space, x, y, t, -1.0, tolerance, failing_s);
}

template <class P>
bool right_continuous_at(const FuzzySpace<P>& space, const P& x, const P& y, double t,
                         double tolerance, double& failing_s) {
    return one_sided_continuous_at(space, x, y, t, 1.0, tolerance, failing_s);
}

}  // namespace detail

/// Checks the requested axioms on every applicable tuple drawn from the
/// samples. Verdicts are grid verdicts: pass_on_grid means no violation was
/// found, not that the axiom is proved. A fail always carries a witness that
/// re-fails when re-evaluated.
template <class P>
std::vector<AxiomReport<P>> verify_axioms(const FuzzySpace<P>& space,
                                          const TNorm& norm,
                                          std::span<const P> points,
                                          std::span<const double> t_grid,
                                          std::span<const Axiom> which,
                                          double tolerance = kDefaultTolerance) {
    if (points.size() < 3) throw invalid_input("verify_axioms: need at least 3 points");
    if (t_grid.size() < 2) throw invalid_input("verify_axioms: need at least 2 grid times");
    constexpr double kSlack = 1e-12;

    std::vector<AxiomReport<P>> reports;
    for (Axiom axiom : which) {
        AxiomReport<P> report;
        report.axiom = axiom;
        report.verdict = Verdict::pass_on_grid;
        auto fail = [&](AxiomWitness<P> w) {
            report.verdict = Verdict::fail;
            report.witness = std::move(w);
        };

        switch (axiom) {
            case Axiom::km1: {
                for (const P& x : points) {
                    for (const P& y : points) {
                        if (std::abs(space.eval(x, y, 0.0)) > kSlack) {
                            fail({x, y, std::nullopt, 0.0, 0.0});
                            break;
                        }
                    }
                    if (report.verdict == Verdict::fail) break;
                }
                break;
            }
            case Axiom::km2:
            case Axiom::gv2: {
                for (const P& x : points) {
                    for (const P& y : points) {
                        if (point_traits<P>::equal(x, y)) {
                            for (double t : t_grid) {
                                if (t <= 0.0) continue;
                                if (std::abs(space.eval(x, y, t) - 1.0) > kSlack) {
                                    fail({x, y, std::nullopt, t, 0.0});
                                    break;
                                }
                            }
                        } else {
                            bool somewhere_below_one = false;
                            for (double t : t_grid) {
                                if (t <= 0.0) continue;
                                if (space.eval(x, y, t) < 1.0 - kSlack) {
                                    somewhere_below_one = true;
                                    break;
                                }
                            }
                            if (!somewhere_below_one) {
                                fail({x, y, std::nullopt, t_grid.front(), 0.0});
                            }
                        }
                        if (report.verdict == Verdict::fail) break;
                    }
                    if (report.verdict == Verdict::fail) break;
                }
                break;
            }
            case Axiom::km3:
            case Axiom::gv3: {
                for (const P& x : points) {
                    for (const P& y : points) {
                        for (double t : t_grid) {
                            if (t <= 0.0) continue;
                            if (std::abs(space.eval(x, y, t) - space.eval(y, x, t)) > kSlack) {
                                fail({x, y, std::nullopt, t, 0.0});
                                break;
                            }
                        }
                        if (report.verdict == Verdict::fail) break;
                    }
                    if (report.verdict == Verdict::fail) break;
                }
                break;
            }
            case Axiom::km4:
            case Axiom::gv4: {
                for (const P& x : points) {
                    for (const P& y : points) {
                        for (const P& z : points) {
                            for (double t : t_grid) {
                                for (double s : t_grid) {
                                    if (t <= 0.0 || s <= 0.0) continue;
                                    const double lhs = space.eval(x, z, t + s);
                                    const double rhs = norm.apply(space.eval(x, y, t), space.eval(y, z, s));
                                    if (lhs < rhs - kSlack) {
                                        fail({x, y, z, t, s});
                                        break;
                                    }
                                }
                                if (report.verdict == Verdict::fail) break;
                            }
                            if (report.verdict == Verdict::fail) break;
                        }
                        if (report.verdict == Verdict::fail) break;
                    }
                    if (report.verdict == Verdict::fail) break;
                }
                break;
            }
            case Axiom::km5: {
                for (const P& x : points) {
                    for (const P& y : points) {
                        for (double t : t_grid) {
                            if (t <= 0.0) continue;
                            double bad_s = 0.0;
                            if (!detail::left_continuous_at(space, x, y, t, tolerance, bad_s)) {
                                fail({x, y, std::nullopt, t, bad_s});
                                break;
                            }
                        }
                        if (report.verdict == Verdict::fail) break;
                    }
                    if (report.verdict == Verdict::fail) break;
                }
                break;
            }
            case Axiom::gv5: {
                for (const P& x : points) {
                    for (const P& y : points) {
                        for (double t : t_grid) {
                            if (t <= 0.0) continue;
                            double bad_s = 0.0;
                            if (!detail::left_continuous_at(space, x, y, t, tolerance, bad_s) ||
                                !detail::right_continuous_at(space, x, y, t, tolerance, bad_s)) {
                                fail({x, y, std::nullopt, t, bad_s});
                                break;
                            }
                        }
                        if (report.verdict == Verdict::fail) break;
                    }
                    if (report.verdict == Verdict::fail) break;
                }
                break;
            }
            case Axiom::gv1: {
                for (const P& x : points) {
                    for (const P& y : points) {
                        for (double t : t_grid) {
                            if (t <= 0.0) continue;
                            if (!(space.eval(x, y, t) > 0.0)) {
                                fail({x, y, std::nullopt, t, 0.0});
                                break;
                            }
                        }
                        if (report.verdict == Verdict::fail) break;
                    }
                    if (report.verdict == Verdict::fail) break;
                }
                break;
            }
            case Axiom::non_archimedean: {
                for (const P& x : points) {
                    for (const P& y : points) {
                        for (const P& z : points) {
                            for (double t : t_grid) {
                                if (t <= 0.0) continue;
                                const double lhs = space.eval(x, z, t);
                                const double rhs = norm.apply(space.eval(x, y, t), space.eval(y, z, t));
                                if (lhs < rhs - kSlack) {
                                    fail({x, y, z, t, t});
                                    break;
                                }
                            }
                            if (report.verdict == Verdict::fail) break;
                        }
                        if (report.verdict == Verdict::fail) break;
                    }
                    if (report.verdict == Verdict::fail) break;
                }
                break;
            }
            case Axiom::monotone_in_t: {
                for (const P& x : points) {
                    for (const P& y : points) {
                        for (double t : t_grid) {
                            for (double s : t_grid) {
                                if (t < 0.0 || s < 0.0 || t > s) continue;
                                if (space.eval(x, y, t) > space.eval(x, y, s) + kSlack) {
                                    fail({x, y, std::nullopt, t, s});
                                    break;
                                }
                            }
                            if (report.verdict == Verdict::fail) break;
                        }
                        if (report.verdict == Verdict::fail) break;
                    }
                    if (report.verdict == Verdict::fail) break;
                }
                break;
            }
        }
        reports.push_back(std::move(report));
    }
    return reports;
}

/// Single-time triangle inequality M(x,z,t) >= M(x,y,t) * M(y,z,t) on all
/// sampled triples and times.
template <class P>
AxiomReport<P> verify_non_archimedean(const FuzzySpace<P>& space,
                                      const TNorm& norm,
                                      std::span<const P> points,
                                      std::span<const double> t_grid) {
    const std::vector<Axiom> which = {Axiom::non_archimedean};
    return verify_axioms(space, norm, points, t_grid, which).front();
}

// ---------------------------------------------------------------------------
// Empirical sequence predicates (desk-scale approximations, not decision
// procedures)
// ---------------------------------------------------------------------------

struct SequenceViolation {
    std::size_t n = 0;
    std::size_t m = 0;  // equal to n for the convergence predicate
    double eps = 0.0;
    double t = 0.0;
};

template <class P>
struct EmpiricalCheck {
    bool holds = false;
    std::optional<SequenceViolation> witness;
};

/// True iff M(x_n, x_m, t) > 1 - eps for every sampled (eps, t) and every
/// pair window <= n < m.
template <class P>
EmpiricalCheck<P> empirically_cauchy(const FuzzySpace<P>& space,
                                     std::span<const P> seq,
                                     std::span<const double> eps_grid,
                                     std::span<const double> t_grid,
                                     std::size_t window) {
    if (window >= seq.size()) throw invalid_input("empirically_cauchy: window beyond sequence");
    for (double eps : eps_grid) {
        for (double t : t_grid) {
            if (t <= 0.0) continue;
            for (std::size_t n = window; n < seq.size(); ++n) {
                for (std::size_t m = n + 1; m < seq.size(); ++m) {
                    if (!(space.eval(seq[n], seq[m], t) > 1.0 - eps)) {
                        return {false, SequenceViolation{n, m, eps, t}};
                    }
                }
            }
        }
    }
    return {true, std::nullopt};
}

/// True iff M(x_n, limit, t) > 1 - eps for every sampled (eps, t) and every
/// n >= window.
template <class P>
EmpiricalCheck<P> empirically_convergent(const FuzzySpace<P>& space,
                                         std::span<const P> seq,
                                         const P& limit,
                                         std::span<const double> eps_grid,
                                         std::span<const double> t_grid,
                                         std::size_t window) {
    if (window >= seq.size()) throw invalid_input("empirically_convergent: window beyond sequence");
    for (double eps : eps_grid) {
        for (double t : t_grid) {
            if (t <= 0.0) continue;
            for (std::size_t n = window; n < seq.size(); ++n) {
                if (!(space.eval(seq[n], limit, t) > 1.0 - eps)) {
                    return {false, SequenceViolation{n, n, eps, t}};
                }
            }
        }
    }
    return {true, std::nullopt};
}

}  // namespace fms
