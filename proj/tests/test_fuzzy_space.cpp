#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <functional>
#include <vector>

#include "fms/common.hpp"
#include "fms/fuzzy_space.hpp"

using namespace fms;

namespace {

std::function<double(const double&, const double&)> euclidean() {
    return [](const double& x, const double& y) { return std::abs(x - y); };
}

std::function<double(const double&, const double&)> discrete_metric() {
    return [](const double& x, const double& y) { return x == y ? 0.0 : 1.0; };
}

double ratio_vartheta(double t) { return t / (1.0 + t); }

bool all_pass(const std::vector<AxiomReport<double>>& reports) {
    for (const auto& r : reports) {
        if (r.verdict != Verdict::pass_on_grid) return false;
    }
    return true;
}

}  // namespace

TEST_CASE("canonical metric space values") {
    const auto space = from_metric<double>(euclidean());
    CHECK(space.eval(0.0, 1.0, 1.0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(space.eval(3.0, 3.0, 0.25) == 1.0);
    CHECK(space.eval(0.0, 5.0, 0.0) == 0.0);

    // spot check rejects an asymmetric "metric"
    const std::vector<double> pts = {0.0, 1.0, 2.0};
    CHECK_THROWS_AS(from_metric<double>([](const double& x, const double& y) { return std::max(x - y, 0.0); },
                                        "broken", pts),
                    invalid_input);
}

TEST_CASE("canonical construction stays strictly inside (0,1) and saturates as t grows") {
    const auto space = from_metric<double>(euclidean());
    Rng rng(5);
    for (int i = 0; i < 50; ++i) {
        const double x = rng.uniform(-5.0, 5.0);
        double y = rng.uniform(-5.0, 5.0);
        if (x == y) y += 1.0;
        for (double t : default_t_grid()) {
            const double m = space.eval(x, y, t);
            CHECK(m > 0.0);
            CHECK(m < 1.0);
        }
        double previous = 0.0;
        for (int k = 1; k <= 6; ++k) {
            const double m = space.eval(x, y, std::pow(10.0, k));
            CHECK(m >= previous);
            previous = m;
        }
        CHECK(previous > 1.0 - 1e-4);  // within 1e-4 of 1 by t = 10^6 for |x-y| <= 10
    }
}

TEST_CASE("exponential construction values and rejection") {
    const auto space = exponential_space<double>(euclidean(), ratio_vartheta);
    CHECK(space.eval(0.0, 1.0, 1.0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(space.eval(2.0, 2.0, 0.7) == 1.0);
    // direct arithmetic oracle: (1/2)^2
    CHECK(space.eval(0.0, 2.0, 1.0) == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(space.eval(0.0, 1.0, 0.0) == 0.0);

    CHECK_THROWS_AS(exponential_space<double>(euclidean(), [](double) { return 1.5; }), invalid_input);
    CHECK_THROWS_AS(exponential_space<double>(euclidean(), [](double t) { return 1.0 / (1.0 + t); }),
                    invalid_input);
}

TEST_CASE("stationary ratio space") {
    const auto space = stationary_ratio_space();
    CHECK(space.eval(2.0, 4.0, 1.0) == 0.5);
    CHECK(space.eval(3.0, 3.0, 0.1) == 1.0);
    CHECK(space.eval(1.0, 3.0, 0.1) == space.eval(1.0, 3.0, 100.0));
    CHECK_THROWS_AS(space.eval(-1.0, 2.0, 1.0), invalid_input);
}

TEST_CASE("axiom suite passes for the canonical construction") {
    const auto space = from_metric<double>(euclidean());
    const auto norm = builtin_tnorm("product");
    const std::vector<double> pts = {0.0, 1.0, 2.0, 3.5, -1.0};
    const auto t_grid = default_t_grid();

    const auto km = verify_axioms<double>(space, norm, pts, t_grid, km_axioms());
    CHECK(all_pass(km));
    const auto gv = verify_axioms<double>(space, norm, pts, t_grid, gv_axioms());
    CHECK(all_pass(gv));

    const std::vector<Axiom> grabiec = {Axiom::monotone_in_t};
    CHECK(all_pass(verify_axioms<double>(space, norm, pts, t_grid, grabiec)));
}

TEST_CASE("deliberately asymmetric evaluator fails symmetry with a working witness") {
    FuzzySpace<double> space{"asymmetric", [](const double& x, const double& y, double t) {
                                 if (t == 0.0) return 0.0;
                                 return t / (t + std::max(x - y, 0.0));
                             }};
    const auto norm = builtin_tnorm("product");
    const std::vector<double> pts = {0.0, 1.0, 2.0};
    const std::vector<Axiom> which = {Axiom::km3};
    const auto reports = verify_axioms<double>(space, norm, pts, default_t_grid(), which);
    REQUIRE(reports.size() == 1);
    CHECK(reports[0].verdict == Verdict::fail);
    REQUIRE(reports[0].witness.has_value());
    const auto& w = *reports[0].witness;
    CHECK(space.eval(w.x, w.y, w.t) != space.eval(w.y, w.x, w.t));
}

TEST_CASE("stationary space satisfies positivity on a grid of positive points") {
    const auto space = stationary_ratio_space();
    const auto norm = builtin_tnorm("minimum");
    const std::vector<double> pts = {0.5, 1.0, 2.0, 8.0};
    const std::vector<Axiom> which = {Axiom::gv1};
    CHECK(all_pass(verify_axioms<double>(space, norm, pts, default_t_grid(), which)));
}

TEST_CASE("single-time triangle inequality: product passes, minimum fails on the forced family") {
    const auto space = from_metric<double>(euclidean());
    const std::vector<double> pts = {0.0, 1.0, 2.0};
    const auto t_grid = default_t_grid();

    CHECK(verify_non_archimedean<double>(space, builtin_tnorm("product"), pts, t_grid).verdict ==
          Verdict::pass_on_grid);

    const auto fail = verify_non_archimedean<double>(space, builtin_tnorm("minimum"), pts, t_grid);
    CHECK(fail.verdict == Verdict::fail);
    REQUIRE(fail.witness.has_value());
    const auto& w = *fail.witness;
    REQUIRE(w.z.has_value());
    // The witness family is exactly d(x,z) > max(d(x,y), d(y,z)).
    const auto d = euclidean();
    CHECK(d(w.x, *w.z) > std::max(d(w.x, w.y), d(w.y, *w.z)));

    const auto discrete = from_metric<double>(discrete_metric(), "md_discrete");
    CHECK(verify_non_archimedean<double>(discrete, builtin_tnorm("minimum"), pts, t_grid).verdict ==
          Verdict::pass_on_grid);
}

TEST_CASE("non-archimedean witness re-fails when re-evaluated") {
    const auto space = from_metric<double>(euclidean());
    const auto norm = builtin_tnorm("minimum");
    const std::vector<double> pts = {0.0, 1.0, 2.0};
    const auto report = verify_non_archimedean<double>(space, norm, pts, default_t_grid());
    REQUIRE(report.witness.has_value());
    const auto& w = *report.witness;
    CHECK(space.eval(w.x, *w.z, w.t) < norm.apply(space.eval(w.x, w.y, w.t), space.eval(w.y, *w.z, w.s)));
}

TEST_CASE("grid verdicts: spaces passing the GV axioms also pass the KM axioms") {
    // The t = 0 extension is built into every constructor.
    const auto norm = builtin_tnorm("product");
    const std::vector<double> pts = {0.0, 0.5, 1.0, 2.0, 4.0};
    const auto t_grid = default_t_grid();

    const std::vector<FuzzySpace<double>> spaces = {
        from_metric<double>(euclidean()),
        exponential_space<double>(euclidean(), ratio_vartheta),
    };
    for (const auto& space : spaces) {
        INFO(space.label);
        if (all_pass(verify_axioms<double>(space, norm, pts, t_grid, gv_axioms()))) {
            CHECK(all_pass(verify_axioms<double>(space, norm, pts, t_grid, km_axioms())));
        }
    }
}

TEST_CASE("monotonicity in t holds for every constructed instance on sampled pairs") {
    const auto norm = builtin_tnorm("product");
    Rng rng(99);
    std::vector<double> pts;
    for (int i = 0; i < 10; ++i) pts.push_back(rng.uniform(0.1, 9.0));
    const std::vector<Axiom> which = {Axiom::monotone_in_t};
    const std::vector<FuzzySpace<double>> spaces = {
        from_metric<double>(euclidean()),
        exponential_space<double>(euclidean(), ratio_vartheta),
        stationary_ratio_space(),
    };
    for (const auto& space : spaces) {
        INFO(space.label);
        CHECK(all_pass(verify_axioms<double>(space, norm, pts, default_t_grid(), which)));
    }
}

TEST_CASE("empirical Cauchy predicate") {
    const auto space = from_metric<double>(euclidean());
    const auto eps = default_eps_grid();
    const auto ts = default_t_grid();

    std::vector<double> constant(40, 2.5);
    CHECK(empirically_cauchy<double>(space, constant, eps, ts, 5).holds);

    std::vector<double> divergent;
    for (int n = 0; n < 40; ++n) divergent.push_back(n);
    const auto check = empirically_cauchy<double>(space, divergent, eps, ts, 5);
    CHECK_FALSE(check.holds);
    REQUIRE(check.witness.has_value());
    CHECK(space.eval(divergent[check.witness->n], divergent[check.witness->m], check.witness->t) <=
          1.0 - check.witness->eps);

    // Orbit of a classical contraction: Cauchy by the classical oracle.
    std::vector<double> orbit = {1.0};
    for (int n = 0; n < 99; ++n) orbit.push_back(0.5 * std::log1p(orbit.back()));
    CHECK(empirically_cauchy<double>(space, orbit, eps, ts, 50).holds);

    CHECK_THROWS_AS(empirically_cauchy<double>(space, constant, eps, ts, 40), invalid_input);
}

TEST_CASE("empirical convergence predicate") {
    const auto space = from_metric<double>(euclidean());
    const auto eps = default_eps_grid();
    const auto ts = default_t_grid();

    std::vector<double> constant(30, 1.25);
    CHECK(empirically_convergent<double>(space, constant, 1.25, eps, ts, 3).holds);

    // 1/n -> 0: the classical limit is the oracle. The smallest sampled eps
    // at the smallest t demands 1/n < eps * t / (1 - eps) ~ 1e-5, so the
    // window starts deep enough in the tail.
    std::vector<double> reciprocal;
    for (int n = 1; n <= 200000; ++n) reciprocal.push_back(1.0 / n);
    CHECK(empirically_convergent<double>(space, reciprocal, 0.0, eps, ts, 150000).holds);

    std::vector<double> alternating;
    for (int i = 0; i < 30; ++i) alternating.push_back(i % 2 == 0 ? 1.0 : -1.0);
    const auto check = empirically_convergent<double>(space, alternating, 0.0, eps, ts, 3);
    CHECK_FALSE(check.holds);
    REQUIRE(check.witness.has_value());
}

TEST_CASE("stationary ratio space satisfies the single-time triangle under the product norm") {
    const auto space = stationary_ratio_space();
    const std::vector<double> pts = {0.25, 0.5, 1.0, 2.0, 4.0, 9.0};
    CHECK(verify_non_archimedean<double>(space, builtin_tnorm("product"), pts, default_t_grid())
              .verdict == Verdict::pass_on_grid);
}

TEST_CASE("exponential construction satisfies the single-time triangle under the product norm") {
    const auto space = exponential_space<double>(euclidean(), ratio_vartheta);
    const std::vector<double> pts = {0.0, 0.7, 1.5, 3.0, 8.0};
    CHECK(verify_non_archimedean<double>(space, builtin_tnorm("product"), pts, default_t_grid())
              .verdict == Verdict::pass_on_grid);
}

TEST_CASE("empirical limits are unique on constructed instances (randomized)") {
    // With a 1-boundary-continuous norm the limit of an M-convergent sequence
    // is unique; at desk scale: a sequence passing the convergence predicate
    // toward L must fail it toward any separated L'.
    const auto space = from_metric<double>(euclidean());
    const auto eps = default_eps_grid();
    const auto ts = default_t_grid();
    Rng rng(321);
    for (int round = 0; round < 30; ++round) {
        const double limit = rng.uniform(-3.0, 3.0);
        const double rate = rng.uniform(0.3, 0.7);
        const double scale = rng.uniform(0.1, 2.0);
        std::vector<double> seq;
        double offset = scale;
        for (int i = 0; i < 120; ++i) {
            seq.push_back(limit + offset);
            offset *= rate;
        }
        CHECK(empirically_convergent<double>(space, seq, limit, eps, ts, 100).holds);
        const double separated = limit + rng.uniform(0.5, 2.0);
        CHECK_FALSE(empirically_convergent<double>(space, seq, separated, eps, ts, 100).holds);
    }
}

TEST_CASE("km5 trend probe flags a left-discontinuous evaluator") {
    // Jump in t at t0 = 1: constant 0.2 below, canonical above.
    FuzzySpace<double> jumpy{"jump", [](const double& x, const double& y, double t) {
                                 if (t == 0.0) return 0.0;
                                 if (t < 1.0) return 0.2;
                                 return t / (t + std::abs(x - y));
                             }};
    const std::vector<double> pts = {0.0, 1.0, 2.0};
    const std::vector<double> t_grid = {0.5, 1.0, 2.0};
    const std::vector<Axiom> which = {Axiom::km5};
    const auto reports =
        verify_axioms<double>(jumpy, builtin_tnorm("product"), pts, t_grid, which);
    CHECK(reports[0].verdict == Verdict::fail);
}
