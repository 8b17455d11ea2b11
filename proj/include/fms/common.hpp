#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace fms {

/// Degree of nearness between two points, always in [0, 1].
using MembershipDegree = double;

/// Thrown when an operation's input violates its stated preconditions.
class invalid_input : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Absolute convergence tolerance used by limit-style checks unless overridden.
inline constexpr double kDefaultTolerance = 1e-9;

/// Tolerance for deciding equality of floating-point domain points.
inline constexpr double kPointEqualityTolerance = 1e-12;

/// First index of the tail of a length-n sequence: the last 10% of the
/// terms, never fewer than 5 (all of them when n <= 5).
std::size_t tail_start(std::size_t n);

/// count evenly spaced values over [lo, hi], endpoints included.
std::vector<double> linspace(double lo, double hi, std::size_t count);

struct GridPair {
    double t = 0.0;
    double s = 0.0;
};

/// n x n uniform pair grid over [0,1]^2.
std::vector<GridPair> unit_pair_grid(std::size_t n);

/// Epsilon grid used by the empirical Cauchy/convergence predicates.
std::vector<double> default_eps_grid();   // {0.5, 0.1, 0.01, 0.001}

/// Time grid spanning the scales of the worked examples.
std::vector<double> default_t_grid();     // {0.01, 0.1, 1, 10}

/// Epsilon grid scanned by the NC witness extractor.
std::vector<double> nc_eps_grid();        // {0.1, 0.25, 0.5, 0.75}

/// Shortest decimal form of x that parses back to exactly x.
std::string format_double(double x);

/// Locale-independent parse of a decimal string; throws invalid_input.
double parse_double(const std::string& text);

/// Deterministic uniform generator (value stream is independent of the
/// standard library's distribution implementations).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    double uniform01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    std::size_t index(std::size_t n) { return static_cast<std::size_t>(gen_() % n); }

private:
    std::mt19937_64 gen_;
};

}  // namespace fms
