#pragma once

#include <array>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>

#include "fms/common.hpp"
#include "fms/point_traits.hpp"

namespace fms {

/// An extensional binary relation on the point domain. The strict companion
/// (related and distinct) is derived on demand, never stored.
template <class P>
struct Relation {
    std::string label;
    std::function<bool(const P&, const P&)> holds;

    bool strict(const P& x, const P& y) const {
        return holds(x, y) && !point_traits<P>::equal(x, y);
    }
};

template <class P>
bool comparable(const Relation<P>& rel, const P& x, const P& y) {
    return rel.holds(x, y) || rel.holds(y, x);
}

/// Relation that holds between every pair of points.
template <class P>
Relation<P> trivial_relation() {
    return {"trivial", [](const P&, const P&) { return true; }};
}

/// x related to y whenever alpha(x, y) >= 1.
template <class P>
Relation<P> from_alpha(std::function<double(const P&, const P&)> alpha, std::string label = "alpha") {
    return {std::move(label),
            [alpha = std::move(alpha)](const P& x, const P& y) { return alpha(x, y) >= 1.0; }};
}

inline Relation<double> leq_reals() {
    return {"leq_reals", [](const double& x, const double& y) { return x <= y; }};
}

template <class P>
struct TransitivityCheck {
    bool holds = false;
    std::optional<std::array<P, 3>> witness;  // x rel y, y rel z, not x rel z
};

/// Exhaustive transitivity check over sampled triples.
template <class P>
TransitivityCheck<P> is_transitive(const Relation<P>& rel, std::span<const P> points) {
    if (points.size() < 3) throw invalid_input("is_transitive: need at least 3 sample points");
    for (const P& x : points) {
        for (const P& y : points) {
            if (!rel.holds(x, y)) continue;
            for (const P& z : points) {
                if (rel.holds(y, z) && !rel.holds(x, z)) {
                    return {false, std::array<P, 3>{x, y, z}};
                }
            }
        }
    }
    return {true, std::nullopt};
}

template <class P>
struct MonotonicityCheck {
    bool holds = false;
    std::optional<std::pair<P, P>> witness;  // x rel y but not Tx rel Ty
};

/// Checks that the map preserves the relation on all sampled pairs.
template <class P>
MonotonicityCheck<P> nondecreasing_map(const Relation<P>& rel,
                                       const std::function<P(const P&)>& map,
                                       std::span<const P> points) {
    for (const P& x : points) {
        for (const P& y : points) {
            if (rel.holds(x, y) && !rel.holds(map(x), map(y))) {
                return {false, std::pair<P, P>{x, y}};
            }
        }
    }
    return {true, std::nullopt};
}

}  // namespace fms
