#pragma once

// Upper half-plane geometry for the modular group.

#include <cstdint>

namespace hs::hypgeom {

struct UnimodularMatrix {
    std::int64_t a = 1, b = 0, c = 0, d = 1;

    static UnimodularMatrix identity() { return {}; }
    static UnimodularMatrix translation(std::int64_t k) { return {1, k, 0, 1}; }
    static UnimodularMatrix inversion() { return {0, -1, 1, 0}; }

    std::int64_t det() const { return a * d - b * c; }
    std::int64_t trace() const { return a + d; }
    bool is_plus_minus_identity() const { return b == 0 && c == 0 && a == d && (a == 1 || a == -1); }

    friend UnimodularMatrix operator*(const UnimodularMatrix& x, const UnimodularMatrix& y)
    {
        return {x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d, x.c * y.a + x.d * y.c,
                x.c * y.b + x.d * y.d};
    }
    friend bool operator==(const UnimodularMatrix&, const UnimodularMatrix&) = default;
};

struct HPoint {
    double x = 0.0;
    double y = 1.0;
};

/// (az + b) / (cz + d). Throws DomainError unless y > 0 and det = 1.
HPoint mobius_act(const UnimodularMatrix& g, const HPoint& z);

struct Reduction {
    HPoint point;           // in the closed fundamental domain
    UnimodularMatrix map;   // point == mobius_act(map, z)
};

/// Pulls z back to |Re z| <= 1/2, |z| >= 1. Boundary points are mapped to a
/// unique representative: Re z = +1/2 goes to -1/2, and points on the unit
/// circle with Re z > 0 are inverted. Throws IterationLimitError when the
/// reduction does not terminate within `max_steps` inversions.
Reduction reduce_to_fundamental_domain(const HPoint& z, int max_steps = 200);

/// 2 acosh(|tr g| / 2). Throws NonHyperbolicError when |tr g| <= 2.
double geodesic_length(const UnimodularMatrix& g);

}  // namespace hs::hypgeom
