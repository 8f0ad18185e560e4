#include "hs/hypgeom.hpp"

#include "hs/errors.hpp"

#include <cmath>

namespace hs::hypgeom {

namespace {

constexpr double kBoundaryTol = 1e-13;

}  // namespace

HPoint mobius_act(const UnimodularMatrix& g, const HPoint& z)
{
    if (!(z.y > 0.0)) throw DomainError("mobius_act: point not in the upper half-plane");
    if (g.det() != 1) throw DomainError("mobius_act: matrix is not unimodular");
    const double a = double(g.a), b = double(g.b), c = double(g.c), d = double(g.d);
    const double re = c * z.x + d;
    const double im = c * z.y;
    const double den = re * re + im * im;
    // (az + b)(conj(cz + d)) / |cz + d|^2
    const double nr = a * z.x + b;
    const double ni = a * z.y;
    return {(nr * re + ni * im) / den, z.y / den};
}

Reduction reduce_to_fundamental_domain(const HPoint& z, int max_steps)
{
    if (!(z.y > 0.0)) throw DomainError("reduce_to_fundamental_domain: y must be positive");
    HPoint w = z;
    UnimodularMatrix g = UnimodularMatrix::identity();
    const UnimodularMatrix s = UnimodularMatrix::inversion();
    for (int step = 0;; ++step) {
        // translate into [-1/2, 1/2)
        const double k = std::floor(w.x + 0.5);
        if (k != 0.0) {
            const auto shift = UnimodularMatrix::translation(-std::int64_t(k));
            g = shift * g;
            w.x -= k;
        }
        if (w.x >= 0.5 - kBoundaryTol) {
            g = UnimodularMatrix::translation(-1) * g;
            w.x -= 1.0;
        }
        const double norm = w.x * w.x + w.y * w.y;
        const bool inside = norm > 1.0 + kBoundaryTol;
        const bool on_circle = !inside && norm >= 1.0 - kBoundaryTol;
        if (inside || (on_circle && w.x <= 0.0)) break;
        if (step >= max_steps)
            throw IterationLimitError("reduce_to_fundamental_domain: too many inversions");
        g = s * g;
        w = {-w.x / norm, w.y / norm};
        // S maps a circle point x + iy to -x + iy, already reduced
        if (on_circle) break;
    }
    // The matrix is defined up to sign; fix a representative.
    if (g.a < 0 || (g.a == 0 && g.c < 0)) g = {-g.a, -g.b, -g.c, -g.d};
    return {w, g};
}

double geodesic_length(const UnimodularMatrix& g)
{
    const std::int64_t t = g.trace() < 0 ? -g.trace() : g.trace();
    if (t <= 2) throw NonHyperbolicError("geodesic_length: |trace| <= 2 is not hyperbolic");
    return 2.0 * std::acosh(0.5 * double(t));
}

}  // namespace hs::hypgeom
