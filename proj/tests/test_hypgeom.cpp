#include "doctest.h"
#include "test_util.hpp"

#include "hs/errors.hpp"
#include "hs/hypgeom.hpp"

#include <cmath>
#include <numeric>

using namespace hs::hypgeom;

namespace {

bool in_domain(const HPoint& p)
{
    return std::abs(p.x) <= 0.5 + 1e-12 && p.x * p.x + p.y * p.y >= 1.0 - 1e-12;
}

bool close(const HPoint& p, const HPoint& q, double tol = 1e-12)
{
    return std::abs(p.x - q.x) < tol && std::abs(p.y - q.y) < tol;
}

// Brute force: the reduced point has the largest imaginary part in the orbit.
// Search bottom rows (c, d) and complete each to a matrix.
HPoint highest_orbit_point(const HPoint& z, int bound)
{
    double best_y = z.y;
    UnimodularMatrix best;
    for (std::int64_t c = 0; c <= bound; ++c)
        for (std::int64_t d = -bound; d <= bound; ++d) {
            if (std::gcd(c, d) != 1 || (c == 0 && d != 1)) continue;
            const double re = c * z.x + d, im = c * z.y;
            const double y = z.y / (re * re + im * im);
            if (y > best_y + 1e-14) {
                // a d - b c = 1 via extended Euclid
                std::int64_t a = 0, b = 0;
                for (std::int64_t t = -bound * 4; t <= bound * 4; ++t) {
                    if (c != 0 && (1 + t * c) % d == 0 && d != 0) {
                        a = (1 + t * c) / d;
                        b = t;
                        break;
                    }
                    if (d == 0) {
                        a = 0;
                        b = -1;
                        if (c != 1) continue;
                        break;
                    }
                }
                UnimodularMatrix g{a, b, c, d};
                if (g.det() != 1) continue;
                best_y = y;
                best = g;
            }
        }
    HPoint w = mobius_act(best, z);
    w.x -= std::floor(w.x + 0.5);
    return w;
}

}  // namespace

TEST_CASE("mobius action basics")
{
    const HPoint z{0.3, 0.7};
    CHECK(close(mobius_act(UnimodularMatrix::identity(), z), z));
    CHECK(close(mobius_act(UnimodularMatrix::translation(1), {0.0, 1.0}), {1.0, 1.0}));
    CHECK(close(mobius_act(UnimodularMatrix::inversion(), {0.0, 2.0}), {0.0, 0.5}));
    CHECK_THROWS_AS(mobius_act(UnimodularMatrix{2, 0, 0, 1}, z), hs::DomainError);
    CHECK_THROWS_AS(mobius_act(UnimodularMatrix::identity(), {0.0, -1.0}), hs::DomainError);
}

TEST_CASE("mobius action is a group action and scales Im correctly")
{
    const UnimodularMatrix g1{2, 1, 1, 1}, g2{1, -3, 1, -2}, g3{5, 2, 7, 3};
    for (int i = 0; i < 50; ++i) {
        const HPoint z{hs::testing::uniform(-3.0, 3.0), hs::testing::uniform(0.05, 4.0)};
        for (const auto& [p, q] : {std::pair{g1, g2}, std::pair{g2, g3}, std::pair{g3, g1}}) {
            const HPoint lhs = mobius_act(p * q, z);
            const HPoint rhs = mobius_act(p, mobius_act(q, z));
            CHECK(close(lhs, rhs, 1e-12 * (1 + std::abs(lhs.x) + lhs.y)));
            const double re = q.c * z.x + q.d, im = q.c * z.y;
            CHECK(std::abs(mobius_act(q, z).y - z.y / (re * re + im * im)) < 1e-12);
        }
    }
}

TEST_CASE("reduction to the fundamental domain")
{
    const auto id = reduce_to_fundamental_domain({0.0, 1.0});
    CHECK(close(id.point, {0.0, 1.0}));
    CHECK(id.map.is_plus_minus_identity());

    const HPoint z{5.3, 0.8};
    const auto red = reduce_to_fundamental_domain(z);
    CHECK(in_domain(red.point));
    CHECK(red.map.det() == 1);
    CHECK(close(mobius_act(red.map, z), red.point));
    CHECK(close(red.point, highest_orbit_point(z, 20), 1e-12));

    const auto tie = reduce_to_fundamental_domain({0.5, 2.0});
    CHECK(close(tie.point, {-0.5, 2.0}));

    // right half of the unit circle goes to the left half
    const double t = 0.4;
    const auto circ = reduce_to_fundamental_domain({t, std::sqrt(1 - t * t)});
    CHECK(close(circ.point, {-t, std::sqrt(1 - t * t)}));
}

TEST_CASE("reduction agrees with the brute-force orbit search and is idempotent")
{
    for (int i = 0; i < 200; ++i) {
        const HPoint z{hs::testing::uniform(-4.0, 4.0), hs::testing::uniform(0.02, 1.5)};
        const auto red = reduce_to_fundamental_domain(z);
        REQUIRE(in_domain(red.point));
        CHECK(close(mobius_act(red.map, z), red.point, 1e-10));
        CHECK(close(red.point, highest_orbit_point(z, 60), 1e-9));
        const auto again = reduce_to_fundamental_domain(red.point);
        CHECK(again.map.is_plus_minus_identity());
        CHECK(close(again.point, red.point, 1e-15));
    }
    CHECK_THROWS_AS(reduce_to_fundamental_domain({std::sqrt(2.0) - 1.0, 1e-9}, 5), hs::IterationLimitError);
}

TEST_CASE("geodesic length from the trace")
{
    const UnimodularMatrix g{2, 1, 1, 1};
    // oracle: log of the squared larger eigenvalue of g
    const double lam = (3.0 + std::sqrt(5.0)) / 2.0;
    CHECK(std::abs(geodesic_length(g) - 2.0 * std::log(lam)) < 1e-13);
    CHECK(std::abs(geodesic_length(g) - 1.9248473002384139) < 1e-13);
    CHECK(geodesic_length(UnimodularMatrix{-2, -1, -1, -1}) == geodesic_length(g));
    CHECK_THROWS_AS(geodesic_length(UnimodularMatrix::translation(1)), hs::NonHyperbolicError);
    CHECK_THROWS_AS(geodesic_length(UnimodularMatrix::inversion()), hs::NonHyperbolicError);
}
