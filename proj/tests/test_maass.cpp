#include "doctest.h"
#include "test_util.hpp"

#include "hs/errors.hpp"
#include "hs/maass.hpp"
#include "hs/specfun.hpp"

#include <cmath>

using namespace hs::maass;
using hs::hypgeom::HPoint;

namespace {

constexpr double kOddR = 9.5336952613535575;
constexpr double kEvenR = 13.779751351890738;

// Divisor counts satisfy the multiplicative relations exactly.
FourierCoefficients divisor_counts(int n_max)
{
    FourierCoefficients c;
    c.a.assign(n_max, 0.0);
    for (int d = 1; d <= n_max; ++d)
        for (int n = d; n <= n_max; n += d) c.a[n - 1] += 1.0;
    return c;
}

const SpectralPoint& odd_form()
{
    static const SpectralPoint p = make_spectral_point(kOddR, Symmetry::odd);
    return p;
}

const SpectralPoint& even_form()
{
    static const SpectralPoint p = make_spectral_point(kEvenR, Symmetry::even);
    return p;
}

}  // namespace

TEST_CASE("symmetry names")
{
    CHECK(parse_symmetry("even") == Symmetry::even);
    CHECK(to_string(Symmetry::odd) == "odd");
    CHECK_THROWS_AS(parse_symmetry("Even"), hs::DomainError);
}

TEST_CASE("expansion evaluation")
{
    FourierCoefficients single{Symmetry::even, 4.0, {1.0}};
    CHECK(std::abs(expansion_eval(single, {0.0, 1.0}) - hs::specfun::bessel_k_imag(4.0, 2 * hs::specfun::kPi)) <
          1e-15);

    const auto& even = even_form().coefficients;
    const auto& odd = odd_form().coefficients;
    for (double x : {0.1, 0.37, 1.9}) {
        CHECK(expansion_eval(even, {-x, 0.9}) == expansion_eval(even, {x, 0.9}));
        CHECK(expansion_eval(odd, {-x, 0.9}) == -expansion_eval(odd, {x, 0.9}));
    }

    // more terms than needed at y = 1.5 change nothing
    FourierCoefficients shorter = odd;
    shorter.a.resize(20);
    FourierCoefficients longer = odd;
    longer.a.resize(30);
    const HPoint z{0.21, 1.5};
    const double v20 = expansion_eval(shorter, z), v30 = expansion_eval(longer, z);
    CHECK(std::abs(v20 - v30) <= 1e-10 * std::abs(v30));
    CHECK(expansion_eval_scaled(longer, z) == doctest::Approx(v30 * std::exp(hs::specfun::kPi * kOddR / 2)).epsilon(1e-14));
}

TEST_CASE("collocation system")
{
    CHECK_THROWS_AS(build_collocation_system(9.5, Symmetry::odd, std::sqrt(3.0) / 2, 10), hs::DomainError);
    CHECK_THROWS_AS(build_collocation_system(9.5, Symmetry::odd, 0.9, 10), hs::DomainError);
    CHECK_THROWS_AS(build_collocation_system(9.5, Symmetry::odd, 0.5, 0), hs::DomainError);

    const auto tiny = solve_coefficients(9.5, Symmetry::odd, 0.5, 1);
    CHECK(tiny.coefficients.truncation() == 1);
    CHECK(tiny.coefficients.at(1) == 1.0);

    // Coefficients solved at one height satisfy the other height's equations.
    const int M = truncation_for(kOddR, 0.5);
    const auto sys = build_collocation_system(kOddR, Symmetry::odd, 0.55, M);
    CHECK(sys.points == 2 * (M + 4));
    const auto other = solve_coefficients(kOddR, Symmetry::odd, 0.50, M);
    Eigen::VectorXd a(M);
    for (int n = 1; n <= M; ++n) a(n - 1) = other.coefficients.at(n);
    CHECK((sys.full * a).cwiseAbs().maxCoeff() < 1e-8);
    CHECK(other.condition_estimate < 1e12);
}

TEST_CASE("two-height consistency")
{
    const int M = truncation_for(kOddR, 0.5);
    const auto c1 = solve_coefficients(kOddR, Symmetry::odd, 0.5, M).coefficients;
    const auto c2 = solve_coefficients(kOddR, Symmetry::odd, 0.45, M).coefficients;
    for (int n = 2; n <= 6; ++n) CHECK(std::abs(c1.at(n) - c2.at(n)) < 1e-6);

    CHECK(consistency_residual(kOddR, Symmetry::odd) < 1e-6);
    CHECK(consistency_residual(kEvenR, Symmetry::even) < 1e-6);
    CHECK(consistency_residual(5.0, Symmetry::odd) > 1e-2);
    CHECK(consistency_residual(kOddR, Symmetry::even) > 1e-2);
    CHECK(consistency_residual(kEvenR, Symmetry::odd) > 1e-2);

    for (double r = 3.0; r < 15.0; r += 0.37) {
        const double v = consistency_residual(r, Symmetry::even);
        CHECK(std::isfinite(v));
    }
}

TEST_CASE("hecke residual of exactly multiplicative data")
{
    const auto d = divisor_counts(60);
    CHECK(hecke_residual_upto(d, 60) == 0.0);
    auto broken = d;
    broken.a[5] += 0.25;  // a(6)
    // (2,3) is off by 0.25 and (2,6) by a(2) * 0.25 = 0.5
    CHECK(hecke_residual_upto(broken, 30) == doctest::Approx(0.5));
    CHECK(hecke_residual_upto(broken, 6) == doctest::Approx(0.25));
    CHECK_THROWS_AS(hecke_residual_upto(divisor_counts(10), 30), hs::IndexRangeError);
}

TEST_CASE("coefficient extension")
{
    const int M = truncation_for(kOddR, 0.5);
    const auto base = solve_coefficients(kOddR, Symmetry::odd, 0.55, M).coefficients;
    const auto ext = extend_coefficients(base, 60);
    CHECK(ext.truncation() == 60);
    for (int n = 2; n <= 5; ++n) CHECK(std::abs(ext.at(n) - base.at(n)) < 1e-8);
    CHECK(hecke_residual_upto(ext, 60) < 1e-6);
    // a(p^{k+1}) = a(p) a(p^k) - a(p^{k-1})
    for (int p : {2, 3}) {
        int pk = p;
        for (int k = 1; k <= 3 && pk * p <= 60; ++k, pk *= p) {
            const double prev = (k == 1) ? 1.0 : ext.at(pk / p);
            CHECK(std::abs(ext.at(pk * p) - (ext.at(p) * ext.at(pk) - prev)) < 1e-5);
        }
    }
    CHECK_THROWS_AS(extend_coefficients(FourierCoefficients{Symmetry::odd, 1.0, {2.0}}, 5), hs::DomainError);
}

TEST_CASE("accepted forms are automorphic and decay in the cusp")
{
    for (const SpectralPoint* p : {&odd_form(), &even_form()}) {
        CHECK(p->lambda == 0.25 + p->r * p->r);
        CHECK(p->residual_hecke < 1e-5);
        const auto& c = p->coefficients;
        double fmax = 0.0, worst = 0.0;
        for (int i = 0; i < 20; ++i) {
            const HPoint z{hs::testing::uniform(-0.5, 0.5), hs::testing::uniform(0.15, 0.8)};
            const auto red = hs::hypgeom::reduce_to_fundamental_domain(z);
            const double f = expansion_eval(c, z), g = expansion_eval(c, red.point);
            fmax = std::max({fmax, std::abs(f), std::abs(g)});
            worst = std::max(worst, std::abs(f - g));
        }
        CHECK(worst < 1e-5 * fmax);

        const double y_start = (p->r + 10.0) / (2 * hs::specfun::kPi);
        for (double x : {0.05, 0.2, 0.41}) {
            double previous = std::abs(expansion_eval(c, {x, y_start}));
            for (double y = y_start + 0.25; y < y_start + 6.0; y += 0.25) {
                const double v = std::abs(expansion_eval(c, {x, y}));
                CHECK(v < previous);
                previous = v;
            }
        }
    }
}

TEST_CASE("eigenvalue search")
{
    const auto odd = eigenvalue_search(9.0, 10.0, Symmetry::odd, 0.05);
    REQUIRE(odd.size() == 1);
    CHECK(std::abs(odd[0].r - kOddR) < 1e-8);
    CHECK(odd[0].residual_two_height < 1e-6);
    CHECK(odd[0].residual_hecke < 1e-5);
    CHECK(odd[0].coefficients.at(2) == doctest::Approx(-1.0683335509).epsilon(1e-8));

    const auto even = eigenvalue_search(13.0, 14.5, Symmetry::even, 0.05);
    REQUIRE(even.size() == 1);
    CHECK(std::abs(even[0].r - kEvenR) < 1e-8);

    CHECK(eigenvalue_search(1.0, 5.0, Symmetry::odd, 0.05).empty());
    CHECK(eigenvalue_search(9.0, 10.0, Symmetry::even, 0.05).empty());
    CHECK_THROWS_AS(eigenvalue_search(9.0, 10.0, Symmetry::odd, 0.1), hs::DomainError);
    CHECK_THROWS_AS(eigenvalue_search(0.0, 10.0, Symmetry::odd, 0.05), hs::DomainError);
}

TEST_CASE("eigenvalues are stable under solver perturbations")
{
    for (auto [sym, r0] : {std::pair{Symmetry::odd, kOddR}, std::pair{Symmetry::even, kEvenR}}) {
        SearchOptions base;
        const double r = refine_eigenvalue(r0 - 0.02, r0 + 0.02, sym, base);

        SearchOptions more_terms = base;
        more_terms.residual.M = int(std::ceil(1.25 * truncation_for(r0, 0.5)));
        CHECK(std::abs(refine_eigenvalue(r0 - 0.02, r0 + 0.02, sym, more_terms) - r) < 1e-6);

        for (double f : {0.9, 1.1}) {
            SearchOptions heights = base;
            heights.residual.y1 *= f;
            heights.residual.y2 *= f;
            CHECK(std::abs(refine_eigenvalue(r0 - 0.02, r0 + 0.02, sym, heights) - r) < 1e-6);
        }

        SearchOptions shifted = base;
        shifted.residual.collocation.phase = 0.3;
        CHECK(std::abs(refine_eigenvalue(r0 - 0.02, r0 + 0.02, sym, shifted) - r) < 1e-6);
    }
}
