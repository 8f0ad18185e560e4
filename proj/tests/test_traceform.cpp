#include "doctest.h"
#include "test_util.hpp"

#include "hs/diagnostics.hpp"
#include "hs/errors.hpp"
#include "hs/quadrature.hpp"
#include "hs/scattering.hpp"
#include "hs/traceform.hpp"

#include <cmath>
#include <string>
#include <vector>

using namespace hs;
using namespace hs::traceform;
using specfun::kPi;

namespace {

// odd and even spectral parameters of SL(2,Z) below 25, from the collocation scan
const std::vector<double> kSpectrum = {
    9.5336952614,  12.1730083247, 13.7797513519, 14.3585095183, 16.1380731716, 16.6442592019, 17.7385633811,
    18.1809178345, 19.4234814708, 19.4847138547, 20.1066946826, 21.3157959402, 21.4790575447, 22.1946739776,
    22.7859084942, 23.2013961812, 23.2637115379, 24.1123527298, 24.4197154423,
};

struct CaptureWarnings {
    std::vector<std::string> seen;
    CaptureWarnings()
    {
        set_warning_sink([this](const std::string& m) { seen.push_back(m); });
    }
    ~CaptureWarnings() { set_warning_sink(nullptr); }
};

}  // namespace

TEST_CASE("bump pair")
{
    const auto p = make_bump_pair(1.0);
    // mpmath: 2 int_0^1 g(u) cos(ru) du with int g = 1
    const std::pair<double, double> ref[] = {
        {1.0, 0.923119010817905241},     {5.0, -4.780470058555183559e-4}, {20.0, -1.265564810795117242e-3},
        {100.0, 5.033858548821395e-6}, {300.0, 6.955078713770444e-10},  {1000.0, 4.988449358102241e-16},
    };
    for (auto [r, v] : ref) {
        CHECK(std::abs(p.h(r) - v) < 1e-13 * std::max(1.0, std::abs(v)) + 1e-16);
        CHECK(p.h(-r) == doctest::Approx(p.h(r)).epsilon(1e-14));
    }
    CHECK(p.h(0.0) == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(p.g(0.0) == doctest::Approx(std::exp(-1.0) / 0.4439938161680794378).epsilon(1e-13));

    double worst = 0.0;
    for (double r = 0.0; r <= 100.0; r += 0.37) worst = std::max(worst, std::abs(p.h(r)) * std::pow(1.0 + r, 4));
    CHECK(worst < 1e4);

    CHECK(p.g(1.0) == 0.0);
    CHECK(p.g(-1.5) == 0.0);
    CHECK(p.g_prime(1.2) == 0.0);
    for (double u : {-0.7, -0.2, 0.1, 0.5, 0.9}) {
        const double d = 1e-5;
        const double fd = (p.g(u + d) - p.g(u - d)) / (2.0 * d);
        CHECK(std::abs(p.g_prime(u) - fd) < 1e-7 * std::max(1.0, std::abs(fd)));
    }

    CHECK(p.h_cumulative(0.0) == doctest::Approx(0.5 * p.h_mass()).epsilon(1e-13));
    CHECK(p.h_mass() == doctest::Approx(2.0 * kPi * p.g(0.0)));
    for (double x : {-3.0, 0.4, 2.0, 15.0}) {
        const double d = 1e-4;
        const double fd = (p.h_cumulative(x + d) - p.h_cumulative(x - d)) / (2.0 * d);
        CHECK(std::abs(fd - p.h(x)) < 1e-7);
    }
    CHECK(p.h_cumulative(400.0) == doctest::Approx(p.h_mass()).epsilon(1e-8));
    CHECK_THROWS_AS(make_bump_pair(0.0), DomainError);
}

TEST_CASE("shifted pair")
{
    const auto base = make_bump_pair(1.5);
    const auto s = shifted_pair(base, 7.0);
    for (double r : {-3.0, 0.0, 2.5, 9.0}) CHECK(s.h(r) == doctest::Approx(base.h(7.0 - r) + base.h(7.0 + r)));
    for (double u : {0.0, 0.3, 1.2}) CHECK(s.g(u) == doctest::Approx(2.0 * std::cos(7.0 * u) * base.g(u)));
    CHECK(s.h_cumulative(0.0) == doctest::Approx(0.5 * s.h_mass()).epsilon(1e-12));
    CHECK(s.h_mass() == doctest::Approx(2.0 * base.h_mass()));
}

TEST_CASE("Plancherel term")
{
    const double area = area_fundamental_domain();
    CHECK(std::abs(area - kPi / 3.0) < 1e-8);

    for (double a : {0.05, 0.5, 2.0}) {
        const auto p = make_gaussian_pair(a);
        const auto oracle = quad::adaptive(
            [a](double r) { return std::exp(-a * r * r) * r * std::tanh(kPi * r); }, 0.0,
            std::numeric_limits<double>::infinity(), 1e-14);
        const double expected = area / (4.0 * kPi) * 2.0 * oracle.value;
        CHECK(std::abs(plancherel_term(p, area) - expected) < 1e-10 * std::abs(expected));
        CHECK(std::abs(plancherel_term_from_g(p, area) - expected) < 1e-10 * std::abs(expected));
        CHECK(plancherel_term(p, 2.0 * area) == doctest::Approx(2.0 * plancherel_term(p, area)).epsilon(1e-14));
    }
    for (double eps : {0.5, 1.0, 3.0}) {
        const auto p = make_bump_pair(eps);
        const double a = plancherel_term(p, 1.0), b = plancherel_term_from_g(p, 1.0);
        CHECK(std::abs(a - b) < 1e-11 * std::abs(a));
    }
}

TEST_CASE("geometric and spectral sides")
{
    const auto p = make_bump_pair(1.0);
    CHECK(geometric_side(p, {}) == 0.0);
    CHECK(geometric_side(p, {{1.5, 1.5, 3}}) == 0.0);  // outside the support

    const auto wide = make_bump_pair(3.0);
    const LengthSpectrumEntry e1{2.0, 1.0, 1}, e2{1.7, 1.7, 2};
    CHECK(geometric_side(wide, {e1}) == doctest::Approx(wide.g(2.0) / (2.0 * std::sinh(1.0))).epsilon(1e-15));
    CHECK(geometric_side(wide, {e1, e2}) ==
          doctest::Approx(geometric_side(wide, {e1}) + geometric_side(wide, {e2})).epsilon(1e-15));

    CHECK_THROWS_AS(geometric_side(wide, {{1.0, 2.0, 1}}), DomainError);
    CHECK_THROWS_AS(geometric_side(wide, {{2.5, 1.0, 1}}), DomainError);
    CHECK_THROWS_AS(geometric_side(wide, {{2.0, 1.0, 0}}), DomainError);
    CHECK_THROWS_AS(geometric_side(wide, {{1.0, 0.0, 1}}), DomainError);

    CHECK(spectral_side(p, {}, false) == 0.0);
    const std::vector<double> rs{0.0, 2.0, 5.5};
    CHECK(spectral_side(p, rs, false) == doctest::Approx(p.h(0.0) + p.h(2.0) + p.h(5.5)));
    CHECK(spectral_side(p, rs, true) == doctest::Approx(2.0 * spectral_side(p, rs, false)));
    CHECK_THROWS_AS(spectral_side(p, {NAN}, false), DomainError);
}

TEST_CASE("torsion-free identity on synthetic data")
{
    const std::vector<double> rs{0.4, 1.3, 4.1, 7.7};
    const std::vector<LengthSpectrumEntry> lengths{{1.2, 1.2, 2}, {2.4, 1.2, 2}, {1.9, 1.9, 1}};
    for (double eps : {1.0, 3.0}) {
        const auto p = make_bump_pair(eps);
        if (eps <= 1.2) CHECK(geometric_side(p, lengths) == 0.0);
        const double area = synthetic_area(p, rs, lengths);
        CHECK(area > 0.0);
        const double scale = std::abs(spectral_side(p, rs, false)) + std::abs(geometric_side(p, lengths));
        CHECK(std::abs(trace_residual(p, rs, lengths, area)) < 1e-10 * scale);
        // a wrong area is detected
        CHECK(std::abs(trace_residual(p, rs, lengths, 1.01 * area)) > 1e-4 * scale);
    }
}

TEST_CASE("cusp terms")
{
    const double phi_half = scattering::phi_at_half();
    CHECK_THROWS_AS(cusp_term_parts(make_bump_pair(1.0), 0, phi_half), DomainError);

    const auto p = make_bump_pair(4.0);
    const auto one = cusp_term_parts(p, 1, phi_half), two = cusp_term_parts(p, 2, phi_half);
    CHECK(two.scattering == one.scattering);
    CHECK(two.phi_half == one.phi_half);
    CHECK(two.digamma == doctest::Approx(2.0 * one.digamma));
    CHECK(two.constant == doctest::Approx(2.0 * one.constant));
    CHECK(one.phi_half == doctest::Approx(0.25 * p.h(0.0)));

    // the scattering integral tracks phi'/phi near t for a narrow h
    const double t = 30.0;
    CHECK(std::abs(shifted_scattering_integral(p, t) * 2.0 * kPi / p.h_mass() -
                   scattering::phi_log_derivative_line(t)) < 1.0);

    std::vector<double> ratios;
    for (double tt : {20.0, 50.0, 100.0}) {
        const double c = cusp_terms(p, tt, 1, phi_half);
        CHECK(std::isfinite(c));
        ratios.push_back(std::abs(c) / std::log(tt));
    }
    for (double q : ratios) CHECK(q < 10.0);
    CHECK(ratios[2] / ratios[0] <= 2.0);
    CHECK(ratios[0] / ratios[2] <= 2.0);
}

TEST_CASE("large-shift Plancherel asymptotics")
{
    const double area = kPi / 3.0;
    const auto p = make_bump_pair(100.0);
    CHECK_THROWS_AS(shifted_identity_asymptotics(p, 0.0, area), DomainError);

    std::vector<double> scaled;
    for (double t : {1.5, 2.0, 2.5}) {
        const auto a = shifted_identity_asymptotics(p, t, area);
        CHECK(std::abs((a.lhs - a.rhs) - a.residual) < 1e-11);
        const auto b = shifted_identity_asymptotics(p, -t, area);
        CHECK(b.residual == doctest::Approx(a.residual).epsilon(1e-9));
        CHECK(b.lhs == doctest::Approx(a.lhs).epsilon(1e-9));
        scaled.push_back(std::abs(a.residual) * std::exp(2.0 * kPi * t));
    }
    CHECK(scaled.back() / scaled.front() <= 3.0);
}

TEST_CASE("integrated Plancherel growth")
{
    CHECK_THROWS_AS(integrated_identity_growth(make_bump_pair(1.0), 0.0), DomainError);
    // value - lambda^2 tends to -g''(0)/g(0) - int |r| (1 - tanh pi|r|) dr = 2/eps^2 - 1/12
    for (double eps : {2.0, 4.0}) {
        const auto p = make_bump_pair(eps);
        const double limit = 2.0 / (eps * eps) - 1.0 / 12.0;
        const auto v = integrated_identity_growth(p, 200.0);
        CHECK(std::abs(v.value - 200.0 * 200.0 - limit) < 1e-6);
        CHECK(v.deviation <= 200.0);
    }
    const auto p = make_bump_pair(1.0);
    for (double lambda : {50.0, 100.0}) CHECK(integrated_identity_growth(p, lambda).deviation <= lambda);
}

TEST_CASE("local eigenvalue count")
{
    CHECK_THROWS_AS(eigenvalue_local_count(kSpectrum, 10.0, 0.0), DomainError);
    CHECK(eigenvalue_local_count({}, 3.0, 1.0) == 0);
    CHECK(eigenvalue_local_count({2.0}, 2.0, 0.5) == 1);
    CHECK(eigenvalue_local_count({0.3}, 0.0, 0.5) == 2);
    for (double mu : {5.0, 12.0, 19.0}) {
        CHECK(eigenvalue_local_count(kSpectrum, mu, 1.0) == eigenvalue_local_count(kSpectrum, -mu, 1.0));
        CHECK(eigenvalue_local_count(kSpectrum, mu, 1.0) <= eigenvalue_local_count(kSpectrum, mu, 2.0));
    }
    for (double mu = 0.0; mu <= 24.0; mu += 0.5)
        CHECK(eigenvalue_local_count(kSpectrum, mu, 1.0) / (1.0 + mu) <= 1.0);
}

TEST_CASE("heat trace")
{
    CHECK_THROWS_AS(heat_trace_expansion(0.0, kSpectrum, kPi / 3.0), DomainError);

    const auto far = heat_trace_expansion(50.0, kSpectrum, kPi / 3.0);
    CHECK(std::abs(far.lhs - 1.0) < 1e-5);
    CHECK(far.leading == doctest::Approx(kPi / 3.0 / (4.0 * kPi * 50.0)));

    {
        CaptureWarnings w;
        heat_trace_expansion(0.01, kSpectrum, kPi / 3.0);
        CHECK(w.seen.size() == 1);
        w.seen.clear();
        heat_trace_expansion(0.2, kSpectrum, kPi / 3.0);
        CHECK(w.seen.empty());
    }

    // continuous part against an independent adaptive integration
    const double t = 0.1;
    const auto ht = heat_trace_expansion(t, kSpectrum, kPi / 3.0);
    const auto oracle = quad::adaptive(
        [t](double r) { return std::exp(-t * (0.25 + r * r)) * scattering::phi_log_derivative_line(r); }, 0.0, 25.0,
        1e-10);
    CHECK(std::abs(ht.continuous - 2.0 * oracle.value / (4.0 * kPi)) < 1e-9);
    CHECK(std::abs(ht.continuous - 0.358575271) < 1e-8);

    // beyond the minimum the trace climbs back to the constant eigenfunction
    double previous = 0.0;
    for (double s : {0.2, 0.5, 1.0, 2.0, 5.0}) {
        const double v = heat_trace_expansion(s, kSpectrum, kPi / 3.0).lhs;
        CHECK(v > previous);
        CHECK(v < 1.0);
        previous = v;
    }

    // a fit to exact data of the assumed form recovers c0
    std::vector<HeatTrace> synthetic;
    for (double s : {0.2, 0.1, 0.05, 0.025}) {
        HeatTrace h;
        h.t = s;
        h.lhs = (0.3 + 0.7 * std::sqrt(s) * std::log(s) - 0.2 * std::sqrt(s)) / s;
        synthetic.push_back(h);
    }
    CHECK(heat_trace_leading_coefficient(synthetic) == doctest::Approx(0.3).epsilon(1e-10));
    synthetic.resize(2);
    CHECK_THROWS_AS(heat_trace_leading_coefficient(synthetic), DomainError);
}

TEST_CASE("Weyl counting curve")
{
    const double area = kPi / 3.0;
    std::vector<double> grid;
    for (int i = 0; i <= 150; ++i) grid.push_back(10.0 + 0.1 * i);
    const auto winding = scattering::winding_curve(grid);

    const auto empty = weyl_counting_curve({}, winding, area, 1);
    for (int n : empty.N) CHECK(n == 0);
    const auto with_constant = weyl_counting_curve({}, winding, area, 1, true);
    for (int n : with_constant.N) CHECK(n == 1);

    const auto curve = weyl_counting_curve(kSpectrum, winding, area, 1, true);
    CHECK(curve.main.front() == doctest::Approx(100.0 / 12.0).epsilon(1e-14));
    CHECK(curve.N.back() == 1 + int(kSpectrum.size()));
    CHECK(curve.fit_residual <= 2.5);
    CHECK(weyl_counting_curve(kSpectrum, winding, area, 1).fit_residual <= 2.5);

    CHECK_THROWS_AS(weyl_counting_curve({3.0, 2.0}, winding, area, 1), DomainError);
    auto bad = winding;
    std::swap(bad[3], bad[4]);
    CHECK_THROWS_AS(weyl_counting_curve(kSpectrum, bad, area, 1), DomainError);
}
