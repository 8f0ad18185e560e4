#pragma once

// Test-function pairs and the terms of the trace formula for a cofinite
// Fuchsian group: identity (Plancherel) term, hyperbolic sum, cusp
// contributions, heat trace and the eigenvalue counting curve.

#include "hs/scattering.hpp"

#include <functional>
#include <limits>
#include <vector>

namespace hs::traceform {

using RealFn = std::function<double(double)>;

/// An even g and h(z) = int g(u) e^{-iuz} du on the real line, so that
/// g(u) = (1/2 pi) int h(r) e^{iru} dr.
struct TestFunctionPair {
    RealFn g;
    RealFn g_prime;
    RealFn h;
    /// G(x) = int_{-inf}^x h(r) dr
    RealFn h_cumulative;
    double ghat0 = 0.0;  // int g = h(0)
    double epsilon = std::numeric_limits<double>::infinity();  // g = 0 for |u| >= epsilon
    double g_extent = 0.0;  // g negligible beyond this; epsilon when finite
    /// |h(r)| < tol * h(0) for |r| beyond this.
    std::function<double(double)> h_radius;
    /// length scale on which h varies near its peak
    double h_scale = 1.0;

    /// int h(r) dr = 2 pi g(0)
    double h_mass() const;
};

/// g(u) = c exp(-1/(1 - (u/eps)^2)) on (-eps, eps) with int g = 1; h by
/// fixed Gauss panels sized to the oscillation of cos(ru).
TestFunctionPair make_bump_pair(double epsilon);

/// h(r) = exp(-a r^2), g(u) = exp(-u^2/(4a)) / (2 sqrt(pi a)). Not compactly
/// supported; useful where only the decay of h matters.
TestFunctionPair make_gaussian_pair(double a);

/// h_t(r) = h(t - r) + h(t + r), g_t(u) = 2 cos(tu) g(u).
TestFunctionPair shifted_pair(const TestFunctionPair& pair, double t);

struct LengthSpectrumEntry {
    double ell = 0.0;
    double ell0 = 0.0;
    int mult = 1;

    /// Throws DomainError unless 0 < ell0 <= ell, ell/ell0 integral, mult >= 1.
    void validate() const;
};

/// (area / 4 pi) int h(r) r tanh(pi r) dr.
double plancherel_term(const TestFunctionPair& pair, double area);

/// Same term from g: int h(r) r tanh(pi r) dr = -2 int_0^inf g'(u) / sinh(u/2) du.
double plancherel_term_from_g(const TestFunctionPair& pair, double area);

/// sum mult * ell0 * g(ell) / (2 sinh(ell / 2)).
double geometric_side(const TestFunctionPair& pair, const std::vector<LengthSpectrumEntry>& lengths);

/// sum h(r_j), over r_j and -r_j when symmetrized.
double spectral_side(const TestFunctionPair& pair, const std::vector<double>& rs, bool symmetrized);

struct CuspTermParts {
    double scattering = 0.0;  // (1/4 pi) int h phi'/phi(1/2 + ir) dr
    double phi_half = 0.0;    // -(1/4) phi(1/2) h(0)
    double digamma = 0.0;     // -(m / 2 pi) int h(r) psi(1 + ir) dr
    double constant = 0.0;    // (m/4) h(0) - m log 2 g(0)

    double total() const { return scattering + phi_half + digamma + constant; }
};

/// The contributions of m cusps for the pair as given.
CuspTermParts cusp_term_parts(const TestFunctionPair& pair, int m, double phi_half);

/// cusp_term_parts(shifted_pair(pair, t), m, phi_half).total().
double cusp_terms(const TestFunctionPair& pair, double t, int m, double phi_half);

/// (1/2 pi) int h(t - r) phi'/phi(1/2 + ir) dr.
double shifted_scattering_integral(const TestFunctionPair& pair, double t);

struct ShiftedIdentity {
    double lhs = 0.0;       // (area / 2 pi) int h(t - r) r tanh(pi r) dr
    double rhs = 0.0;       // (area / 2 pi) (|t| int h - sign(t) int h(r) r dr)
    double residual = 0.0;  // lhs - rhs, evaluated without cancellation
};

/// Large-shift behaviour of the Plancherel integral. Throws DomainError at t = 0.
ShiftedIdentity shifted_identity_asymptotics(const TestFunctionPair& pair, double t, double area);

struct IntegratedIdentity {
    double value = 0.0;
    double deviation = 0.0;  // |value - lambda^2|
};

/// int_{-lambda}^{lambda} int h(t - r) r tanh(pi r) dr dt for h rescaled to
/// unit mass, computed as int r tanh(pi r) (G(lambda - r) - G(-lambda - r)) dr.
IntegratedIdentity integrated_identity_growth(const TestFunctionPair& pair, double lambda);

/// #{j : |r_j - mu| <= a} over the symmetrized list. Throws DomainError for a <= 0.
int eigenvalue_local_count(const std::vector<double>& rs, double mu, double a);

struct HeatTrace {
    double t = 0.0;
    double discrete = 0.0;    // 1 + sum_j exp(-t lambda_j), the 1 from lambda_0 = 0
    double continuous = 0.0;  // (1/4 pi) int exp(-t(1/4 + r^2)) phi'/phi dr
    double lhs = 0.0;         // discrete - continuous
    double leading = 0.0;     // area / (4 pi t)
};

/// Warns when exp(-t lambda_max) > 1e-8. Throws DomainError for t <= 0.
HeatTrace heat_trace_expansion(double t, const std::vector<double>& rs, double area,
                               const RealFn& log_derivative = scattering::phi_log_derivative_line);

/// Fits t * lhs(t) = c0 + a sqrt(t) log t + b sqrt(t) through the samples and
/// returns c0 (exact interpolation for three samples, least squares beyond).
double heat_trace_leading_coefficient(const std::vector<HeatTrace>& samples);

struct CountingCurve {
    std::vector<double> grid;
    std::vector<int> N;
    std::vector<double> M;
    std::vector<double> main;
    std::vector<double> D;
    double fit_c = 0.0;
    double fit_residual = 0.0;  // max |D - c lambda|
};

/// N(lambda) = #{r_j <= lambda}, plus one for the constant eigenfunction when
/// asked, D = N + M - (area / 4 pi) lambda^2 + (m / pi) lambda log lambda, c by
/// least squares on D ~ c lambda. The grid is taken from the winding records.
CountingCurve weyl_counting_curve(const std::vector<double>& rs, const std::vector<scattering::WindingRecord>& winding,
                                  double area, int m, bool include_constant = false);

/// int int dx dy / y^2 over |x| <= 1/2, x^2 + y^2 >= 1.
double area_fundamental_domain();

/// spectral - plancherel - geometric for a torsion-free, cusp-free group.
double trace_residual(const TestFunctionPair& pair, const std::vector<double>& rs,
                      const std::vector<LengthSpectrumEntry>& lengths, double area);

/// The area that makes the identity hold exactly for the given data, with
/// the Plancherel integral taken from g.
double synthetic_area(const TestFunctionPair& pair, const std::vector<double>& rs,
                      const std::vector<LengthSpectrumEntry>& lengths);

}  // namespace hs::traceform
