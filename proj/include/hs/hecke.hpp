#pragma once

// Hecke operators, L-series, Euler products and the completed L-function of
// a Maass eigenform for SL(2,Z).

#include "hs/maass.hpp"
#include "hs/specfun.hpp"

#include <vector>

namespace hs::hecke {

using maass::FourierCoefficients;
using maass::SpectralPoint;

/// Roots of X^2 - a(p) X + 1.
struct SatakePair {
    Complex alpha;
    Complex beta;

    static SatakePair from_coefficient(double a_p);
};

/// Identity representation of GL(2) or its k-th symmetric power (k <= 4).
struct RepresentationSpec {
    int k = 1;

    static RepresentationSpec standard() { return {1}; }
    /// Throws DomainError unless 1 <= k <= 4.
    static RepresentationSpec symmetric_power(int k);
    int dimension() const { return k + 1; }
    /// Eigenvalues alpha^k, alpha^{k-2} beta, ..., beta^k of rho(A_p).
    std::vector<Complex> local_roots(const SatakePair& sp) const;
};

/// n^{-1/2} sum_{ad = n, b mod d} f((az + b)/d), each point pulled back into
/// the fundamental domain before the expansion is evaluated.
double hecke_operator_eval(int n, const FourierCoefficients& f, const hypgeom::HPoint& z);

/// |a(m)a(n) - sum_{d | (m,n)} a(mn/d^2)|. Throws IndexRangeError past the
/// available coefficients.
double hecke_relation_residual(const FourierCoefficients& c, int m, int n);

struct SeriesValue {
    Complex value;
    double tail_bound = 0.0;
};

/// max_n |a(n)| / sqrt(n), the constant of the assumed growth bound.
double coefficient_growth_constant(const FourierCoefficients& c);

/// sum_{n <= N} a(n) n^{-s} with the bound C N^{3/2 - sigma} / (sigma - 3/2)
/// on the tail. Throws ConvergenceError for Re s < 1.6.
SeriesValue l_series(Complex s, const FourierCoefficients& c);

/// prod_{p <= p_max} prod_j (1 - root_j p^{-s})^{-1}. Throws ConvergenceError
/// when Re s is too small for the representation (standard: 1.6, sym^k:
/// 1.1 + k/2), and IndexRangeError when a(p) is missing.
Complex euler_product(Complex s, const FourierCoefficients& c, const RepresentationSpec& rho, int p_max);

/// pi^{-s} Gamma((s + ir)/2) Gamma((s - ir)/2), the archimedean factor.
Complex gamma_factor(Complex s, double r);

/// Lambda(s) = gamma_factor(s) L(s, f) from the Dirichlet series; same
/// region as l_series. Even forms only.
SeriesValue lambda_direct(Complex s, const SpectralPoint& point);

struct MellinOptions {
    double kappa = 4.0;
    /// The integral over (0, A) is folded onto (1/A, inf) with the modular
    /// symmetry f(i/y) = f(iy). A = 1 makes Lambda(s) = Lambda(1 - s) hold
    /// identically; A != 1 turns that symmetry into a check of modularity.
    double split = 1.0;
    int panels_per_unit = 12;  // 20-point Gauss panels per unit of y
};

/// kappa * [ int_A^inf f(iy) y^{s-1/2} dy/y + int_{1/A}^inf f(iy) y^{1/2-s} dy/y ]
/// with f(iy) summed directly from the Fourier expansion (no pullback).
/// Even forms only (DomainError otherwise).
Complex lambda_mellin(Complex s, const SpectralPoint& point, const MellinOptions& opts = {});

/// Mellin value with kappa = 1 divided into the direct value at s_anchor:
/// the normalization constant measured rather than assumed.
double measure_kappa(const SpectralPoint& point, double s_anchor = 3.0);

/// Completed L-function via the Mellin integral (valid for all s).
Complex lambda_completed(Complex s, const SpectralPoint& point);

/// primes up to n (inclusive).
std::vector<int> primes_upto(int n);

}  // namespace hs::hecke
