#pragma once

// Special functions of complex argument used throughout the toolkit.
//
// All functions are pure; the Bernoulli and Lanczos tables are built once on
// first use and are read-only afterwards.

#include <complex>
#include <cstdint>
#include <vector>

namespace hs {

using Complex = std::complex<double>;

namespace specfun {

inline constexpr double kPi = 3.141592653589793238462643383279502884;
inline constexpr double kEulerGamma = 0.577215664901532860606512090082402431;

/// B_{2k} for k = 0..15 (B_0 = 1, B_2 = 1/6, ..., B_30).
double bernoulli_even(int k);

/// Gamma function via Lanczos (g = 7) with reflection for Re z < 1/2.
/// Throws PoleError at non-positive integers.
Complex gamma(Complex z);

/// A logarithm of Gamma(z): the real part is log|Gamma(z)| and
/// exp(log_gamma(z)) == gamma(z). Usable where gamma() would overflow or
/// underflow (large |Im z|).
Complex log_gamma(Complex z);

/// Digamma psi(z) = Gamma'(z)/Gamma(z). Throws PoleError at non-positive integers.
Complex digamma(Complex z);

/// Riemann zeta by Euler-Maclaurin summation with Bernoulli corrections
/// through B_30. Throws PoleError at s = 1.
Complex zeta(Complex s);

/// (s - 1) zeta(s), the entire function obtained by removing the pole.
/// Finite at s = 1 (value 1).
Complex zeta_pole_removed(Complex s);

/// Hurwitz zeta sum_{n>=0} (n + a)^{-s}, a in (0, 1].
Complex hurwitz_zeta(Complex s, double a);

/// A Dirichlet character modulo q, stored as its table of values on 0..q-1.
class DirichletCharacter {
public:
    /// Validates the table: chi(1) = 1, zero exactly off the units,
    /// |chi(a)| = 1 on units, completely multiplicative mod q.
    DirichletCharacter(std::int64_t modulus, std::vector<Complex> values);

    static DirichletCharacter principal(std::int64_t modulus);
    /// The real character n -> (d/n) (Kronecker symbol) for a fundamental
    /// discriminant d, of modulus |d|. E.g. d = -4 gives chi_{-4}.
    static DirichletCharacter kronecker(std::int64_t discriminant);

    std::int64_t modulus() const { return modulus_; }
    Complex operator()(std::int64_t n) const;
    bool is_principal() const { return principal_; }

private:
    std::int64_t modulus_;
    std::vector<Complex> values_;
    bool principal_;
};

/// L(s, chi) = q^{-s} sum_{a=1..q} chi(a) zeta(s, a/q).
/// Throws PoleError at s = 1 for a principal character.
Complex dirichlet_l(Complex s, const DirichletCharacter& chi);

struct BesselKOptions {
    /// Additional step halvings past the convergence point of the
    /// double-exponential rule (used for self-convergence checks).
    int extra_halvings = 0;
};

/// e^{pi r / 2} K_{ir}(y): O(1) in the oscillatory region y < r, so it does
/// not underflow for large r. Computed on the steepest-descent contour of
/// K_{ir}(y) = (1/2) int exp(-y cosh t - i r t) dt. Throws DomainError for y <= 0.
double bessel_k_imag_scaled(double r, double y, const BesselKOptions& opts = {});

/// K_{ir}(y) for real r and y > 0.
double bessel_k_imag(double r, double y, const BesselKOptions& opts = {});

}  // namespace specfun
}  // namespace hs
