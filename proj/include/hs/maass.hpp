#pragma once

// Maass cusp forms for SL(2,Z): Fourier expansions, Hejhal-style collocation
// for the coefficients, and the eigenvalue search built on it.

#include "hs/hypgeom.hpp"

#include <Eigen/Dense>

#include <string>
#include <vector>

namespace hs::maass {

enum class Symmetry { even, odd };

std::string to_string(Symmetry s);
/// Parses "even" / "odd"; throws DomainError otherwise.
Symmetry parse_symmetry(const std::string& text);

struct FourierCoefficients {
    Symmetry symmetry = Symmetry::even;
    double r = 0.0;
    std::vector<double> a;  // a[n - 1] = a(n), a(1) = 1

    int truncation() const { return int(a.size()); }
    /// a(n) for 1 <= n <= truncation(); throws IndexRangeError otherwise.
    double at(int n) const;
};

struct SpectralPoint {
    double r = 0.0;
    double lambda = 0.25;
    Symmetry symmetry = Symmetry::even;
    int M = 0;  // truncation of the collocation solve
    FourierCoefficients coefficients;
    double residual_two_height = 0.0;
    double residual_hecke = 0.0;
};

/// Sum_{n} a(n) sqrt(y) K_{ir}(2 pi n y) cs(2 pi n x) with cs = cos for even
/// and sin for odd forms. Terms past the K-Bessel turning region are skipped
/// once they fall below double precision.
double expansion_eval(const FourierCoefficients& c, const hypgeom::HPoint& z);

/// Same sum with e^{pi r/2} K_{ir} in place of K_{ir}, i.e. O(1) for large r.
double expansion_eval_scaled(const FourierCoefficients& c, const hypgeom::HPoint& z);

/// Terms needed at height y: ceil((r + 12 sqrt(r + 4)) / (2 pi y)).
int truncation_for(double r, double y);

/// Linear system for a(2..M) after fixing a(1) = 1: matrix * a = rhs.
struct CollocationSystem {
    double r = 0.0;
    Symmetry symmetry = Symmetry::even;
    double y0 = 0.0;
    int M = 0;
    int points = 0;  // 2Q
    Eigen::MatrixXd matrix;  // (M - 1) x (M - 1)
    Eigen::VectorXd rhs;
    /// Full M x M homogeneous matrix V with V * (a(1..M)) = 0 at an eigenvalue.
    Eigen::MatrixXd full;
};

struct CollocationOptions {
    int extra_points = 4;     // Q = M + extra_points
    double phase = 0.5;       // x_m = (m - Q + phase) / (2 Q), m = 0..2Q-1
};

/// 2Q points x_m + i y0 spread uniformly over one period, pulled back into
/// the fundamental domain;
/// imposes f(z_m) = f(pullback z_m) through the discrete Fourier inversion.
/// Requires 0 < y0 < sqrt(3)/2 and M >= 1.
CollocationSystem build_collocation_system(double r, Symmetry sym, double y0, int M,
                                           const CollocationOptions& opts = {});

struct Solution {
    FourierCoefficients coefficients;
    double condition_estimate = 1.0;
};

/// Least-squares solve (SVD, rows and columns equilibrated) of all M
/// collocation equations. Throws SingularSystemError; warns when the
/// condition estimate exceeds 1e12.
Solution solve_coefficients(double r, Symmetry sym, double y0, int M,
                            const CollocationOptions& opts = {});

struct ResidualOptions {
    double y1 = 0.55;
    double y2 = 0.50;
    int M = 0;               // 0: truncation_for(r, min(y1, y2))
    int compare_terms = 4;   // compares a(2..compare_terms + 1)
    CollocationOptions collocation;
};

/// a_{y1}(n) - a_{y2}(n) for n = 2..compare_terms + 1 (signed).
std::vector<double> two_height_difference(double r, Symmetry sym, const ResidualOptions& opts = {});

/// max |a_{y1}(n) - a_{y2}(n)|; small exactly near cusp-form eigenvalues.
double consistency_residual(double r, Symmetry sym, const ResidualOptions& opts = {});

/// Recomputes a(2..n_max) by Fourier inversion of f at small heights, where f
/// is evaluated at pulled-back points from the given coefficients.
FourierCoefficients extend_coefficients(const FourierCoefficients& c, int n_max);

/// max over m, n >= 1 with m n <= limit of |a(m)a(n) - sum_{d|(m,n)} a(mn/d^2)|.
double hecke_residual_upto(const FourierCoefficients& c, int limit);

struct SearchOptions {
    ResidualOptions residual;  // the reported two-height residual
    /// Heights used while scanning. A single height can resonate with the
    /// K-Bessel zeros close to an eigenvalue, so the scan indicator is the
    /// smallest residual over all pairs drawn from these.
    std::vector<double> scan_heights{0.55, 0.50, 0.45};
    double accept_residual = 1e-6;
    double accept_hecke = 1e-5;
    double r_tol = 1e-8;
    int hecke_limit = 30;
    int extended_terms = 30;
};

/// Scans [r_lo, r_hi] with the given step (<= 0.05), refines each dip of the
/// scan indicator by bracketed root finding on a signed coefficient difference
/// and keeps the candidates that pass both residual thresholds.
std::vector<SpectralPoint> eigenvalue_search(double r_lo, double r_hi, Symmetry sym,
                                             double grid_step, const SearchOptions& opts = {});

/// Refines a single eigenvalue from a bracket [lo, hi] using the heights of
/// opts.residual; returns the root of the first signed coefficient difference
/// that changes sign. Throws ConvergenceError when none does.
double refine_eigenvalue(double lo, double hi, Symmetry sym, const SearchOptions& opts = {});

/// Builds the full record (extended coefficients, residuals) at r.
SpectralPoint make_spectral_point(double r, Symmetry sym, const SearchOptions& opts = {});

}  // namespace hs::maass
