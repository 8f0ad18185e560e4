#pragma once

// Continuous spectrum of SL(2,Z): Eisenstein series, the scattering
// determinant phi(s), its logarithmic derivative on the critical line and the
// winding number M(lambda).

#include "hs/hypgeom.hpp"
#include "hs/specfun.hpp"

#include <vector>

namespace hs::scattering {

struct ScatteringValue {
    Complex s;
    Complex phi;
    Complex log_deriv;
};

struct WindingRecord {
    double lambda = 0.0;
    double M = 0.0;
    double quadrature_error = 0.0;
};

struct EisensteinValue {
    Complex value;
    double tail_estimate = 0.0;
};

/// sum over coprime (m, n) modulo +-1 with max(|m|, |n|) <= cutoff of
/// y^s / |mz + n|^{2s}, so that the constant term is y^s + phi(s) y^{1-s}.
/// The tail estimate compares the omitted terms with an area integral.
/// Throws ConvergenceError for Re s <= 1.
EisensteinValue eisenstein_eval(const hypgeom::HPoint& z, Complex s, int cutoff);

struct ConstantTerm {
    Complex value;
    double tail_estimate = 0.0;
    double quadrature_error = 0.0;
};

/// int_0^1 E(x + iy, s) dx by the periodic trapezoid rule on `points` nodes;
/// the quadrature error is the change against half as many nodes.
ConstantTerm eisenstein_constant_term(double y, Complex s, int cutoff, int points = 32);

/// phi(s) = sqrt(pi) Gamma(s - 1/2) zeta(2s - 1) / (Gamma(s) zeta(2s)), evaluated
/// in the form 2 sqrt(pi) Gamma(s + 1/2) zeta(2s - 1) / (Gamma(s) (2s - 1) zeta(2s))
/// where the poles at s = 1/2 cancel. Throws PoleError at s = 1, at the poles
/// of Gamma(s - 1/2) other than 1/2, at non-positive integers and at zeros of zeta(2s).
Complex phi_gamma1(Complex s);

/// lim_{s -> 1/2} phi(s) = -1.
double phi_at_half();

/// phi(s) together with phi'/phi(s) = psi(s + 1/2) - psi(s) + 2 zeta'/zeta(2s - 1)
/// - 2 ((2s - 1) zeta(2s))'/((2s - 1) zeta(2s)).
ScatteringValue scattering_value(Complex s);

/// (F'/F)(w) for F(w) = (w - 1) zeta(w), by centered differences with one
/// Richardson step.
Complex zeta_pole_removed_log_derivative(Complex w, double h = 1e-5);

/// phi'/phi(1/2 + ir) = 2 log pi - 2 Re psi(1/2 + ir) - 4 Re (F'/F)(1 + 2ir),
/// real and even in r. Warns when |F(1 + 2ir)| is small.
double phi_log_derivative_line(double r);

struct WindingOptions {
    double panel_width = 0.5;
};

/// M(lambda) = -(1/2 pi) int_0^lambda phi'/phi(1/2 + ir) dr. Each panel of
/// the given width is split in two while the halves disagree with the whole
/// 20-point Gauss value (width floor 1e-4); the error is the sum of those
/// disagreements plus a rounding allowance.
WindingRecord winding_number(double lambda, const WindingOptions& opts = {});

/// M on an increasing grid of lambda >= 0, integrating panel by panel.
std::vector<WindingRecord> winding_curve(const std::vector<double>& lambdas, const WindingOptions& opts = {});

}  // namespace hs::scattering
