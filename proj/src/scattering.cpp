#include "hs/scattering.hpp"

#include "hs/diagnostics.hpp"
#include "hs/errors.hpp"
#include "hs/quadrature.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace hs::scattering {

namespace {

using specfun::kPi;

bool is_integer(double v) { return std::abs(v - std::round(v)) == 0.0; }

// min of ((mx + n)^2 + m^2 y^2) / max(|m|, |n|)^2 over real (m, n) != 0
double boundary_constant(double x, double y)
{
    x = std::abs(x);
    // edges |m| = 1: (x + n)^2 + y^2 over |n| <= 1
    const double edge_m = (x <= 1.0) ? y * y : (x - 1.0) * (x - 1.0) + y * y;
    // edges |n| = 1: (mx + 1)^2 + m^2 y^2 over |m| <= 1
    const double m_opt = -x / (x * x + y * y);
    double edge_n;
    if (std::abs(m_opt) <= 1.0) {
        edge_n = y * y / (x * x + y * y);
    } else {
        const double m = (m_opt > 0) ? 1.0 : -1.0;
        edge_n = (m * x + 1.0) * (m * x + 1.0) + y * y;
    }
    return std::min(edge_m, edge_n);
}

struct Panelled {
    double value = 0.0;
    double error = 0.0;
    double abs_sum = 0.0;
};

double gauss20(double a, double b, double* abs_sum)
{
    double total = 0.0;
    for (const auto& node : quad::gauss_panel_nodes(a, b, 1)) {
        const double term = node.w * phi_log_derivative_line(node.x);
        total += term;
        *abs_sum += std::abs(term);
    }
    return total;
}

constexpr double kMinPanel = 1e-4;

// int_a^b phi'/phi, splitting a panel while its halves disagree with it
void adaptive_panel(double a, double b, double whole, double tol, Panelled& acc)
{
    const double mid = 0.5 * (a + b);
    double abs_sum = 0.0;
    const double left = gauss20(a, mid, &abs_sum), right = gauss20(mid, b, &abs_sum);
    const double diff = std::abs(left + right - whole);
    if (diff <= tol || b - a <= 2.0 * kMinPanel) {
        acc.value += left + right;
        acc.error += diff;
        acc.abs_sum += abs_sum;
        return;
    }
    adaptive_panel(a, mid, left, 0.5 * tol, acc);
    adaptive_panel(mid, b, right, 0.5 * tol, acc);
}

// -(1/2 pi) int_a^b phi'/phi
Panelled winding_piece(double a, double b, double panel_width)
{
    const int P = std::max(1, int(std::ceil((b - a) / panel_width)));
    const double width = (b - a) / P;
    Panelled acc;
    for (int i = 0; i < P; ++i) {
        const double lo = a + i * width, hi = (i + 1 == P) ? b : lo + width;
        double scratch = 0.0;
        adaptive_panel(lo, hi, gauss20(lo, hi, &scratch), 1e-10 * width, acc);
    }
    const double scale = 1.0 / (2.0 * kPi);
    const double rounding = 64.0 * std::numeric_limits<double>::epsilon() * acc.abs_sum;
    return {-scale * acc.value, scale * (acc.error + rounding), 0.0};
}

}  // namespace

EisensteinValue eisenstein_eval(const hypgeom::HPoint& z, Complex s, int cutoff)
{
    const double sigma = s.real();
    if (!(sigma > 1.0)) throw ConvergenceError("eisenstein_eval: lattice sum needs Re s > 1");
    if (!(z.y > 0.0)) throw DomainError("eisenstein_eval: y must be positive");
    if (cutoff < 1) throw DomainError("eisenstein_eval: cutoff must be positive");

    const double log_y = std::log(z.y);
    Complex sum = std::exp(s * log_y);  // (m, n) = (0, 1)
    for (long m = 1; m <= cutoff; ++m) {
        const double my = m * z.y;
        for (long n = -cutoff; n <= cutoff; ++n) {
            if (std::gcd(m, n) != 1) continue;
            const double re = m * z.x + n;
            const double q = re * re + my * my;
            sum += std::exp(s * (log_y - std::log(q)));
        }
    }
    const double c = boundary_constant(z.x, z.y);
    const double T = c * double(cutoff) * cutoff;
    const double tail = (6.0 / (kPi * kPi)) * 0.5 * std::pow(z.y, sigma) * (kPi / z.y) * std::pow(T, 1.0 - sigma) /
                        (sigma - 1.0);
    return {sum, tail};
}

ConstantTerm eisenstein_constant_term(double y, Complex s, int cutoff, int points)
{
    if (points < 2 || points % 2) throw DomainError("eisenstein_constant_term: points must be even and >= 2");
    Complex fine = 0.0, coarse = 0.0;
    double tail = 0.0;
    for (int j = 0; j < points; ++j) {
        const auto e = eisenstein_eval({double(j) / points, y}, s, cutoff);
        fine += e.value;
        if (j % 2 == 0) coarse += e.value;
        tail = std::max(tail, e.tail_estimate);
    }
    fine /= double(points);
    coarse /= double(points / 2);
    return {fine, tail, std::abs(fine - coarse)};
}

Complex phi_gamma1(Complex s)
{
    const double re = s.real(), im = s.imag();
    if (s == Complex(1.0, 0.0)) throw PoleError("phi_gamma1: pole at s = 1");
    if (im == 0.0 && re <= 0.0 && is_integer(re)) throw PoleError("phi_gamma1: s at a non-positive integer");
    if (im == 0.0 && re <= -0.5 && is_integer(re + 0.5)) throw PoleError("phi_gamma1: pole of Gamma(s - 1/2)");
    const Complex F2s = specfun::zeta_pole_removed(2.0 * s);
    if (F2s == 0.0) throw PoleError("phi_gamma1: zero of zeta(2s)");
    const Complex ratio = std::exp(specfun::log_gamma(s + 0.5) - specfun::log_gamma(s));
    return 2.0 * std::sqrt(kPi) * ratio * specfun::zeta_pole_removed(2.0 * s - 1.0) / ((2.0 * s - 2.0) * F2s);
}

double phi_at_half() { return phi_gamma1(0.5).real(); }

Complex zeta_pole_removed_log_derivative(Complex w, double h)
{
    auto central = [&](double step) {
        return (specfun::zeta_pole_removed(w + step) - specfun::zeta_pole_removed(w - step)) / (2.0 * step);
    };
    const Complex d1 = central(h), d2 = central(0.5 * h);
    return ((4.0 * d2 - d1) / 3.0) / specfun::zeta_pole_removed(w);
}

ScatteringValue scattering_value(Complex s)
{
    ScatteringValue v;
    v.s = s;
    v.phi = phi_gamma1(s);
    const Complex w = 2.0 * s - 1.0;
    // zeta'/zeta(w) = F'/F(w) - 1/(w - 1)
    const Complex zeta_ld = zeta_pole_removed_log_derivative(w) - 1.0 / (w - 1.0);
    v.log_deriv = specfun::digamma(s + 0.5) - specfun::digamma(s) + 2.0 * zeta_ld -
                  2.0 * zeta_pole_removed_log_derivative(2.0 * s);
    return v;
}

double phi_log_derivative_line(double r)
{
    r = std::abs(r);
    const Complex w(1.0, 2.0 * r);
    const Complex F = specfun::zeta_pole_removed(w);
    if (std::abs(F) < 1e-3 * std::max(1.0, 2.0 * r)) {
        std::ostringstream msg;
        msg << "phi'/phi near a small value of zeta on Re s = 1 at r = " << r;
        warn(msg.str());
    }
    return 2.0 * std::log(kPi) - 2.0 * specfun::digamma(Complex(0.5, r)).real() -
           4.0 * zeta_pole_removed_log_derivative(w).real();
}

WindingRecord winding_number(double lambda, const WindingOptions& opts)
{
    if (!(lambda >= 0.0)) throw DomainError("winding_number: lambda must be non-negative");
    return winding_curve({lambda}, opts).front();
}

std::vector<WindingRecord> winding_curve(const std::vector<double>& lambdas, const WindingOptions& opts)
{
    if (!(opts.panel_width > 0.0)) throw DomainError("winding_curve: panel width must be positive");
    std::vector<WindingRecord> out;
    double previous = 0.0, M = 0.0, err = 0.0;
    for (double lambda : lambdas) {
        if (!(lambda >= previous)) throw DomainError("winding_curve: grid must be non-negative and increasing");
        if (lambda > previous) {
            const auto piece = winding_piece(previous, lambda, opts.panel_width);
            M += piece.value;
            err += piece.error;
        }
        out.push_back({lambda, M, err});
        previous = lambda;
    }
    return out;
}

}  // namespace hs::scattering
