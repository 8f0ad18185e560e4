#include "hs/hecke.hpp"

#include "hs/errors.hpp"
#include "hs/quadrature.hpp"

#include <cmath>
#include <initializer_list>
#include <numeric>
#include <sstream>

namespace hs::hecke {

namespace {

using specfun::kPi;

double min_sigma(const RepresentationSpec& rho) { return 1.1 + 0.5 * rho.k; }

}  // namespace

SatakePair SatakePair::from_coefficient(double a_p)
{
    const Complex disc = std::sqrt(Complex(a_p * a_p - 4.0, 0.0));
    const Complex alpha = 0.5 * (a_p + disc);
    // beta = 1/alpha avoids cancellation in (a - disc)/2
    return {alpha, 1.0 / alpha};
}

RepresentationSpec RepresentationSpec::symmetric_power(int k)
{
    if (k < 1 || k > 4) throw DomainError("symmetric power must satisfy 1 <= k <= 4");
    return {k};
}

std::vector<Complex> RepresentationSpec::local_roots(const SatakePair& sp) const
{
    std::vector<Complex> roots;
    for (int j = 0; j <= k; ++j) roots.push_back(std::pow(sp.alpha, k - j) * std::pow(sp.beta, j));
    return roots;
}

double hecke_operator_eval(int n, const FourierCoefficients& f, const hypgeom::HPoint& z)
{
    if (n < 1) throw DomainError("hecke_operator_eval: n must be positive");
    double sum = 0.0;
    for (int a = 1; a <= n; ++a) {
        if (n % a != 0) continue;
        const int d = n / a;
        for (int b = 0; b < d; ++b) {
            const hypgeom::HPoint w{(a * z.x + b) / d, a * z.y / d};
            sum += maass::expansion_eval(f, hypgeom::reduce_to_fundamental_domain(w).point);
        }
    }
    return sum / std::sqrt(double(n));
}

double hecke_relation_residual(const FourierCoefficients& c, int m, int n)
{
    if (m < 1 || n < 1) throw DomainError("hecke_relation_residual: indices must be positive");
    const int g = std::gcd(m, n);
    double rhs = 0.0;
    for (int d = 1; d <= g; ++d)
        if (g % d == 0) rhs += c.at(m / d * (n / d));
    return std::abs(c.at(m) * c.at(n) - rhs);
}

double coefficient_growth_constant(const FourierCoefficients& c)
{
    double C = 0.0;
    for (int n = 1; n <= c.truncation(); ++n) C = std::max(C, std::abs(c.at(n)) / std::sqrt(double(n)));
    return C;
}

SeriesValue l_series(Complex s, const FourierCoefficients& c)
{
    const double sigma = s.real();
    if (sigma < 1.6) throw ConvergenceError("l_series: needs Re s >= 1.6");
    SeriesValue out;
    for (int n = c.truncation(); n >= 1; --n) out.value += c.at(n) * std::exp(-s * std::log(double(n)));
    const double N = c.truncation();
    out.tail_bound = coefficient_growth_constant(c) * std::pow(N, 1.5 - sigma) / (sigma - 1.5);
    return out;
}

std::vector<int> primes_upto(int n)
{
    std::vector<bool> composite(std::max(n + 1, 2), false);
    std::vector<int> primes;
    for (int i = 2; i <= n; ++i) {
        if (composite[i]) continue;
        primes.push_back(i);
        for (long long j = (long long)i * i; j <= n; j += i) composite[j] = true;
    }
    return primes;
}

Complex euler_product(Complex s, const FourierCoefficients& c, const RepresentationSpec& rho, int p_max)
{
    if (!(s.real() > min_sigma(rho))) {
        std::ostringstream msg;
        msg << "euler_product: needs Re s > " << min_sigma(rho) << " for sym^" << rho.k;
        throw ConvergenceError(msg.str());
    }
    Complex product = 1.0;
    for (int p : primes_upto(p_max)) {
        const Complex ps = std::exp(-s * std::log(double(p)));
        Complex local = 1.0;
        for (const Complex& root : rho.local_roots(SatakePair::from_coefficient(c.at(p)))) local *= 1.0 - root * ps;
        product /= local;
    }
    return product;
}

Complex gamma_factor(Complex s, double r)
{
    const Complex ir(0.0, r);
    return std::exp(-s * std::log(kPi) + specfun::log_gamma(0.5 * (s + ir)) + specfun::log_gamma(0.5 * (s - ir)));
}

SeriesValue lambda_direct(Complex s, const SpectralPoint& point)
{
    if (point.symmetry != maass::Symmetry::even) throw DomainError("lambda_direct: even forms only");
    SeriesValue L = l_series(s, point.coefficients);
    const Complex g = gamma_factor(s, point.r);
    return {g * L.value, std::abs(g) * L.tail_bound};
}

Complex lambda_mellin(Complex s, const SpectralPoint& point, const MellinOptions& opts)
{
    if (point.symmetry != maass::Symmetry::even) throw DomainError("lambda_mellin: even forms only");
    if (!(opts.split > 0.0)) throw DomainError("lambda_mellin: split point must be positive");
    const auto& c = point.coefficients;
    const double r = std::abs(point.r);
    // f(iy) is below 1e-25 of its size near y = 1 past this height
    const double hi = (r + 60.0) / (2.0 * kPi) + 2.0;
    const double scale = std::exp(-0.5 * kPi * r);

    auto f_iy = [&](double y) { return scale * maass::expansion_eval_scaled(c, {0.0, y}); };
    // sum over [a, b] of f(iy) y^{e - 1} for each exponent e, f evaluated once
    auto pieces = [&](double a, double b, std::initializer_list<Complex> exponents) {
        const int panels = std::max(4, int(std::ceil((b - a) * opts.panels_per_unit)));
        std::vector<Complex> totals(exponents.size(), 0.0);
        for (const auto& node : quad::gauss_panel_nodes(a, b, panels)) {
            const double wf = node.w * f_iy(node.x);
            const double lx = std::log(node.x);
            std::size_t i = 0;
            for (const Complex& e : exponents) totals[i++] += wf * std::exp((e - 1.0) * lx);
        }
        return totals;
    };

    // Panels start exactly at the split points so none straddles them.
    const double A = opts.split;
    const Complex e1 = s - 0.5, e2 = 0.5 - s;
    const double top = std::max(A, 1.0 / A);
    const auto tail = pieces(top, hi, {e1, e2});
    Complex value = tail[0] + tail[1];
    if (A < 1.0)
        value += pieces(A, top, {e1})[0];
    else if (A > 1.0)
        value += pieces(1.0 / A, top, {e2})[0];
    return opts.kappa * value;
}

double measure_kappa(const SpectralPoint& point, double s_anchor)
{
    MellinOptions unit;
    unit.kappa = 1.0;
    const Complex mellin = lambda_mellin(s_anchor, point, unit);
    return (lambda_direct(s_anchor, point).value / mellin).real();
}

Complex lambda_completed(Complex s, const SpectralPoint& point) { return lambda_mellin(s, point); }

}  // namespace hs::hecke
