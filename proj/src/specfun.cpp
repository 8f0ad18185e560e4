#include "hs/specfun.hpp"

#include "hs/errors.hpp"
#include "hs/quadrature.hpp"

#include <array>
#include <cmath>
#include <numeric>
#include <string>

namespace hs::specfun {

namespace {

using namespace std::complex_literals;

// B_{2k} as exact fractions, k = 0..15.
constexpr std::array<std::pair<double, double>, 16> kBernoulliFractions{{
    {1.0, 1.0},
    {1.0, 6.0},
    {-1.0, 30.0},
    {1.0, 42.0},
    {-1.0, 30.0},
    {5.0, 66.0},
    {-691.0, 2730.0},
    {7.0, 6.0},
    {-3617.0, 510.0},
    {43867.0, 798.0},
    {-174611.0, 330.0},
    {854513.0, 138.0},
    {-236364091.0, 2730.0},
    {8553103.0, 6.0},
    {-23749461029.0, 870.0},
    {8615841276005.0, 14322.0},
}};

struct Tables {
    std::array<double, 16> bernoulli{};
    // B_{2k} / (2k)!
    std::array<double, 16> bernoulli_over_factorial{};

    Tables()
    {
        double fact = 1.0;
        for (int k = 0; k < 16; ++k) {
            if (k > 0) fact *= double(2 * k - 1) * double(2 * k);
            bernoulli[k] = kBernoulliFractions[k].first / kBernoulliFractions[k].second;
            bernoulli_over_factorial[k] = bernoulli[k] / fact;
        }
    }
};

const Tables& tables()
{
    static const Tables t;
    return t;
}

constexpr double kLanczosG = 7.0;
constexpr std::array<double, 9> kLanczos{
    0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};

bool is_nonpositive_integer(Complex z)
{
    return z.imag() == 0.0 && z.real() <= 0.0 && z.real() == std::floor(z.real());
}

// log Gamma(z) for Re z >= 1/2.
Complex log_gamma_right(Complex z)
{
    z -= 1.0;
    Complex series = kLanczos[0];
    for (std::size_t i = 1; i < kLanczos.size(); ++i) series += kLanczos[i] / (z + double(i));
    const Complex t = z + kLanczosG + 0.5;
    return 0.5 * std::log(2.0 * kPi) + (z + 0.5) * std::log(t) - t + std::log(series);
}

// A logarithm of sin(pi z), stable for large |Im z|.
Complex log_sin_pi(Complex z)
{
    const Complex w = kPi * z;
    if (std::abs(w.imag()) < 20.0) return std::log(std::sin(w));
    if (w.imag() > 0.0) {
        // sin w = (i/2) e^{-iw} (1 - e^{2iw})
        return std::log(0.5i) - 1i * w + std::log(1.0 - std::exp(2.0i * w));
    }
    return std::conj(log_sin_pi(std::conj(z)));
}

// Euler-Maclaurin sum for sum_{n>=0} (n + a)^{-s}. When `pole_removed`
// is set, the result is multiplied by (s - 1) analytically. When
// `regularized_pole` is set, the term x^{1-s}/(s-1) is replaced by
// (x^{1-s} - 1)/(s-1), which is what survives in character sums where
// the 1/(s-1) parts cancel.
Complex euler_maclaurin(Complex s, double a, bool pole_removed, bool regularized_pole = false)
{
    const auto& tab = tables();
    const double abs_s = std::abs(s);
    const int n_terms = std::max({20, int(std::ceil(2.0 * std::abs(s.imag()))), int(std::ceil(abs_s))});

    Complex head = 0.0;
    for (int n = 0; n < n_terms; ++n) head += std::exp(-s * std::log(double(n) + a));

    const double x = double(n_terms) + a;
    const double log_x = std::log(x);
    const Complex x_pow_minus_s = std::exp(-s * log_x);

    Complex corr = 0.5 * x_pow_minus_s;
    // Rising factorial s (s+1) ... (s+2k-2) times x^{-s-2k+1}.
    Complex rising = s;
    Complex x_pow = x_pow_minus_s / x;
    for (int k = 1; k < 16; ++k) {
        const Complex term = tab.bernoulli_over_factorial[k] * rising * x_pow;
        corr += term;
        if (std::abs(term) < 1e-18 * std::abs(head + corr)) break;
        rising *= (s + double(2 * k - 1)) * (s + double(2 * k));
        x_pow /= x * x;
    }

    const Complex pole_numerator = x_pow_minus_s * x;  // x^{1-s}
    if (pole_removed) return (s - 1.0) * (head + corr) + pole_numerator;
    if (regularized_pole) {
        // (x^{1-s} - 1)/(s - 1) = -log x * (e^w - 1)/w with w = (1-s) log x
        const Complex w = (1.0 - s) * log_x;
        Complex phi1;
        if (std::abs(w) < 1e-5) {
            phi1 = 1.0 + w / 2.0 + w * w / 6.0;
        } else {
            phi1 = (std::exp(w) - 1.0) / w;
        }
        return head + corr - log_x * phi1;
    }
    return head + corr + pole_numerator / (s - 1.0);
}

std::int64_t gcd64(std::int64_t a, std::int64_t b) { return std::gcd(a, b); }

int kronecker_symbol(std::int64_t d, std::int64_t n)
{
    // (d/n) for n >= 1 using multiplicativity in n.
    if (n == 0) return (d == 1 || d == -1) ? 1 : 0;
    int result = 1;
    while (n % 2 == 0) {
        n /= 2;
        if (d % 2 == 0) return 0;
        const std::int64_t dm8 = ((d % 8) + 8) % 8;
        if (dm8 == 3 || dm8 == 5) result = -result;
    }
    if (n == 1) return result;
    // Jacobi symbol (d/n) for odd n.
    std::int64_t a = ((d % n) + n) % n;
    std::int64_t m = n;
    while (a != 0) {
        while (a % 2 == 0) {
            a /= 2;
            const std::int64_t mm8 = m % 8;
            if (mm8 == 3 || mm8 == 5) result = -result;
        }
        std::swap(a, m);
        if (a % 4 == 3 && m % 4 == 3) result = -result;
        a %= m;
    }
    return (m == 1) ? result : 0;
}

// Nodes of the steepest-descent contour: on u >= u_star the contour
// t = u - i theta(u) has sin(theta) = r u / (y sinh u), and the integrand
// exp(-y cosh u cos(theta) + r (pi/2 - theta)) is real and positive.
double sd_exponent(double r, double y, double u_star, double delta)
{
    const double u = u_star + delta;
    double one_minus_q;
    if (r <= y) {
        // y sinh u - r u = (y - r) u + y (sinh u - u)
        const double sinh_minus_u =
            (u < 1e-3) ? u * u * u / 6.0 * (1.0 + u * u / 20.0) : std::sinh(u) - u;
        const double num = (y - r) * u + y * sinh_minus_u;
        one_minus_q = (u == 0.0) ? (y - r) / y : num / (y * std::sinh(u));
    } else {
        // y sinh u - r u = y (sinh u - sinh u*) - r (u - u*), u* being the root
        const double num = delta * (y * 2.0 * std::cosh(u_star + 0.5 * delta) *
                                        (delta < 1e-8 ? 0.5 : std::sinh(0.5 * delta) / delta) -
                                    r);
        one_minus_q = num / (y * std::sinh(u));
    }
    if (one_minus_q < 0.0) one_minus_q = 0.0;
    if (one_minus_q > 1.0) one_minus_q = 1.0;
    // theta_c = pi/2 - theta = acos(q) = 2 asin(sqrt((1 - q)/2))
    const double theta_c = 2.0 * std::asin(std::sqrt(0.5 * one_minus_q));
    return -y * std::cosh(u) * std::sin(theta_c) + r * theta_c;
}

}  // namespace

double bernoulli_even(int k)
{
    if (k < 0 || k > 15) throw DomainError("bernoulli_even: index out of table range");
    return tables().bernoulli[k];
}

Complex log_gamma(Complex z)
{
    if (is_nonpositive_integer(z)) throw PoleError("log_gamma: pole at non-positive integer");
    if (z.real() >= 0.5) return log_gamma_right(z);
    return std::log(kPi) - log_sin_pi(z) - log_gamma_right(1.0 - z);
}

Complex gamma(Complex z)
{
    if (is_nonpositive_integer(z)) throw PoleError("gamma: pole at non-positive integer");
    if (z.real() >= 0.5) return std::exp(log_gamma_right(z));
    return kPi / (std::sin(kPi * z) * std::exp(log_gamma_right(1.0 - z)));
}

Complex digamma(Complex z)
{
    if (is_nonpositive_integer(z)) throw PoleError("digamma: pole at non-positive integer");
    if (z.real() < 0.5) {
        // psi(z) = psi(1 - z) - pi cot(pi z)
        const Complex w = kPi * z;
        Complex cot;
        if (std::abs(w.imag()) > 20.0) {
            cot = (w.imag() > 0.0) ? Complex(0.0, -1.0) : Complex(0.0, 1.0);
        } else {
            cot = std::cos(w) / std::sin(w);
        }
        return digamma(1.0 - z) - kPi * cot;
    }
    Complex shift = 0.0;
    while (std::abs(z) < 15.0) {
        shift -= 1.0 / z;
        z += 1.0;
    }
    const auto& tab = tables();
    const Complex inv2 = 1.0 / (z * z);
    Complex series = 0.0;
    Complex p = inv2;
    for (int k = 1; k <= 10; ++k) {
        series += tab.bernoulli[k] / double(2 * k) * p;
        p *= inv2;
    }
    return shift + std::log(z) - 0.5 / z - series;
}

Complex zeta(Complex s)
{
    if (s == Complex(1.0, 0.0)) throw PoleError("zeta: pole at s = 1");
    return euler_maclaurin(s, 1.0, false);
}

Complex zeta_pole_removed(Complex s) { return euler_maclaurin(s, 1.0, true); }

Complex hurwitz_zeta(Complex s, double a)
{
    if (!(a > 0.0 && a <= 1.0)) throw DomainError("hurwitz_zeta: a must lie in (0, 1]");
    if (s == Complex(1.0, 0.0)) throw PoleError("hurwitz_zeta: pole at s = 1");
    return euler_maclaurin(s, a, false);
}

DirichletCharacter::DirichletCharacter(std::int64_t modulus, std::vector<Complex> values)
    : modulus_(modulus), values_(std::move(values)), principal_(true)
{
    if (modulus_ < 1) throw DomainError("DirichletCharacter: modulus must be positive");
    if (std::int64_t(values_.size()) != modulus_)
        throw DomainError("DirichletCharacter: table size must equal the modulus");
    constexpr double tol = 1e-12;
    if (std::abs(values_[1 % modulus_] - 1.0) > tol)
        throw DomainError("DirichletCharacter: chi(1) must be 1");
    for (std::int64_t a = 0; a < modulus_; ++a) {
        const bool unit = gcd64(a, modulus_) == 1;
        const double mag = std::abs(values_[a]);
        if (unit && std::abs(mag - 1.0) > tol)
            throw DomainError("DirichletCharacter: values on units must be roots of unity");
        if (!unit && mag != 0.0)
            throw DomainError("DirichletCharacter: value must vanish off the units");
        if (unit && std::abs(values_[a] - 1.0) > tol) principal_ = false;
    }
    for (std::int64_t a = 0; a < modulus_; ++a)
        for (std::int64_t b = 0; b < modulus_; ++b)
            if (std::abs(values_[(a * b) % modulus_] - values_[a] * values_[b]) > 1e-10)
                throw DomainError("DirichletCharacter: table is not multiplicative");
}

DirichletCharacter DirichletCharacter::principal(std::int64_t modulus)
{
    if (modulus < 1) throw DomainError("DirichletCharacter: modulus must be positive");
    std::vector<Complex> v(modulus);
    for (std::int64_t a = 0; a < modulus; ++a) v[a] = (gcd64(a, modulus) == 1) ? 1.0 : 0.0;
    return DirichletCharacter(modulus, std::move(v));
}

DirichletCharacter DirichletCharacter::kronecker(std::int64_t discriminant)
{
    const std::int64_t q = discriminant < 0 ? -discriminant : discriminant;
    if (q < 1) throw DomainError("DirichletCharacter: discriminant must be non-zero");
    std::vector<Complex> v(q);
    for (std::int64_t a = 0; a < q; ++a) v[a] = double(kronecker_symbol(discriminant, a == 0 ? q : a));
    if (q == 1) v[0] = 1.0;
    return DirichletCharacter(q, std::move(v));
}

Complex DirichletCharacter::operator()(std::int64_t n) const
{
    const std::int64_t r = ((n % modulus_) + modulus_) % modulus_;
    return values_[r];
}

Complex dirichlet_l(Complex s, const DirichletCharacter& chi)
{
    const std::int64_t q = chi.modulus();
    if (chi.is_principal() && s == Complex(1.0, 0.0))
        throw PoleError("dirichlet_l: pole of the principal character at s = 1");
    Complex sum = 0.0;
    for (std::int64_t a = 1; a <= q; ++a) {
        const Complex c = chi(a);
        if (c == 0.0) continue;
        const double shift = double(a) / double(q);
        sum += c * (chi.is_principal() ? euler_maclaurin(s, shift, false)
                                       : euler_maclaurin(s, shift, false, true));
    }
    return std::exp(-s * std::log(double(q))) * sum;
}

double bessel_k_imag_scaled(double r, double y, const BesselKOptions& opts)
{
    if (!(y > 0.0)) throw DomainError("bessel_k_imag: y must be positive");
    r = std::abs(r);

    // Left end of the steepest-descent piece: 0 when r <= y, otherwise the
    // positive root of y sinh u = r u. For u in [0, u*] the contour runs
    // along Im t = -pi/2 where the integrand is e^{-pi r/2} cos(y sinh u - r u).
    double u_star = 0.0;
    double oscillatory = 0.0;
    if (r > y) {
        // g(u) = y sinh u - r u is convex on u > 0, so Newton started right of
        // the root decreases monotonically onto it.
        double u = std::acosh(r / y) + 1.0;
        while (y * std::sinh(u) - r * u <= 0.0) u *= 2.0;
        for (int it = 0; it < 200; ++it) {
            const double g = y * std::sinh(u) - r * u;
            const double dg = y * std::cosh(u) - r;
            const double step = g / dg;
            u -= step;
            if (std::abs(step) < 1e-15 * u) break;
        }
        u_star = u;
        // Phase y sinh u - r u varies by 2 |min| over [0, u*].
        const double um = std::acosh(r / y);
        const double phase_min = std::abs(y * std::sinh(um) - r * um);
        const int panels = 2 + int(std::ceil(2.0 * phase_min / kPi)) * (1 + opts.extra_halvings);
        oscillatory = quad::gauss_panels(
            [r, y](double v) { return std::cos(y * std::sinh(v) - r * v); }, 0.0, u_star, panels);
    }

    const double e0 = sd_exponent(r, y, u_star, 0.0);
    // Extend until the integrand is below 1e-19 of its peak at u*.
    double span = 0.25;
    while (sd_exponent(r, y, u_star, span) > e0 - 44.0) span *= 1.5;

    auto integrand = [&](double left, double) {
        return std::exp(sd_exponent(r, y, u_star, left) - e0);
    };
    const quad::Result sd =
        quad::tanh_sinh_endpoint(integrand, 0.0, span, 1e-15, opts.extra_halvings);
    return oscillatory + std::exp(e0) * sd.value;
}

double bessel_k_imag(double r, double y, const BesselKOptions& opts)
{
    return std::exp(-0.5 * kPi * std::abs(r)) * bessel_k_imag_scaled(r, y, opts);
}

}  // namespace hs::specfun
