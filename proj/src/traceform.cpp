#include "hs/traceform.hpp"

#include "hs/diagnostics.hpp"
#include "hs/errors.hpp"
#include "hs/quadrature.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <sstream>

namespace hs::traceform {

namespace {

using specfun::kPi;

// g(u) = norm * exp(-1/(1 - (u/eps)^2))
class Bump {
public:
    explicit Bump(double eps) : eps_(eps)
    {
        double I1 = 0.0;
        for (const auto& node : quad::gauss_panel_nodes(-1.0, 1.0, 64)) I1 += node.w * unit(node.x);
        norm_ = 1.0 / (eps_ * I1);
    }

    double g(double u) const { return norm_ * unit(u / eps_); }

    double g_prime(double u) const
    {
        const double x = u / eps_;
        if (std::abs(x) >= 1.0) return 0.0;
        const double q = 1.0 - x * x;
        return g(u) * (-2.0 * x / (q * q)) / eps_;
    }

    // 2 int_0^eps g(u) cos(ru) du
    double h(double r) const
    {
        double sum = 0.0;
        for (const auto& n : nodes(panels_for(r))) sum += n.w * std::cos(r * n.x);
        return 2.0 * sum;
    }

    // int_{-inf}^x h = pi g(0) + 2 int_0^eps g(u) sin(xu)/u du
    double cumulative(double x) const
    {
        double sum = 0.0;
        for (const auto& n : nodes(panels_for(x))) sum += n.w * std::sin(x * n.x) / n.x;
        return kPi * g(0.0) + 2.0 * sum;
    }

private:
    static double unit(double x)
    {
        if (std::abs(x) >= 1.0) return 0.0;
        return std::exp(-1.0 / (1.0 - x * x));
    }

    int panels_for(double r) const { return 8 + int(std::ceil(std::abs(r) * eps_ / 3.0)); }

    // Gauss nodes on [0, eps] with the weights multiplied by g
    const std::vector<quad::Node>& nodes(int panels) const
    {
        std::lock_guard<std::mutex> lock(mutex_);
        auto it = cache_.find(panels);
        if (it == cache_.end()) {
            auto nodes = quad::gauss_panel_nodes(0.0, eps_, panels);
            for (auto& n : nodes) n.w *= g(n.x);
            it = cache_.emplace(panels, std::move(nodes)).first;
        }
        return it->second;
    }

    double eps_;
    double norm_ = 1.0;
    mutable std::mutex mutex_;
    mutable std::map<int, std::vector<quad::Node>> cache_;
};

// Breakpoints on [a, b]: width grows with the distance from the nearest focus
// point, between min_width and max_width. Every focus inside (a, b) is a break.
std::vector<double> panel_breaks(double a, double b, std::vector<double> focus, double min_width, double max_width)
{
    std::sort(focus.begin(), focus.end());
    std::vector<double> breaks{a};
    double x = a;
    while (x < b) {
        double dist = std::numeric_limits<double>::infinity(), next_focus = b;
        for (double f : focus) {
            dist = std::min(dist, std::abs(x - f));
            if (f > x && f < next_focus) next_focus = f;
        }
        if (focus.empty()) dist = 0.0;
        const double w = std::clamp(min_width + 0.15 * dist, min_width, max_width);
        x = std::min({x + w, next_focus, b});
        if (next_focus - x < 1e-3 * min_width) x = next_focus;
        breaks.push_back(x);
    }
    return breaks;
}

template <class F>
double integrate_breaks(F&& f, const std::vector<double>& breaks)
{
    double sum = 0.0;
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) sum += quad::gauss_panels(f, breaks[i], breaks[i + 1], 1);
    return sum;
}

constexpr double kTailTol = 1e-13;

double min_width(const TestFunctionPair& p) { return 0.25 * std::min(1.0, p.h_scale); }

// int_{-inf}^{inf} f(r) dr for f even and concentrated where h is
template <class F>
double integrate_even_h(const TestFunctionPair& pair, F&& f, std::vector<double> focus)
{
    focus.push_back(0.0);
    const double R = pair.h_radius(kTailTol);
    return 2.0 * integrate_breaks(f, panel_breaks(0.0, R, focus, min_width(pair), 1.0));
}

}  // namespace

double TestFunctionPair::h_mass() const { return 2.0 * kPi * g(0.0); }

TestFunctionPair make_bump_pair(double epsilon)
{
    if (!(epsilon > 0.0)) throw DomainError("make_bump_pair: support radius must be positive");
    auto b = std::make_shared<const Bump>(epsilon);
    TestFunctionPair p;
    p.g = [b](double u) { return b->g(u); };
    p.g_prime = [b](double u) { return b->g_prime(u); };
    p.h = [b](double r) { return b->h(r); };
    p.h_cumulative = [b](double x) { return b->cumulative(x); };
    p.ghat0 = 1.0;
    p.epsilon = epsilon;
    p.g_extent = epsilon;
    p.h_radius = [epsilon](double tol) {
        const double L = std::max(1.0, std::log(1.0 / tol));
        return L * L / epsilon;
    };
    p.h_scale = 1.0 / epsilon;
    return p;
}

TestFunctionPair make_gaussian_pair(double a)
{
    if (!(a > 0.0)) throw DomainError("make_gaussian_pair: a must be positive");
    const double c = 1.0 / (2.0 * std::sqrt(kPi * a));
    TestFunctionPair p;
    p.g = [a, c](double u) { return c * std::exp(-u * u / (4.0 * a)); };
    p.g_prime = [a, c](double u) { return -u / (2.0 * a) * c * std::exp(-u * u / (4.0 * a)); };
    p.h = [a](double r) { return std::exp(-a * r * r); };
    p.h_cumulative = [a](double x) { return 0.5 * std::sqrt(kPi / a) * (1.0 + std::erf(std::sqrt(a) * x)); };
    p.ghat0 = 1.0;
    p.g_extent = std::sqrt(4.0 * a * 40.0);
    p.h_radius = [a](double tol) { return std::sqrt(std::max(1.0, std::log(1.0 / tol)) / a); };
    p.h_scale = 1.0 / std::sqrt(a);
    return p;
}

TestFunctionPair shifted_pair(const TestFunctionPair& pair, double t)
{
    const TestFunctionPair base = pair;
    TestFunctionPair p = pair;
    const double mass = pair.h_mass();
    p.g = [base, t](double u) { return 2.0 * std::cos(t * u) * base.g(u); };
    p.g_prime = [base, t](double u) {
        return 2.0 * (-t * std::sin(t * u) * base.g(u) + std::cos(t * u) * base.g_prime(u));
    };
    p.h = [base, t](double r) { return base.h(t - r) + base.h(t + r); };
    p.h_cumulative = [base, t, mass](double x) {
        return mass - base.h_cumulative(t - x) + base.h_cumulative(t + x);
    };
    p.ghat0 = 2.0 * pair.h(t);
    p.h_radius = [base, t](double tol) { return std::abs(t) + base.h_radius(tol); };
    return p;
}

void LengthSpectrumEntry::validate() const
{
    if (!(ell0 > 0.0) || !(ell >= ell0)) throw DomainError("length entry needs 0 < ell0 <= ell");
    const double k = ell / ell0;
    if (std::abs(k - std::round(k)) > 1e-9) throw DomainError("length entry: ell must be a multiple of ell0");
    if (mult < 1) throw DomainError("length entry: multiplicity must be positive");
}

double plancherel_term(const TestFunctionPair& pair, double area)
{
    auto f = [&](double r) { return pair.h(r) * r * std::tanh(kPi * r); };
    return area / (4.0 * kPi) * integrate_even_h(pair, f, {});
}

double plancherel_term_from_g(const TestFunctionPair& pair, double area)
{
    auto f = [&](double u) { return pair.g_prime(u) / std::sinh(0.5 * u); };
    const double U = pair.g_extent;
    const int panels = std::max(32, int(std::ceil(U / 0.25)));
    return area / (4.0 * kPi) * -2.0 * quad::gauss_panels(f, 0.0, U, panels);
}

double geometric_side(const TestFunctionPair& pair, const std::vector<LengthSpectrumEntry>& lengths)
{
    double sum = 0.0;
    for (const auto& e : lengths) {
        e.validate();
        const double g = pair.g(e.ell);
        if (g == 0.0) continue;
        sum += e.mult * e.ell0 * g / (2.0 * std::sinh(0.5 * e.ell));
    }
    return sum;
}

double spectral_side(const TestFunctionPair& pair, const std::vector<double>& rs, bool symmetrized)
{
    double sum = 0.0;
    for (double r : rs) {
        if (!std::isfinite(r)) throw DomainError("spectral_side: non-finite spectral parameter");
        sum += pair.h(r);
        if (symmetrized) sum += pair.h(-r);
    }
    return sum;
}

CuspTermParts cusp_term_parts(const TestFunctionPair& pair, int m, double phi_half)
{
    if (m < 1) throw DomainError("cusp_term_parts: need at least one cusp");
    CuspTermParts parts;
    const double h0 = pair.h(0.0);
    auto scat = [&](double r) { return pair.h(r) * scattering::phi_log_derivative_line(r); };
    auto psi = [&](double r) { return pair.h(r) * specfun::digamma(Complex(1.0, r)).real(); };
    parts.scattering = integrate_even_h(pair, scat, {}) / (4.0 * kPi);
    parts.phi_half = -0.25 * phi_half * h0;
    parts.digamma = -m / (2.0 * kPi) * integrate_even_h(pair, psi, {});
    parts.constant = 0.25 * m * h0 - m * std::log(2.0) * pair.g(0.0);
    return parts;
}

double cusp_terms(const TestFunctionPair& pair, double t, int m, double phi_half)
{
    return cusp_term_parts(shifted_pair(pair, t), m, phi_half).total();
}

double shifted_scattering_integral(const TestFunctionPair& pair, double t)
{
    const double R = pair.h_radius(kTailTol);
    auto f = [&](double r) { return pair.h(t - r) * scattering::phi_log_derivative_line(r); };
    std::vector<double> focus{t};
    if (std::abs(t) < R) focus.push_back(0.0);
    return integrate_breaks(f, panel_breaks(t - R, t + R, focus, min_width(pair), 1.0)) / (2.0 * kPi);
}

ShiftedIdentity shifted_identity_asymptotics(const TestFunctionPair& pair, double t, double area)
{
    if (t == 0.0) throw DomainError("shifted_identity_asymptotics: t must be non-zero");
    const double R = pair.h_radius(kTailTol);
    const double scale = area / (2.0 * kPi);
    const double w = min_width(pair);

    std::vector<double> focus{t};
    if (std::abs(t) < R) focus.push_back(0.0);
    const auto around_t = panel_breaks(t - R, t + R, focus, w, 1.0);
    const auto around_0 = panel_breaks(-R, R, {0.0}, w, 1.0);

    ShiftedIdentity out;
    out.lhs = scale * integrate_breaks([&](double r) { return pair.h(t - r) * r * std::tanh(kPi * r); }, around_t);
    const double first_moment = integrate_breaks([&](double r) { return pair.h(r) * r; }, around_0);
    const double sign = (t > 0.0) ? 1.0 : -1.0;
    out.rhs = scale * (std::abs(t) * pair.h_mass() - sign * first_moment);

    // r tanh(pi r) = |r| - 2|r| / (exp(2 pi |r|) + 1); the |r| part differs from
    // the right side only by the mass of h beyond t
    auto small = [](double v) {
        const double a = std::abs(v);
        return 2.0 * a / (std::exp(2.0 * kPi * a) + 1.0);
    };
    const double near = integrate_breaks([&](double r) { return pair.h(t - r) * small(r); }, around_t);
    double beyond;
    if (t > 0.0)
        beyond = integrate_breaks([&](double u) { return pair.h(u) * (u - t); }, panel_breaks(t, t + R, {t}, w, 1.0));
    else
        beyond = integrate_breaks([&](double u) { return pair.h(u) * (t - u); }, panel_breaks(t - R, t, {t}, w, 1.0));
    out.residual = scale * (2.0 * beyond - near);
    return out;
}

IntegratedIdentity integrated_identity_growth(const TestFunctionPair& pair, double lambda)
{
    if (!(lambda > 0.0)) throw DomainError("integrated_identity_growth: lambda must be positive");
    const double mass = pair.h_mass();
    const double R = pair.h_radius(kTailTol);
    auto f = [&](double r) {
        const double H = pair.h_cumulative(lambda - r) - pair.h_cumulative(-lambda - r);
        return r * std::tanh(kPi * r) * H / mass;
    };
    IntegratedIdentity out;
    out.value = 2.0 * integrate_breaks(f, panel_breaks(0.0, lambda + R, {0.0, lambda}, min_width(pair), 1.0));
    out.deviation = std::abs(out.value - lambda * lambda);
    return out;
}

int eigenvalue_local_count(const std::vector<double>& rs, double mu, double a)
{
    if (!(a > 0.0)) throw DomainError("eigenvalue_local_count: a must be positive");
    int count = 0;
    for (double r : rs) {
        if (std::abs(r - mu) <= a) ++count;
        if (std::abs(-r - mu) <= a) ++count;
    }
    return count;
}

HeatTrace heat_trace_expansion(double t, const std::vector<double>& rs, double area, const RealFn& log_derivative)
{
    if (!(t > 0.0)) throw DomainError("heat_trace_expansion: t must be positive");
    HeatTrace out;
    out.t = t;
    out.discrete = 1.0;
    double lambda_max = 0.0;
    for (double r : rs) {
        const double lambda = 0.25 + r * r;
        lambda_max = std::max(lambda_max, lambda);
        out.discrete += std::exp(-t * lambda);
    }
    if (!rs.empty() && std::exp(-t * lambda_max) > 1e-8) {
        std::ostringstream msg;
        msg << "heat trace at t = " << t << ": spectrum truncated at lambda = " << lambda_max
            << " leaves exp(-t lambda) = " << std::exp(-t * lambda_max);
        warn(msg.str());
    }
    const double R = std::sqrt(40.0 / t);
    auto f = [&](double r) { return std::exp(-t * (0.25 + r * r)) * log_derivative(r); };
    const int panels = std::max(8, int(std::ceil(R / 0.5)));
    out.continuous = 2.0 * quad::gauss_panels(f, 0.0, R, panels) / (4.0 * kPi);
    out.lhs = out.discrete - out.continuous;
    out.leading = area / (4.0 * kPi * t);
    return out;
}

double heat_trace_leading_coefficient(const std::vector<HeatTrace>& samples)
{
    if (samples.size() < 3) throw DomainError("heat_trace_leading_coefficient: need at least three samples");
    Eigen::MatrixXd A(samples.size(), 3);
    Eigen::VectorXd b(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double t = samples[i].t, st = std::sqrt(t);
        A(i, 0) = 1.0;
        A(i, 1) = st * std::log(t);
        A(i, 2) = st;
        b(i) = t * samples[i].lhs;
    }
    const Eigen::VectorXd x = A.colPivHouseholderQr().solve(b);
    return x(0);
}

CountingCurve weyl_counting_curve(const std::vector<double>& rs, const std::vector<scattering::WindingRecord>& winding,
                                  double area, int m, bool include_constant)
{
    if (!std::is_sorted(rs.begin(), rs.end())) throw DomainError("weyl_counting_curve: spectrum must be sorted");
    CountingCurve c;
    double num = 0.0, den = 0.0;
    std::size_t below = 0;
    for (const auto& w : winding) {
        const double lambda = w.lambda;
        if (!c.grid.empty() && !(lambda > c.grid.back()))
            throw DomainError("weyl_counting_curve: grid must be increasing");
        while (below < rs.size() && rs[below] <= lambda) ++below;
        const int N = (include_constant ? 1 : 0) + int(below);
        const double main = area / (4.0 * kPi) * lambda * lambda;
        const double log_term = (lambda > 0.0) ? m / kPi * lambda * std::log(lambda) : 0.0;
        const double D = N + w.M - main + log_term;
        c.grid.push_back(lambda);
        c.N.push_back(N);
        c.M.push_back(w.M);
        c.main.push_back(main);
        c.D.push_back(D);
        num += D * lambda;
        den += lambda * lambda;
    }
    c.fit_c = (den > 0.0) ? num / den : 0.0;
    for (std::size_t i = 0; i < c.grid.size(); ++i)
        c.fit_residual = std::max(c.fit_residual, std::abs(c.D[i] - c.fit_c * c.grid[i]));
    return c;
}

double area_fundamental_domain()
{
    auto inner = [](double x) {
        const double lo = std::sqrt(1.0 - x * x);
        return quad::adaptive([](double y) { return 1.0 / (y * y); }, lo, std::numeric_limits<double>::infinity(),
                              1e-14)
            .value;
    };
    return quad::adaptive(inner, -0.5, 0.5, 1e-14).value;
}

double trace_residual(const TestFunctionPair& pair, const std::vector<double>& rs,
                      const std::vector<LengthSpectrumEntry>& lengths, double area)
{
    return spectral_side(pair, rs, false) - plancherel_term(pair, area) - geometric_side(pair, lengths);
}

double synthetic_area(const TestFunctionPair& pair, const std::vector<double>& rs,
                      const std::vector<LengthSpectrumEntry>& lengths)
{
    const double unit = plancherel_term_from_g(pair, 1.0);
    if (unit == 0.0) throw DomainError("synthetic_area: Plancherel integral vanishes");
    return (spectral_side(pair, rs, false) - geometric_side(pair, lengths)) / unit;
}

}  // namespace hs::traceform
