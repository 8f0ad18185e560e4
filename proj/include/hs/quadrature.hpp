#pragma once

// Quadrature helpers shared by the evaluators: fixed Gauss-Legendre panels,
// a tanh-sinh rule with endpoint-distance abscissae, and an adaptive
// Gauss-Kronrod wrapper.

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <limits>
#include <utility>
#include <vector>

namespace hs::quad {

struct Result {
    double value = 0.0;
    double error = 0.0;
};

/// Sum of 20-point Gauss-Legendre rules over `panels` equal subintervals.
template <class F>
double gauss_panels(F&& f, double a, double b, int panels)
{
    using Rule = boost::math::quadrature::gauss<double, 20>;
    if (panels < 1) panels = 1;
    const double w = (b - a) / panels;
    double sum = 0.0;
    for (int i = 0; i < panels; ++i) {
        const double lo = a + i * w;
        sum += Rule::integrate(f, lo, lo + w);
    }
    return sum;
}

struct Node {
    double x;
    double w;
};

/// Nodes and weights of gauss_panels, for integrands evaluated once and
/// reused against several weight functions.
inline std::vector<Node> gauss_panel_nodes(double a, double b, int panels)
{
    using Rule = boost::math::quadrature::gauss<double, 20>;
    if (panels < 1) panels = 1;
    const auto& xs = Rule::abscissa();
    const auto& ws = Rule::weights();
    const double width = (b - a) / panels;
    std::vector<Node> nodes;
    nodes.reserve(std::size_t(panels) * 20);
    for (int i = 0; i < panels; ++i) {
        const double mid = a + (i + 0.5) * width, half = 0.5 * width;
        for (std::size_t j = 0; j < xs.size(); ++j) {
            nodes.push_back({mid + half * xs[j], half * ws[j]});
            if (xs[j] != 0.0) nodes.push_back({mid - half * xs[j], half * ws[j]});
        }
    }
    return nodes;
}

/// Adaptive 31-point Gauss-Kronrod; infinite limits are allowed.
template <class F>
Result adaptive(F&& f, double a, double b, double rel_tol = 1e-12, unsigned max_depth = 18)
{
    using GK = boost::math::quadrature::gauss_kronrod<double, 31>;
    Result r;
    double l1 = 0.0;
    r.value = GK::integrate(f, a, b, max_depth, rel_tol, &r.error, &l1);
    return r;
}

/// Adaptive integration over a list of breakpoints (each piece adaptive).
template <class F>
Result adaptive_pieces(F&& f, const std::vector<double>& breaks, double rel_tol = 1e-12,
                       unsigned max_depth = 18)
{
    Result total;
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
        const Result piece = adaptive(f, breaks[i], breaks[i + 1], rel_tol, max_depth);
        total.value += piece.value;
        total.error += piece.error;
    }
    return total;
}

/// Tanh-sinh abscissae on [-1, 1] stored by level. Level 0 has step 1/2;
/// each later level adds the odd multiples of the halved step. Nodes are kept
/// as (distance to the nearer endpoint, weight) so integrands with endpoint
/// singularities can be evaluated without cancellation.
class TanhSinhTable {
public:
    static constexpr int kMaxLevel = 9;
    static const TanhSinhTable& instance();

    struct Node {
        double one_minus_x;  // 1 - |x|
        double weight;       // already multiplied by nothing; caller scales by h
    };
    /// Nodes with t > 0 added at `level` (level 0 also contains t = 0 separately).
    const std::vector<Node>& level(int k) const { return levels_[k]; }
    double center_weight() const { return center_weight_; }
    static double step(int k) { return 0.5 / double(1 << k); }

private:
    TanhSinhTable();
    std::vector<std::vector<Node>> levels_;
    double center_weight_;
};

/// Tanh-sinh integration of g(delta_left, delta_right) over [a, b], where the
/// integrand receives the distances of the abscissa from both endpoints.
/// Refines until successive levels agree to `rel_tol`, then applies
/// `extra_levels` further halvings.
template <class G>
Result tanh_sinh_endpoint(G&& g, double a, double b, double rel_tol = 1e-15,
                          int extra_levels = 0)
{
    const auto& table = TanhSinhTable::instance();
    const double half = 0.5 * (b - a);
    const double width = b - a;
    auto eval_level = [&](int k) {
        double s = 0.0;
        for (const auto& node : table.level(k)) {
            const double near = half * node.one_minus_x;
            const double far = width - near;
            s += node.weight * (g(near, far) + g(far, near));
        }
        return s;
    };
    double sum = table.center_weight() * g(half, half) + eval_level(0);
    double estimate = sum * TanhSinhTable::step(0) * half;
    double previous = estimate;
    Result res;
    res.error = std::numeric_limits<double>::infinity();
    int converged_at = -1;
    for (int k = 1; k <= TanhSinhTable::kMaxLevel; ++k) {
        sum += eval_level(k);
        estimate = sum * TanhSinhTable::step(k) * half;
        const double diff = std::abs(estimate - previous);
        previous = estimate;
        if (converged_at < 0 && k >= 3 && diff <= rel_tol * std::abs(estimate)) {
            converged_at = k;
            res.error = diff;
        }
        if (converged_at >= 0 && k >= converged_at + extra_levels) break;
        if (converged_at < 0) res.error = diff;
    }
    res.value = estimate;
    return res;
}

}  // namespace hs::quad
