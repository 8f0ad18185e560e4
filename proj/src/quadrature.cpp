#include "hs/quadrature.hpp"

#include <cmath>

namespace hs::quad {

namespace {

constexpr double kHalfPi = 1.5707963267948966192313216916397514;
constexpr double kTMax = 3.6;

TanhSinhTable::Node make_node(double t)
{
    const double a = kHalfPi * std::sinh(t);
    const double e = std::exp(-2.0 * a);
    const double one_minus_x = 2.0 * e / (1.0 + e);
    const double w = kHalfPi * std::cosh(t) * 4.0 * e / ((1.0 + e) * (1.0 + e));
    return {one_minus_x, w};
}

}  // namespace

TanhSinhTable::TanhSinhTable() : levels_(kMaxLevel + 1), center_weight_(kHalfPi)
{
    for (int k = 0; k <= kMaxLevel; ++k) {
        const double h = step(k);
        // Level 0 takes every multiple of h; later levels the odd multiples.
        const int stride = (k == 0) ? 1 : 2;
        for (int j = 1;; j += stride) {
            const double t = j * h;
            if (t > kTMax) break;
            const Node n = make_node(t);
            if (n.one_minus_x <= 0.0 || n.weight < 1e-300) break;
            levels_[k].push_back(n);
        }
    }
}

const TanhSinhTable& TanhSinhTable::instance()
{
    static const TanhSinhTable table;
    return table;
}

}  // namespace hs::quad
