#include "hs/maass.hpp"

#include "hs/diagnostics.hpp"
#include "hs/errors.hpp"
#include "hs/specfun.hpp"

#include <boost/math/tools/toms748_solve.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace hs::maass {

namespace {

using hypgeom::HPoint;
using specfun::bessel_k_imag_scaled;
using specfun::kPi;

constexpr double kTwoPi = 2.0 * kPi;
const double kSqrt3Half = std::sqrt(3.0) / 2.0;

double cs(Symmetry sym, double t) { return sym == Symmetry::even ? std::cos(t) : std::sin(t); }

// Past this argument e^{pi r/2} K_{ir} is below ~1e-17.
double k_cutoff(double r) { return r + 12.0 * std::sqrt(r + 4.0); }

struct Pulled {
    double x_orig;
    HPoint star;
};

// 2Q points uniformly spaced over a full period; any phase gives exact
// discrete orthogonality of cos/sin up to frequency Q.
std::vector<Pulled> pulled_points(int Q, double y, double phase)
{
    std::vector<Pulled> pts(2 * Q);
    for (int m = 0; m < 2 * Q; ++m) {
        const double x = (m - Q + phase) / (2.0 * Q);
        pts[m] = {x, hypgeom::reduce_to_fundamental_domain({x, y}).point};
    }
    return pts;
}

// One signed coefficient difference between the two heights.
double difference_component(double r, Symmetry sym, const ResidualOptions& opts, int k)
{
    return two_height_difference(r, sym, opts).at(k);
}

}  // namespace

std::string to_string(Symmetry s) { return s == Symmetry::even ? "even" : "odd"; }

Symmetry parse_symmetry(const std::string& text)
{
    if (text == "even") return Symmetry::even;
    if (text == "odd") return Symmetry::odd;
    throw DomainError("symmetry must be 'even' or 'odd', got '" + text + "'");
}

double FourierCoefficients::at(int n) const
{
    if (n < 1 || n > truncation()) {
        std::ostringstream msg;
        msg << "coefficient a(" << n << ") outside 1.." << truncation();
        throw IndexRangeError(msg.str());
    }
    return a[n - 1];
}

double expansion_eval_scaled(const FourierCoefficients& c, const HPoint& z)
{
    const double cutoff = k_cutoff(std::abs(c.r));
    const double sy = std::sqrt(z.y);
    double sum = 0.0;
    for (int n = 1; n <= c.truncation(); ++n) {
        const double arg = kTwoPi * n * z.y;
        if (n > 1 && arg > cutoff) break;
        if (c.a[n - 1] == 0.0) continue;
        sum += c.a[n - 1] * bessel_k_imag_scaled(c.r, arg) * cs(c.symmetry, kTwoPi * n * z.x);
    }
    return sy * sum;
}

double expansion_eval(const FourierCoefficients& c, const HPoint& z)
{
    return std::exp(-0.5 * kPi * std::abs(c.r)) * expansion_eval_scaled(c, z);
}

int truncation_for(double r, double y)
{
    if (!(y > 0.0)) throw DomainError("truncation_for: y must be positive");
    return std::max(1, int(std::ceil(k_cutoff(std::abs(r)) / (kTwoPi * y))));
}

CollocationSystem build_collocation_system(double r, Symmetry sym, double y0, int M,
                                           const CollocationOptions& opts)
{
    if (!(y0 > 0.0 && y0 < kSqrt3Half))
        throw DomainError("build_collocation_system: need 0 < y0 < sqrt(3)/2");
    if (M < 1) throw DomainError("build_collocation_system: M must be positive");

    const int Q = M + std::max(0, opts.extra_points);
    const auto pts = pulled_points(Q, y0, opts.phase);

    const int npts = int(pts.size());
    // P(m, l) = sqrt(y*_m) K~(2 pi l y*_m) cs(2 pi l x*_m)
    Eigen::MatrixXd P(npts, M);
    for (int m = 0; m < npts; ++m) {
        const HPoint& w = pts[m].star;
        const double sy = std::sqrt(w.y);
        for (int l = 1; l <= M; ++l) {
            const double arg = kTwoPi * l * w.y;
            P(m, l - 1) =
                arg > k_cutoff(r) ? 0.0 : sy * bessel_k_imag_scaled(r, arg) * cs(sym, kTwoPi * l * w.x);
        }
    }
    Eigen::MatrixXd C(M, npts);
    for (int k = 1; k <= M; ++k)
        for (int m = 0; m < npts; ++m) C(k - 1, m) = cs(sym, kTwoPi * k * pts[m].x_orig);

    CollocationSystem sys;
    sys.r = r;
    sys.symmetry = sym;
    sys.y0 = y0;
    sys.M = M;
    sys.points = 2 * Q;
    sys.full = (1.0 / Q) * (C * P);
    const double sy0 = std::sqrt(y0);
    for (int k = 1; k <= M; ++k) sys.full(k - 1, k - 1) -= sy0 * bessel_k_imag_scaled(r, kTwoPi * k * y0);

    sys.matrix = sys.full.bottomRightCorner(M - 1, M - 1);
    sys.rhs = -sys.full.col(0).tail(M - 1);
    return sys;
}

Solution solve_coefficients(double r, Symmetry sym, double y0, int M, const CollocationOptions& opts)
{
    const CollocationSystem sys = build_collocation_system(r, sym, y0, M, opts);
    Solution sol;
    sol.coefficients.symmetry = sym;
    sol.coefficients.r = r;
    sol.coefficients.a.assign(M, 0.0);
    sol.coefficients.a[0] = 1.0;
    if (M == 1) return sol;

    // All M equations for the M - 1 unknowns a(2..M), solved in the least
    // squares sense: a square subsystem can turn singular close to an
    // eigenvalue, the full one only loses rank at genuine degeneracies.
    // Rows and columns for large n carry the tiny factor K(2 pi n y0) and are
    // equilibrated first.
    Eigen::MatrixXd A = sys.full.rightCols(M - 1);
    Eigen::VectorXd b = -sys.full.col(0);
    Eigen::VectorXd col_scale(A.cols());
    for (Eigen::Index j = 0; j < A.cols(); ++j) {
        const double s = A.col(j).cwiseAbs().maxCoeff();
        if (s == 0.0 || !std::isfinite(s)) throw SingularSystemError("collocation system has a zero column");
        col_scale(j) = s;
        A.col(j) /= s;
    }
    for (Eigen::Index i = 0; i < A.rows(); ++i) {
        const double s = A.row(i).cwiseAbs().maxCoeff();
        if (s == 0.0 || !std::isfinite(s)) throw SingularSystemError("collocation system has a zero row");
        A.row(i) /= s;
        b(i) /= s;
    }
    const Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    if (!(sv(sv.size() - 1) > 0.0)) throw SingularSystemError("collocation system is singular");
    sol.condition_estimate = sv(0) / sv(sv.size() - 1);
    if (sol.condition_estimate > 1e12) {
        std::ostringstream msg;
        msg << "collocation system at r = " << r << " has condition estimate " << sol.condition_estimate;
        warn(msg.str());
    }
    const Eigen::VectorXd x = svd.solve(b).cwiseQuotient(col_scale);
    for (int n = 2; n <= M; ++n) sol.coefficients.a[n - 1] = x(n - 2);
    for (double v : sol.coefficients.a)
        if (!std::isfinite(v)) throw SingularSystemError("collocation solve produced non-finite values");
    return sol;
}

std::vector<double> two_height_difference(double r, Symmetry sym, const ResidualOptions& opts)
{
    const int M = opts.M > 0 ? opts.M : truncation_for(r, std::min(opts.y1, opts.y2));
    const auto c1 = solve_coefficients(r, sym, opts.y1, M, opts.collocation).coefficients;
    const auto c2 = solve_coefficients(r, sym, opts.y2, M, opts.collocation).coefficients;
    const int last = std::min(M, opts.compare_terms + 1);
    std::vector<double> d;
    for (int n = 2; n <= last; ++n) d.push_back(c1.at(n) - c2.at(n));
    return d;
}

double consistency_residual(double r, Symmetry sym, const ResidualOptions& opts)
{
    double worst = 0.0;
    for (double v : two_height_difference(r, sym, opts)) worst = std::max(worst, std::abs(v));
    return worst;
}

FourierCoefficients extend_coefficients(const FourierCoefficients& c, int n_max)
{
    if (c.truncation() < 1 || c.a[0] != 1.0) throw DomainError("extend_coefficients: need a(1) = 1");
    FourierCoefficients out = c;
    out.a.resize(std::max(n_max, c.truncation()), 0.0);
    if (n_max < 2) return out;
    const double r = std::abs(c.r);

    // Blocks (hi/2, hi]: at height Y = (r + 3)/(2 pi hi) the argument 2 pi n Y
    // lies in the turning region where K~ is not small.
    for (int hi = n_max; hi >= 2;) {
        const int lo = std::max(2, hi / 2 + 1);
        const double y_base = (r + 3.0) / (kTwoPi * hi);
        std::vector<double> best(hi - lo + 1, 0.0), best_k(hi - lo + 1, 0.0);
        for (double y : {y_base, 0.91 * y_base}) {
            const int Q = hi + truncation_for(r, y) + 8;
            std::vector<double> fx(Q), xs(Q);
            for (int m = 0; m < Q; ++m) {
                xs[m] = (m + 0.5) / (2.0 * Q);
                const auto w = hypgeom::reduce_to_fundamental_domain({xs[m], y}).point;
                fx[m] = expansion_eval_scaled(c, w);
            }
            const double sy = std::sqrt(y);
            for (int n = lo; n <= hi; ++n) {
                const double k = sy * bessel_k_imag_scaled(r, kTwoPi * n * y);
                if (std::abs(k) <= std::abs(best_k[n - lo])) continue;
                double b = 0.0;
                for (int m = 0; m < Q; ++m) b += fx[m] * cs(c.symmetry, kTwoPi * n * xs[m]);
                b *= 2.0 / Q;
                best[n - lo] = b / k;
                best_k[n - lo] = k;
            }
        }
        for (int n = lo; n <= hi; ++n) out.a[n - 1] = best[n - lo];
        hi = lo - 1;
    }
    return out;
}

double hecke_residual_upto(const FourierCoefficients& c, int limit)
{
    double worst = 0.0;
    for (int m = 2; m <= limit; ++m)
        for (int n = m; m * n <= limit; ++n) {
            double rhs = 0.0;
            const int g = std::gcd(m, n);
            for (int d = 1; d <= g; ++d)
                if (g % d == 0) rhs += c.at(m * n / (d * d));
            worst = std::max(worst, std::abs(c.at(m) * c.at(n) - rhs));
        }
    return worst;
}

double refine_eigenvalue(double lo, double hi, Symmetry sym, const SearchOptions& opts)
{
    const auto dlo = two_height_difference(lo, sym, opts.residual);
    const auto dhi = two_height_difference(hi, sym, opts.residual);
    std::size_t k = 0;
    while (k < std::min(dlo.size(), dhi.size()) && dlo[k] * dhi[k] > 0.0) ++k;
    if (k >= std::min(dlo.size(), dhi.size()))
        throw ConvergenceError("refine_eigenvalue: no coefficient difference changes sign");

    std::uintmax_t iterations = 100;
    const double tol = std::min(opts.r_tol, 1e-10);
    const auto [x0, x1] = boost::math::tools::toms748_solve(
        [&](double r) { return difference_component(r, sym, opts.residual, int(k)); }, lo, hi, dlo[k],
        dhi[k], [tol](double u, double v) { return std::abs(u - v) < tol; }, iterations);
    if (iterations >= 100) throw IterationLimitError("refine_eigenvalue: no convergence");
    return 0.5 * (x0 + x1);
}

SpectralPoint make_spectral_point(double r, Symmetry sym, const SearchOptions& opts)
{
    const auto& ro = opts.residual;
    const int M = ro.M > 0 ? ro.M : truncation_for(r, std::min(ro.y1, ro.y2));
    SpectralPoint p;
    p.r = r;
    p.lambda = 0.25 + r * r;
    p.symmetry = sym;
    p.M = M;
    const auto base = solve_coefficients(r, sym, ro.y1, M, ro.collocation).coefficients;
    p.coefficients = extend_coefficients(base, std::max(opts.extended_terms, opts.hecke_limit));
    p.residual_two_height = consistency_residual(r, sym, ro);
    p.residual_hecke = hecke_residual_upto(p.coefficients, opts.hecke_limit);
    return p;
}

std::vector<SpectralPoint> eigenvalue_search(double r_lo, double r_hi, Symmetry sym, double grid_step,
                                             const SearchOptions& opts)
{
    if (!(r_lo > 0.0 && r_hi > r_lo)) throw DomainError("eigenvalue_search: need 0 < r_lo < r_hi");
    if (!(grid_step > 0.0 && grid_step <= 0.05))
        throw DomainError("eigenvalue_search: grid step must lie in (0, 0.05]");
    const auto& heights = opts.scan_heights;
    if (heights.size() < 2) throw DomainError("eigenvalue_search: need at least two scan heights");
    const double y_min = *std::min_element(heights.begin(), heights.end());

    std::vector<std::pair<int, int>> pairs;
    for (int i = 0; i < int(heights.size()); ++i)
        for (int j = i + 1; j < int(heights.size()); ++j) pairs.emplace_back(i, j);

    const int steps = int(std::ceil((r_hi - r_lo) / grid_step - 1e-9));
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> grid(steps + 1), R(steps + 1, inf);
    std::vector<std::vector<double>> pair_R(steps + 1, std::vector<double>(pairs.size(), inf));
    for (int i = 0; i <= steps; ++i) {
        grid[i] = std::min(r_hi, r_lo + i * grid_step);
        const int M = opts.residual.M > 0 ? opts.residual.M : truncation_for(grid[i], y_min);
        std::vector<FourierCoefficients> sols;
        try {
            for (double y : heights)
                sols.push_back(solve_coefficients(grid[i], sym, y, M, opts.residual.collocation).coefficients);
        } catch (const SingularSystemError&) {
            continue;
        }
        const int last = std::min(M, opts.residual.compare_terms + 1);
        for (std::size_t p = 0; p < pairs.size(); ++p) {
            double worst = 0.0;
            for (int n = 2; n <= last; ++n)
                worst = std::max(worst, std::abs(sols[pairs[p].first].at(n) - sols[pairs[p].second].at(n)));
            pair_R[i][p] = worst;
            R[i] = std::min(R[i], worst);
        }
    }

    std::vector<SpectralPoint> found;
    for (int i = 1; i < steps; ++i) {
        if (!(R[i] <= R[i - 1] && R[i] <= R[i + 1])) continue;
        std::vector<std::size_t> order(pairs.size());
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(), [&](auto x, auto y) { return pair_R[i][x] < pair_R[i][y]; });
        double root = std::numeric_limits<double>::quiet_NaN();
        for (std::size_t p : order) {
            SearchOptions local = opts;
            local.residual.y1 = heights[pairs[p].first];
            local.residual.y2 = heights[pairs[p].second];
            local.residual.M = opts.residual.M > 0 ? opts.residual.M : truncation_for(grid[i + 1], y_min);
            try {
                root = refine_eigenvalue(grid[i - 1], grid[i + 1], sym, local);
                break;
            } catch (const std::runtime_error&) {
            }
        }
        if (!(root >= r_lo && root <= r_hi)) continue;
        const bool duplicate = std::any_of(found.begin(), found.end(),
                                           [&](const SpectralPoint& p) { return std::abs(p.r - root) < 1e-6; });
        if (duplicate) continue;
        SpectralPoint p;
        try {
            p = make_spectral_point(root, sym, opts);
        } catch (const std::runtime_error&) {
            continue;
        }
        if (p.residual_two_height < opts.accept_residual && p.residual_hecke < opts.accept_hecke)
            found.push_back(std::move(p));
    }
    std::sort(found.begin(), found.end(), [](const auto& x, const auto& y) { return x.r < y.r; });
    return found;
}

}  // namespace hs::maass
