#include "hs/cli.hpp"

#include "hs/config.hpp"
#include "hs/csv_io.hpp"
#include "hs/diagnostics.hpp"
#include "hs/errors.hpp"
#include "hs/hecke.hpp"
#include "hs/maass.hpp"
#include "hs/scattering.hpp"
#include "hs/traceform.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <memory>
#include <ostream>
#include <sstream>

namespace hs::cli {

namespace {

using csv::format_double;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Flag values collected as text so that config-file values can fill the gaps.
class Flags {
public:
    explicit Flags(CLI::App* app) : app_(app) {}

    template <class F>
    static auto checked(const std::string& name, F&& f)
    {
        try {
            return f();
        } catch (const DomainError& e) {
            throw UsageError("--" + name + ": " + e.what());
        }
    }

    Flags& add(const std::string& name, const std::string& help)
    {
        auto& slot = *text_.emplace(name, std::make_unique<std::string>()).first->second;
        opts_[name] = app_->add_option("--" + name, slot, help);
        return *this;
    }

    Flags& add_list(const std::string& name, const std::string& help)
    {
        auto& slot = *lists_.emplace(name, std::make_unique<std::vector<std::string>>()).first->second;
        opts_[name] = app_->add_option("--" + name, slot, help);
        return *this;
    }

    Flags& add_switch(const std::string& name, const std::string& help)
    {
        opts_[name] = app_->add_flag("--" + name, help);
        return *this;
    }

    void bind(const RunConfig* cfg) { cfg_ = cfg; }
    CLI::App* app() const { return app_; }

    std::optional<std::string> text(const std::string& name) const
    {
        if (opts_.at(name)->count() > 0) return *text_.at(name);
        if (cfg_ && cfg_->has(name)) return cfg_->get(name);
        return std::nullopt;
    }

    std::string required(const std::string& name) const
    {
        auto v = text(name);
        if (!v) throw UsageError("--" + name + " is required");
        return *v;
    }

    double real(const std::string& name) const { return checked(name, [&] { return parse_real(required(name)); }); }
    double real(const std::string& name, double fallback) const
    {
        auto v = text(name);
        return v ? checked(name, [&] { return parse_real(*v); }) : fallback;
    }
    int integer(const std::string& name, int fallback) const
    {
        auto v = text(name);
        return v ? checked(name, [&] { return parse_integer(*v); }) : fallback;
    }

    std::vector<std::string> list(const std::string& name) const
    {
        if (opts_.at(name)->count() > 0) return *lists_.at(name);
        std::vector<std::string> out;
        if (cfg_ && cfg_->has(name)) {
            std::istringstream in(*cfg_->get(name));
            for (std::string item; in >> item;) out.push_back(item);
        }
        return out;
    }

    bool on(const std::string& name) const
    {
        if (opts_.at(name)->count() > 0) return true;
        if (cfg_ && cfg_->has(name)) {
            const auto v = *cfg_->get(name);
            if (v == "true" || v == "1" || v == "yes") return true;
            if (v == "false" || v == "0" || v == "no") return false;
            throw UsageError("--" + name + " expects true or false, got '" + v + "'");
        }
        return false;
    }

private:
    CLI::App* app_;
    const RunConfig* cfg_ = nullptr;
    std::map<std::string, std::unique_ptr<std::string>> text_;
    std::map<std::string, std::unique_ptr<std::vector<std::string>>> lists_;
    std::map<std::string, CLI::Option*> opts_;
};

Complex parse_complex(const std::string& text, const std::string& flag)
{
    const auto comma = text.find(',');
    try {
        if (comma == std::string::npos) return {parse_real(text), 0.0};
        return {parse_real(text.substr(0, comma)), parse_real(text.substr(comma + 1))};
    } catch (const DomainError&) {
        throw UsageError("--" + flag + " expects RE,IM, got '" + text + "'");
    }
}

std::string format_complex(Complex z)
{
    if (z.imag() == 0.0) return format_double(z.real());
    return format_double(z.real()) + "," + format_double(z.imag());
}

std::string short_number(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.15g", v);
    return buf;
}

void require_positive(double v, const std::string& name)
{
    if (!(v > 0.0)) throw UsageError("--" + name + " must be positive");
}

// Writes to --out when given, otherwise to the output stream.
void emit(const Flags& f, std::ostream& out, const std::string& table)
{
    if (auto path = f.text("out"))
        csv::write_atomic(*path, table);
    else
        out << table;
}

std::vector<maass::SpectralPoint> load_eigen_files(const std::vector<std::string>& paths)
{
    std::vector<maass::SpectralPoint> all;
    for (const auto& p : paths) {
        auto pts = csv::read_eigen(p);
        all.insert(all.end(), pts.begin(), pts.end());
    }
    return all;
}

const maass::SpectralPoint& pick(const std::vector<maass::SpectralPoint>& pts, int index)
{
    if (index < 0 || index >= int(pts.size()))
        throw UsageError("--index " + std::to_string(index) + " out of range (" + std::to_string(pts.size()) +
                         " forms)");
    if (pts[std::size_t(index)].coefficients.a.empty())
        throw UsageError("form " + std::to_string(index) + " has no coefficient file");
    return pts[std::size_t(index)];
}

int cmd_maass_find(const Flags& f, std::ostream& out)
{
    const auto sym = maass::parse_symmetry(f.required("symmetry"));
    const double lo = f.real("r-min"), hi = f.real("r-max");
    if (!(lo >= 0.0 && hi > lo)) throw UsageError("need 0 <= r-min < r-max");
    const double step = f.real("step", 0.02);
    if (!(step > 0.0 && step <= 0.05)) throw UsageError("--step must lie in (0, 0.05]");
    maass::SearchOptions opts;
    opts.residual.y1 = f.real("y1", opts.residual.y1);
    opts.residual.y2 = f.real("y2", opts.residual.y2);
    opts.accept_residual = f.real("accept-residual", opts.accept_residual);
    opts.accept_hecke = f.real("accept-hecke", opts.accept_hecke);
    opts.extended_terms = f.integer("terms", opts.extended_terms);
    require_positive(opts.accept_residual, "accept-residual");
    require_positive(opts.accept_hecke, "accept-hecke");
    if (opts.extended_terms < 2) throw UsageError("--terms must be at least 2");

    const auto points = maass::eigenvalue_search(lo, hi, sym, step, opts);
    if (auto path = f.text("out")) {
        csv::write_eigen(*path, points);
        for (const auto& p : points) out << "r = " << format_double(p.r) << '\n';
    } else {
        out << csv::eigen_table(points);
    }
    return points.empty() ? kNoCandidates : kSuccess;
}

int cmd_maass_eval(const Flags& f, std::ostream& out)
{
    const auto pts = csv::read_eigen(f.required("input"));
    const auto& p = pick(pts, f.integer("index", 0));
    const double x = f.real("x"), y = f.real("y");
    require_positive(y, "y");
    // the stored expansion is accurate only in the fundamental domain
    const auto z = hypgeom::reduce_to_fundamental_domain({x, y}).point;
    out << format_double(maass::expansion_eval(p.coefficients, z)) << '\n';
    return kSuccess;
}

int cmd_hecke_check(const Flags& f, std::ostream& out)
{
    const auto pts = csv::read_eigen(f.required("input"));
    const int limit = f.integer("limit", 30);
    if (limit < 1) throw UsageError("--limit must be positive");
    std::ostringstream t;
    t << "r,symmetry,limit,residual\n";
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const auto& p = pick(pts, int(i));
        if (p.coefficients.truncation() < limit)
            throw UsageError("form " + std::to_string(i) + " has only " +
                             std::to_string(p.coefficients.truncation()) + " coefficients");
        t << format_double(p.r) << ',' << maass::to_string(p.symmetry) << ',' << limit << ','
          << format_double(maass::hecke_residual_upto(p.coefficients, limit)) << '\n';
    }
    emit(f, out, t.str());
    return kSuccess;
}

int cmd_lfunc_eval(const Flags& f, std::ostream& out)
{
    const auto pts = csv::read_eigen(f.required("input"));
    const auto& p = pick(pts, f.integer("index", 0));
    if (p.symmetry != maass::Symmetry::even) throw UsageError("the completed L-function needs an even form");
    auto values = f.list("s");
    if (values.empty()) throw UsageError("--s is required");
    std::ostringstream t;
    t << "# hs-lval v1\ns_re,s_im,lambda_re,lambda_im\n";
    for (const auto& text : values) {
        const Complex s = parse_complex(text, "s");
        const Complex v = hecke::lambda_completed(s, p);
        t << format_double(s.real()) << ',' << format_double(s.imag()) << ',' << format_double(v.real()) << ','
          << format_double(v.imag()) << '\n';
    }
    emit(f, out, t.str());
    return kSuccess;
}

int cmd_scattering_phi(const Flags& f, std::ostream& out)
{
    const Complex s = parse_complex(f.required("s"), "s");
    const Complex phi = (s == Complex(0.5, 0.0)) ? Complex(scattering::phi_at_half(), 0.0) : scattering::phi_gamma1(s);
    if (phi.imag() == 0.0 || s.imag() == 0.0)
        out << short_number(phi.real()) << '\n';
    else
        out << short_number(phi.real()) << ',' << short_number(phi.imag()) << '\n';
    if (f.on("log-derivative")) out << format_complex(scattering::scattering_value(s).log_deriv) << '\n';
    return kSuccess;
}

int cmd_scattering_winding(const Flags& f, std::ostream& out)
{
    const double lmax = f.real("lambda-max");
    const double step = f.real("step", 1.0);
    if (!(lmax >= 0.0)) throw UsageError("--lambda-max must be non-negative");
    require_positive(step, "step");
    scattering::WindingOptions opts;
    opts.panel_width = f.real("panel-width", opts.panel_width);
    require_positive(opts.panel_width, "panel-width");

    std::vector<double> grid;
    const long n = long(std::floor(lmax / step + 1e-9));
    for (long k = 0; k <= n; ++k) grid.push_back(k * step);
    if (lmax - grid.back() > 1e-9 * std::max(1.0, lmax)) grid.push_back(lmax);
    emit(f, out, csv::winding_table(scattering::winding_curve(grid, opts)));
    return kSuccess;
}

int cmd_eisenstein(const Flags& f, std::ostream& out)
{
    const double y = f.real("y");
    require_positive(y, "y");
    const Complex s = parse_complex(f.text("s").value_or("2,0"), "s");
    const int cutoff = f.integer("cutoff", 150);
    const int points = f.integer("points", 32);
    const auto ct = scattering::eisenstein_constant_term(y, s, cutoff, points);
    const Complex expected = std::pow(y, s) + scattering::phi_gamma1(s) * std::pow(y, 1.0 - s);
    out << "value = " << format_complex(ct.value) << '\n'
        << "expected = " << format_complex(expected) << '\n'
        << "difference = " << format_double(std::abs(ct.value - expected)) << '\n'
        << "tail_estimate = " << format_double(ct.tail_estimate) << '\n'
        << "quadrature_error = " << format_double(ct.quadrature_error) << '\n';
    return kSuccess;
}

double area_flag(const Flags& f)
{
    if (f.text("area")) {
        const double a = f.real("area");
        require_positive(a, "area");
        return a;
    }
    return traceform::area_fundamental_domain();
}

int cmd_trace_terms(const Flags& f, std::ostream& out)
{
    const double eps = f.real("epsilon", 1.0);
    require_positive(eps, "epsilon");
    const double t = f.real("t", 0.0);
    const int m = f.integer("cusps", 1);
    if (m < 1) throw UsageError("--cusps must be positive");
    const double area = area_flag(f);
    const auto base = traceform::make_bump_pair(eps);
    const auto pair = (t == 0.0) ? base : traceform::shifted_pair(base, t);
    const auto cusp = traceform::cusp_term_parts(pair, m, scattering::phi_at_half());
    out << "area = " << format_double(area) << '\n'
        << "plancherel = " << format_double(traceform::plancherel_term(pair, area)) << '\n'
        << "cusp_scattering = " << format_double(cusp.scattering) << '\n'
        << "cusp_phi_half = " << format_double(cusp.phi_half) << '\n'
        << "cusp_digamma = " << format_double(cusp.digamma) << '\n'
        << "cusp_constant = " << format_double(cusp.constant) << '\n'
        << "cusp_total = " << format_double(cusp.total()) << '\n';
    return kSuccess;
}

int cmd_trace_check(const Flags& f, std::ostream& out)
{
    const auto pts = csv::read_eigen(f.required("spectrum"));
    const auto lengths = csv::read_lengths(f.required("lengths"));
    const double eps = f.real("epsilon", 1.0);
    require_positive(eps, "epsilon");
    std::vector<double> rs;
    for (const auto& p : pts) rs.push_back(p.r);
    const auto pair = traceform::make_bump_pair(eps);
    out << "spectral = " << format_double(traceform::spectral_side(pair, rs, false)) << '\n'
        << "geometric = " << format_double(traceform::geometric_side(pair, lengths)) << '\n';
    if (f.text("area")) {
        const double area = f.real("area");
        require_positive(area, "area");
        out << "plancherel = " << format_double(traceform::plancherel_term(pair, area)) << '\n'
            << "residual = " << format_double(traceform::trace_residual(pair, rs, lengths, area)) << '\n';
    } else {
        out << "synthetic_area = " << format_double(traceform::synthetic_area(pair, rs, lengths)) << '\n';
    }
    return kSuccess;
}

int cmd_weyl_curve(const Flags& f, std::ostream& out)
{
    const auto pts = load_eigen_files(f.list("eigen"));
    auto winding = csv::read_winding(f.required("winding"));
    const double area = area_flag(f);
    const int m = f.integer("cusps", 1);
    if (m < 1) throw UsageError("--cusps must be positive");

    const double lo = f.real("lambda-min", -INFINITY), hi = f.real("lambda-max", INFINITY);
    std::vector<scattering::WindingRecord> rows;
    for (const auto& w : winding)
        if (w.lambda >= lo - 1e-9 && w.lambda <= hi + 1e-9) rows.push_back(w);
    if (rows.empty()) throw UsageError("no winding rows in the requested range");
    if (f.text("step")) {
        const double step = f.real("step");
        require_positive(step, "step");
        const double start = std::isfinite(lo) ? lo : rows.front().lambda;
        for (std::size_t k = 0; k < rows.size(); ++k) {
            const double want = start + double(k) * step;
            if (std::abs(rows[k].lambda - want) > 1e-9 * std::max(1.0, want))
                throw UsageError("winding grid does not match the requested grid at lambda = " +
                                 format_double(want));
        }
        if (std::isfinite(hi) && hi - rows.back().lambda > step * (1.0 - 1e-9))
            throw UsageError("winding file ends before --lambda-max");
    }

    std::vector<double> rs;
    for (const auto& p : pts) rs.push_back(p.r);
    std::sort(rs.begin(), rs.end());
    const auto curve = traceform::weyl_counting_curve(rs, rows, area, m, f.on("include-constant"));
    emit(f, out, csv::weyl_table(curve));
    return kSuccess;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Spectral computations for Maass forms and the Selberg trace formula on SL(2,Z)", "hs"};
    app.require_subcommand(1);
    app.fallthrough();
    std::string config_path;
    app.add_option("--config", config_path, "flat key = value file; flags override it");

    std::vector<std::pair<std::unique_ptr<Flags>, std::function<int(const Flags&, std::ostream&)>>> commands;
    auto command = [&](CLI::App* parent, const std::string& name, const std::string& help,
                       std::function<int(const Flags&, std::ostream&)> fn) -> Flags& {
        auto* sub = parent->add_subcommand(name, help);
        sub->fallthrough();
        commands.emplace_back(std::make_unique<Flags>(sub), std::move(fn));
        return *commands.back().first;
    };

    auto* maass_cmd = app.add_subcommand("maass", "cusp-form eigenvalues and expansions");
    maass_cmd->require_subcommand(1);
    maass_cmd->fallthrough();
    command(maass_cmd, "find", "search an interval of r for cusp forms", cmd_maass_find)
        .add("symmetry", "even or odd")
        .add("r-min", "lower end of the interval")
        .add("r-max", "upper end of the interval")
        .add("step", "scan step (default 0.02)")
        .add("y1", "first collocation height (default 0.55)")
        .add("y2", "second collocation height (default 0.50)")
        .add("accept-residual", "two-height residual threshold (default 1e-6)")
        .add("accept-hecke", "Hecke residual threshold (default 1e-5)")
        .add("terms", "coefficients to store per form (default 30)")
        .add("out", "eigenvalue CSV; coefficients go to <stem>.coeffs.csv");
    command(maass_cmd, "eval", "evaluate a stored form at x + iy", cmd_maass_eval)
        .add("input", "eigenvalue CSV")
        .add("index", "row of the form (default 0)")
        .add("x", "real part")
        .add("y", "imaginary part");

    auto* hecke_cmd = app.add_subcommand("hecke", "Hecke relations");
    hecke_cmd->require_subcommand(1);
    hecke_cmd->fallthrough();
    command(hecke_cmd, "check", "max Hecke relation residual over mn <= limit", cmd_hecke_check)
        .add("input", "eigenvalue CSV")
        .add("limit", "bound on mn (default 30)")
        .add("out", "output CSV");

    auto* lfunc_cmd = app.add_subcommand("lfunc", "completed L-functions");
    lfunc_cmd->require_subcommand(1);
    lfunc_cmd->fallthrough();
    command(lfunc_cmd, "eval", "Lambda(s, f) for an even form", cmd_lfunc_eval)
        .add("input", "eigenvalue CSV")
        .add("index", "row of the form (default 0)")
        .add_list("s", "points RE,IM (repeatable)")
        .add("out", "output CSV");

    auto* scat_cmd = app.add_subcommand("scattering", "scattering determinant and winding number");
    scat_cmd->require_subcommand(1);
    scat_cmd->fallthrough();
    command(scat_cmd, "phi", "print phi(s)", cmd_scattering_phi)
        .add("s", "point RE,IM")
        .add_switch("log-derivative", "also print phi'/phi(s)");
    command(scat_cmd, "winding", "tabulate M(lambda) on 0, step, ..., lambda-max", cmd_scattering_winding)
        .add("lambda-max", "end of the grid")
        .add("step", "grid step (default 1)")
        .add("panel-width", "quadrature panel width (default 0.5)")
        .add("out", "winding CSV");

    auto* eis_cmd = app.add_subcommand("eisenstein", "Eisenstein series");
    eis_cmd->require_subcommand(1);
    eis_cmd->fallthrough();
    command(eis_cmd, "constant-term", "int_0^1 E(x + iy, s) dx against y^s + phi(s) y^{1-s}", cmd_eisenstein)
        .add("y", "height")
        .add("s", "point RE,IM with RE > 1 (default 2,0)")
        .add("cutoff", "lattice cutoff (default 150)")
        .add("points", "trapezoid nodes (default 32)");

    auto* trace_cmd = app.add_subcommand("trace", "trace formula terms");
    trace_cmd->require_subcommand(1);
    trace_cmd->fallthrough();
    command(trace_cmd, "terms", "identity and cusp terms for a bump test function", cmd_trace_terms)
        .add("epsilon", "support radius of g (default 1)")
        .add("t", "shift of h (default 0)")
        .add("cusps", "number of cusps (default 1)")
        .add("area", "area of the quotient (default: computed)");
    command(trace_cmd, "check", "torsion-free identity on user data", cmd_trace_check)
        .add("spectrum", "eigenvalue CSV")
        .add("lengths", "length-spectrum CSV")
        .add("epsilon", "support radius of g (default 1)")
        .add("area", "area; without it the balancing area is printed");

    auto* weyl_cmd = app.add_subcommand("weyl", "eigenvalue counting");
    weyl_cmd->require_subcommand(1);
    weyl_cmd->fallthrough();
    command(weyl_cmd, "curve", "counting curve and its linear remainder fit", cmd_weyl_curve)
        .add_list("eigen", "eigenvalue CSV (repeatable)")
        .add("winding", "winding CSV")
        .add("lambda-min", "first grid point used")
        .add("lambda-max", "last grid point used")
        .add("step", "expected grid step; a mismatch is an error")
        .add("area", "area of the quotient (default: computed)")
        .add("cusps", "number of cusps (default 1)")
        .add_switch("include-constant", "count the constant eigenfunction")
        .add("out", "counting-curve CSV");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        for (const auto& [flags, fn] : commands)
            if (flags->app()->parsed()) {
                out << flags->app()->help();
                return kSuccess;
            }
        out << app.help();
        return kSuccess;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        const CLI::App* deepest = &app;
        for (const auto& [flags, fn] : commands)
            if (flags->app()->parsed()) deepest = flags->app();
        err << deepest->help();
        return kInvalid;
    }

    for (const auto& [flags, fn] : commands) {
        if (!flags->app()->parsed()) continue;
        try {
            RunConfig cfg;
            if (!config_path.empty()) cfg = RunConfig::load(config_path);
            flags->bind(&cfg);
            return fn(*flags, out);
        } catch (const UsageError& e) {
            err << "error: " << e.what() << '\n' << flags->app()->help();
            return kInvalid;
        } catch (const std::exception& e) {
            err << "error: " << e.what() << '\n';
            return kInvalid;
        }
    }
    err << app.help();
    return kInvalid;
}

}  // namespace hs::cli
