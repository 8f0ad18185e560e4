#include "hs/csv_io.hpp"

#include "hs/errors.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

namespace hs::csv {

namespace {

constexpr const char* kEigTag = "# hs-eig v1";
constexpr const char* kEigHeader = "r,lambda,symmetry,M,residual_two_height,residual_hecke";
constexpr const char* kCoeffTag = "# hs-eig-coeffs v1";
constexpr const char* kCoeffHeader = "form,n,a_n";
constexpr const char* kLenTag = "# hs-len v1";
constexpr const char* kLenHeader = "ell,ell0,mult";
constexpr const char* kWindTag = "# hs-wind v1";
constexpr const char* kWindHeader = "lambda,M,err";
constexpr const char* kWeylTag = "# hs-weyl v1";
constexpr const char* kWeylHeader = "lambda,N,M,main,D,fit_c,fit_residual";

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& line)
{
    std::vector<std::string> out;
    std::string cell;
    std::istringstream in(line);
    while (std::getline(in, cell, ',')) out.push_back(trim(cell));
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

struct Table {
    std::vector<std::vector<std::string>> rows;
    std::vector<int> line_numbers;
};

Table read_table(const fs::path& path, const std::string& tag, const std::string& header)
{
    std::ifstream in(path);
    if (!in) throw FormatError("cannot open " + path.string());
    std::string line;
    if (!std::getline(in, line)) throw FormatError(path.string() + ": empty file");
    const std::string first = trim(line);
    if (first != tag) {
        if (first.rfind("# ", 0) == 0)
            throw FormatError(path.string() + ": expected '" + tag + "', found '" + first + "'");
        throw FormatError(path.string() + ": missing version line '" + tag + "'");
    }
    if (!std::getline(in, line) || trim(line) != header)
        throw FormatError(path.string() + ": expected header '" + header + "'");
    const std::size_t columns = split(header).size();
    Table t;
    int number = 2;
    while (std::getline(in, line)) {
        ++number;
        const std::string s = trim(line);
        if (s.empty() || s[0] == '#') continue;
        auto cells = split(s);
        if (cells.size() != columns) {
            std::ostringstream msg;
            msg << path.string() << ":" << number << ": expected " << columns << " fields, got " << cells.size();
            throw FormatError(msg.str());
        }
        t.rows.push_back(std::move(cells));
        t.line_numbers.push_back(number);
    }
    return t;
}

double to_double(const std::string& s, const fs::path& path, int line)
{
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
        std::ostringstream msg;
        msg << path.string() << ":" << line << ": not a number: '" << s << "'";
        throw FormatError(msg.str());
    }
    return v;
}

int to_int(const std::string& s, const fs::path& path, int line)
{
    int v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
        std::ostringstream msg;
        msg << path.string() << ":" << line << ": not an integer: '" << s << "'";
        throw FormatError(msg.str());
    }
    return v;
}

}  // namespace

fs::path coeffs_path(const fs::path& eig_path)
{
    auto p = eig_path;
    return p.replace_filename(eig_path.stem().string() + ".coeffs.csv");
}

void write_atomic(const fs::path& path, const std::string& contents)
{
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw FormatError("cannot write " + tmp.string());
        out << contents;
        out.flush();
        if (!out) throw FormatError("write failed: " + tmp.string());
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) {
        fs::remove(tmp);
        throw FormatError("cannot replace " + path.string() + ": " + ec.message());
    }
}

std::string format_double(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string eigen_table(const std::vector<maass::SpectralPoint>& points)
{
    std::ostringstream out;
    out << kEigTag << '\n' << kEigHeader << '\n';
    for (const auto& p : points)
        out << format_double(p.r) << ',' << format_double(p.lambda) << ',' << maass::to_string(p.symmetry) << ','
            << p.M << ',' << format_double(p.residual_two_height) << ',' << format_double(p.residual_hecke) << '\n';
    return out.str();
}

std::string coeffs_table(const std::vector<maass::SpectralPoint>& points)
{
    std::ostringstream out;
    out << kCoeffTag << '\n' << kCoeffHeader << '\n';
    for (std::size_t i = 0; i < points.size(); ++i) {
        const auto& a = points[i].coefficients.a;
        for (std::size_t n = 0; n < a.size(); ++n) out << i << ',' << n + 1 << ',' << format_double(a[n]) << '\n';
    }
    return out.str();
}

void write_eigen(const fs::path& path, const std::vector<maass::SpectralPoint>& points)
{
    write_atomic(coeffs_path(path), coeffs_table(points));
    write_atomic(path, eigen_table(points));
}

std::vector<maass::SpectralPoint> read_eigen(const fs::path& path)
{
    const auto t = read_table(path, kEigTag, kEigHeader);
    std::vector<maass::SpectralPoint> points;
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
        const auto& c = t.rows[i];
        const int ln = t.line_numbers[i];
        maass::SpectralPoint p;
        p.r = to_double(c[0], path, ln);
        p.lambda = to_double(c[1], path, ln);
        try {
            p.symmetry = maass::parse_symmetry(c[2]);
        } catch (const DomainError&) {
            throw FormatError(path.string() + ":" + std::to_string(ln) + ": unknown symmetry '" + c[2] + "'");
        }
        p.M = to_int(c[3], path, ln);
        p.residual_two_height = to_double(c[4], path, ln);
        p.residual_hecke = to_double(c[5], path, ln);
        if (!(p.r >= 0.0) || std::abs(p.lambda - (0.25 + p.r * p.r)) > 1e-9 * p.lambda)
            throw FormatError(path.string() + ":" + std::to_string(ln) + ": lambda != 1/4 + r^2");
        p.coefficients.symmetry = p.symmetry;
        p.coefficients.r = p.r;
        points.push_back(std::move(p));
    }

    const auto cpath = coeffs_path(path);
    if (!fs::exists(cpath)) return points;
    const auto ct = read_table(cpath, kCoeffTag, kCoeffHeader);
    std::map<int, std::map<int, double>> by_form;
    for (std::size_t i = 0; i < ct.rows.size(); ++i) {
        const int ln = ct.line_numbers[i];
        const int form = to_int(ct.rows[i][0], cpath, ln), n = to_int(ct.rows[i][1], cpath, ln);
        if (form < 0 || form >= int(points.size()) || n < 1)
            throw FormatError(cpath.string() + ":" + std::to_string(ln) + ": index out of range");
        by_form[form][n] = to_double(ct.rows[i][2], cpath, ln);
    }
    for (std::size_t f = 0; f < points.size(); ++f) {
        const auto& m = by_form[int(f)];
        auto& a = points[f].coefficients.a;
        for (const auto& [n, v] : m) {
            if (n != int(a.size()) + 1)
                throw FormatError(cpath.string() + ": coefficients of form " + std::to_string(f) + " are not 1..N");
            a.push_back(v);
        }
        if (a.empty()) throw FormatError(cpath.string() + ": no coefficients for form " + std::to_string(f));
    }
    return points;
}

std::string length_table(const std::vector<traceform::LengthSpectrumEntry>& lengths)
{
    std::ostringstream out;
    out << kLenTag << '\n' << kLenHeader << '\n';
    for (const auto& e : lengths) out << format_double(e.ell) << ',' << format_double(e.ell0) << ',' << e.mult << '\n';
    return out.str();
}

void write_lengths(const fs::path& path, const std::vector<traceform::LengthSpectrumEntry>& lengths)
{
    write_atomic(path, length_table(lengths));
}

std::vector<traceform::LengthSpectrumEntry> read_lengths(const fs::path& path)
{
    const auto t = read_table(path, kLenTag, kLenHeader);
    std::vector<traceform::LengthSpectrumEntry> out;
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
        const int ln = t.line_numbers[i];
        traceform::LengthSpectrumEntry e{to_double(t.rows[i][0], path, ln), to_double(t.rows[i][1], path, ln),
                                         to_int(t.rows[i][2], path, ln)};
        try {
            e.validate();
        } catch (const DomainError& err) {
            throw FormatError(path.string() + ":" + std::to_string(ln) + ": " + err.what());
        }
        out.push_back(e);
    }
    return out;
}

std::string winding_table(const std::vector<scattering::WindingRecord>& rows)
{
    std::ostringstream out;
    out << kWindTag << '\n' << kWindHeader << '\n';
    for (const auto& w : rows)
        out << format_double(w.lambda) << ',' << format_double(w.M) << ',' << format_double(w.quadrature_error) << '\n';
    return out.str();
}

void write_winding(const fs::path& path, const std::vector<scattering::WindingRecord>& rows)
{
    write_atomic(path, winding_table(rows));
}

std::vector<scattering::WindingRecord> read_winding(const fs::path& path)
{
    const auto t = read_table(path, kWindTag, kWindHeader);
    std::vector<scattering::WindingRecord> out;
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
        const int ln = t.line_numbers[i];
        out.push_back({to_double(t.rows[i][0], path, ln), to_double(t.rows[i][1], path, ln),
                       to_double(t.rows[i][2], path, ln)});
    }
    return out;
}

std::string weyl_table(const traceform::CountingCurve& c)
{
    std::ostringstream out;
    out << kWeylTag << '\n' << kWeylHeader << '\n';
    for (std::size_t i = 0; i < c.grid.size(); ++i)
        out << format_double(c.grid[i]) << ',' << c.N[i] << ',' << format_double(c.M[i]) << ','
            << format_double(c.main[i]) << ',' << format_double(c.D[i]) << ',' << format_double(c.fit_c) << ','
            << format_double(c.fit_residual) << '\n';
    return out.str();
}

void write_weyl(const fs::path& path, const traceform::CountingCurve& curve) { write_atomic(path, weyl_table(curve)); }

traceform::CountingCurve read_weyl(const fs::path& path)
{
    const auto t = read_table(path, kWeylTag, kWeylHeader);
    traceform::CountingCurve c;
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
        const auto& r = t.rows[i];
        const int ln = t.line_numbers[i];
        c.grid.push_back(to_double(r[0], path, ln));
        c.N.push_back(to_int(r[1], path, ln));
        c.M.push_back(to_double(r[2], path, ln));
        c.main.push_back(to_double(r[3], path, ln));
        c.D.push_back(to_double(r[4], path, ln));
        c.fit_c = to_double(r[5], path, ln);
        c.fit_residual = to_double(r[6], path, ln);
    }
    return c;
}

}  // namespace hs::csv
