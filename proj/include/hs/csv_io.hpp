#pragma once

// Versioned CSV files: eigenvalue lists (with a sibling coefficient file),
// length spectra, winding tables and counting curves. Every file starts with
// a "# <kind> v<N>" line; readers reject other kinds and versions. Writes go
// to a temporary file that is renamed over the target.

#include "hs/maass.hpp"
#include "hs/scattering.hpp"
#include "hs/traceform.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace hs::csv {

namespace fs = std::filesystem;

/// "<dir>/<stem>.coeffs.csv" next to an eigenvalue file.
fs::path coeffs_path(const fs::path& eig_path);

/// Writes `contents` to `path` via a temporary file in the same directory.
void write_atomic(const fs::path& path, const std::string& contents);

/// 17 significant digits, so that values round-trip exactly.
std::string format_double(double v);

std::string eigen_table(const std::vector<maass::SpectralPoint>& points);
std::string coeffs_table(const std::vector<maass::SpectralPoint>& points);
/// Writes the eigenvalue file and its coefficient file.
void write_eigen(const fs::path& path, const std::vector<maass::SpectralPoint>& points);
/// Reads the eigenvalue file; coefficients are attached when the sibling
/// file exists (and must then cover every row).
std::vector<maass::SpectralPoint> read_eigen(const fs::path& path);

std::string length_table(const std::vector<traceform::LengthSpectrumEntry>& lengths);
void write_lengths(const fs::path& path, const std::vector<traceform::LengthSpectrumEntry>& lengths);
/// Entries are validated on reading.
std::vector<traceform::LengthSpectrumEntry> read_lengths(const fs::path& path);

std::string winding_table(const std::vector<scattering::WindingRecord>& rows);
void write_winding(const fs::path& path, const std::vector<scattering::WindingRecord>& rows);
std::vector<scattering::WindingRecord> read_winding(const fs::path& path);

std::string weyl_table(const traceform::CountingCurve& curve);
void write_weyl(const fs::path& path, const traceform::CountingCurve& curve);
traceform::CountingCurve read_weyl(const fs::path& path);

}  // namespace hs::csv
