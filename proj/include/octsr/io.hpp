#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "octsr/forward.hpp"
#include "octsr/grids.hpp"

namespace octsr {

inline constexpr int manifest_schema_version = 1;
inline constexpr const char* octsr_version = "1.0.0";

enum class SpectraEncoding { ascii_csv, binary_f64le };

const char* to_string(SpectraEncoding e);
SpectraEncoding spectra_encoding_from_string(const std::string& name);

struct LoadedSpectra {
  std::vector<Interferogram> interferograms;
  std::optional<EmissionSpectrum> reference;
  WavenumberGrid k_grid;
  SpectraEncoding encoding = SpectraEncoding::binary_f64le;
};

/// A-line spectra container.  Two encodings:
///  - ascii-csv: a fixed header row, a header-value row, then one row of
///    m_count values per A-line (reference spectrum first when flagged);
///  - binary: magic "OCTSPEC1", u32 m_count, u32 a_line_count,
///    f64 lambda_min_nm, f64 lambda_max_nm, u8 reference flag, then the
///    payload as little-endian float64 rows.
/// Wavelengths are carried in nm in the headers; everything internal is
/// meters.  Parse errors name the offending line or byte counts.
LoadedSpectra load_spectra(const std::filesystem::path& path);

void save_spectra(const std::filesystem::path& path,
                  std::span<const Interferogram> a_lines,
                  const EmissionSpectrum* reference, SpectraEncoding encoding);

/// CSV table with an embedded `# octsr-manifest: {...}` comment line before
/// the header row; numbers are shortest-round-trip formatted.  Writes are
/// atomic (temp file + rename).
void write_csv(const std::filesystem::path& path,
               const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows,
               const nlohmann::json* manifest = nullptr);

nlohmann::json make_manifest(const std::string& command, const nlohmann::json& config,
                             std::uint64_t seed, const std::vector<std::string>& argv,
                             const std::vector<std::string>& outputs);

void write_manifest(const std::filesystem::path& path, const nlohmann::json& manifest);

}  // namespace octsr
