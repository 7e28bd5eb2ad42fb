#include "octsr/io.hpp"

#include <cstring>
#include <fstream>
#include <sstream>

#include "octsr/units.hpp"

namespace octsr {
namespace {

constexpr char binary_magic[8] = {'O', 'C', 'T', 'S', 'P', 'E', 'C', '1'};
constexpr const char* csv_header_row =
    "m_count,lambda_min_nm,lambda_max_nm,a_line_count,encoding,reference_row";

void atomic_write(const std::filesystem::path& path, const std::string& payload,
                  bool binary) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, binary ? std::ios::binary : std::ios::out);
    if (!out) throw std::runtime_error("cannot open '" + tmp.string() + "' for writing");
    out.write(payload.data(), static_cast<std::streamsize>(payload.size()));
    if (!out) throw std::runtime_error("short write to '" + tmp.string() + "'");
  }
  std::filesystem::rename(tmp, path);
}

std::vector<double> split_doubles(const std::string& line, int line_number) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos <= line.size()) {
    std::size_t comma = line.find(',', pos);
    if (comma == std::string::npos) comma = line.size();
    const std::string cell = line.substr(pos, comma - pos);
    try {
      std::size_t used = 0;
      const double v = std::stod(cell, &used);
      if (used != cell.size()) throw std::invalid_argument(cell);
      out.push_back(v);
    } catch (const std::exception&) {
      throw std::invalid_argument("line " + std::to_string(line_number) +
                                  ": cannot parse value '" + cell + "'");
    }
    pos = comma + 1;
    if (comma == line.size()) break;
  }
  return out;
}

LoadedSpectra load_csv(std::ifstream& in, const std::filesystem::path& path) {
  std::string line;
  int line_number = 0;
  auto next_line = [&]() {
    while (std::getline(in, line)) {
      ++line_number;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (!line.empty() && line[0] != '#') return true;
    }
    return false;
  };

  if (!next_line() || line != csv_header_row)
    throw std::invalid_argument(path.string() + ": line 1: expected header '" +
                                csv_header_row + "'");
  if (!next_line())
    throw std::invalid_argument(path.string() + ": missing header-value row");

  std::vector<std::string> cells;
  {
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
  }
  if (cells.size() != 6)
    throw std::invalid_argument(path.string() + ": line " + std::to_string(line_number) +
                                ": expected 6 header values, got " +
                                std::to_string(cells.size()));

  const int m_count = std::stoi(cells[0]);
  const double lambda_min_nm = std::stod(cells[1]);
  const double lambda_max_nm = std::stod(cells[2]);
  const int a_line_count = std::stoi(cells[3]);
  if (cells[4] != "ascii-csv")
    throw std::invalid_argument(path.string() + ": unsupported encoding '" + cells[4] + "'");
  const bool has_reference = cells[5] == "1" || cells[5] == "true";
  if (m_count < 2 || a_line_count < 0)
    throw std::invalid_argument(path.string() + ": invalid header counts");

  LoadedSpectra out;
  out.encoding = SpectraEncoding::ascii_csv;
  out.k_grid = wavenumber_grid_from_wavelengths(lambda_min_nm * 1e-9,
                                                lambda_max_nm * 1e-9, m_count);

  auto read_row = [&](const char* what) {
    if (!next_line())
      throw std::invalid_argument(path.string() + ": unexpected end of file, missing " +
                                  what);
    std::vector<double> values = split_doubles(line, line_number);
    if (static_cast<int>(values.size()) != m_count)
      throw std::invalid_argument(path.string() + ": line " + std::to_string(line_number) +
                                  ": expected " + std::to_string(m_count) +
                                  " values, got " + std::to_string(values.size()));
    Eigen::VectorXd v = Eigen::Map<Eigen::VectorXd>(values.data(), m_count);
    if (!v.allFinite())
      throw std::invalid_argument(path.string() + ": line " + std::to_string(line_number) +
                                  ": non-finite value");
    return v;
  };

  if (has_reference) {
    EmissionSpectrum ref;
    ref.values = read_row("reference spectrum row");
    ref.k_grid = out.k_grid;
    out.reference = std::move(ref);
  }
  for (int j = 0; j < a_line_count; ++j) {
    Interferogram ig;
    ig.values = read_row("A-line row");
    ig.k_grid = out.k_grid;
    ig.provenance = Provenance::file;
    out.interferograms.push_back(std::move(ig));
  }
  return out;
}

LoadedSpectra load_binary(std::ifstream& in, const std::filesystem::path& path) {
  in.seekg(0, std::ios::end);
  const std::uint64_t file_size = static_cast<std::uint64_t>(in.tellg());
  in.seekg(0);

  constexpr std::uint64_t header_size = 8 + 4 + 4 + 8 + 8 + 1;
  if (file_size < header_size)
    throw std::invalid_argument(path.string() + ": file too short for a spectra header (" +
                                std::to_string(file_size) + " bytes)");

  char magic[8];
  std::uint32_t m_count = 0, a_line_count = 0;
  double lambda_min_nm = 0, lambda_max_nm = 0;
  std::uint8_t reference_flag = 0;
  in.read(magic, 8);
  in.read(reinterpret_cast<char*>(&m_count), 4);
  in.read(reinterpret_cast<char*>(&a_line_count), 4);
  in.read(reinterpret_cast<char*>(&lambda_min_nm), 8);
  in.read(reinterpret_cast<char*>(&lambda_max_nm), 8);
  in.read(reinterpret_cast<char*>(&reference_flag), 1);
  if (std::memcmp(magic, binary_magic, 8) != 0)
    throw std::invalid_argument(path.string() + ": bad magic, not an OCTSPEC1 file");

  const std::uint64_t rows = static_cast<std::uint64_t>(a_line_count) + (reference_flag ? 1 : 0);
  const std::uint64_t expected = header_size + rows * m_count * sizeof(double);
  if (file_size != expected)
    throw std::invalid_argument(path.string() + ": payload size mismatch: expected " +
                                std::to_string(expected) + " bytes, file has " +
                                std::to_string(file_size));

  LoadedSpectra out;
  out.encoding = SpectraEncoding::binary_f64le;
  out.k_grid = wavenumber_grid_from_wavelengths(lambda_min_nm * 1e-9,
                                                lambda_max_nm * 1e-9,
                                                static_cast<int>(m_count));

  auto read_row = [&]() {
    Eigen::VectorXd v(m_count);
    in.read(reinterpret_cast<char*>(v.data()),
            static_cast<std::streamsize>(m_count * sizeof(double)));
    if (!in) throw std::invalid_argument(path.string() + ": truncated payload row");
    if (!v.allFinite())
      throw std::invalid_argument(path.string() + ": non-finite value in payload");
    return v;
  };

  if (reference_flag) {
    EmissionSpectrum ref;
    ref.values = read_row();
    ref.k_grid = out.k_grid;
    out.reference = std::move(ref);
  }
  for (std::uint32_t j = 0; j < a_line_count; ++j) {
    Interferogram ig;
    ig.values = read_row();
    ig.k_grid = out.k_grid;
    ig.provenance = Provenance::file;
    out.interferograms.push_back(std::move(ig));
  }
  return out;
}

}  // namespace

const char* to_string(SpectraEncoding e) {
  return e == SpectraEncoding::ascii_csv ? "ascii-csv" : "binary-f64le";
}

SpectraEncoding spectra_encoding_from_string(const std::string& name) {
  if (name == "ascii-csv" || name == "csv") return SpectraEncoding::ascii_csv;
  if (name == "binary-f64le" || name == "binary") return SpectraEncoding::binary_f64le;
  throw std::invalid_argument("unknown spectra encoding '" + name + "'");
}

LoadedSpectra load_spectra(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot open '" + path.string() + "'");
  char magic[8] = {};
  in.read(magic, 8);
  in.clear();
  in.seekg(0);
  if (std::memcmp(magic, binary_magic, 8) == 0) return load_binary(in, path);
  return load_csv(in, path);
}

void save_spectra(const std::filesystem::path& path,
                  std::span<const Interferogram> a_lines,
                  const EmissionSpectrum* reference, SpectraEncoding encoding) {
  if (a_lines.empty() && reference == nullptr)
    throw std::invalid_argument("save_spectra: nothing to write");
  const WavenumberGrid grid = a_lines.empty() ? reference->k_grid : a_lines[0].k_grid;
  for (const auto& line : a_lines)
    if (line.values.size() != grid.m_count)
      throw std::invalid_argument("save_spectra: A-line length mismatch");
  if (reference && reference->values.size() != grid.m_count)
    throw std::invalid_argument("save_spectra: reference length mismatch");

  const double lambda_min_nm = grid.lambda_min() * 1e9;
  const double lambda_max_nm = grid.lambda_max() * 1e9;

  if (encoding == SpectraEncoding::ascii_csv) {
    std::string text = csv_header_row;
    text += '\n';
    text += std::to_string(grid.m_count) + "," + format_double(lambda_min_nm) + "," +
            format_double(lambda_max_nm) + "," + std::to_string(a_lines.size()) +
            ",ascii-csv," + (reference ? "1" : "0") + "\n";
    auto append_row = [&](const Eigen::VectorXd& v) {
      for (int m = 0; m < v.size(); ++m) {
        if (m) text += ',';
        text += format_double(v[m]);
      }
      text += '\n';
    };
    if (reference) append_row(reference->values);
    for (const auto& line : a_lines) append_row(line.values);
    atomic_write(path, text, false);
    return;
  }

  std::string blob(binary_magic, 8);
  const std::uint32_t m_count = static_cast<std::uint32_t>(grid.m_count);
  const std::uint32_t count = static_cast<std::uint32_t>(a_lines.size());
  const std::uint8_t flag = reference ? 1 : 0;
  blob.append(reinterpret_cast<const char*>(&m_count), 4);
  blob.append(reinterpret_cast<const char*>(&count), 4);
  blob.append(reinterpret_cast<const char*>(&lambda_min_nm), 8);
  blob.append(reinterpret_cast<const char*>(&lambda_max_nm), 8);
  blob.append(reinterpret_cast<const char*>(&flag), 1);
  auto append_row = [&](const Eigen::VectorXd& v) {
    blob.append(reinterpret_cast<const char*>(v.data()), v.size() * sizeof(double));
  };
  if (reference) append_row(reference->values);
  for (const auto& line : a_lines) append_row(line.values);
  atomic_write(path, blob, true);
}

void write_csv(const std::filesystem::path& path,
               const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows,
               const nlohmann::json* manifest) {
  std::string text;
  if (manifest) text += "# octsr-manifest: " + manifest->dump() + "\n";
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (c) text += ',';
    text += header[c];
  }
  text += '\n';
  for (const auto& row : rows) {
    if (row.size() != header.size())
      throw std::runtime_error("write_csv: row width does not match header");
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) text += ',';
      text += row[c];
    }
    text += '\n';
  }
  atomic_write(path, text, false);
}

nlohmann::json make_manifest(const std::string& command, const nlohmann::json& config,
                             std::uint64_t seed, const std::vector<std::string>& argv,
                             const std::vector<std::string>& outputs) {
  nlohmann::json m;
  m["schema_version"] = manifest_schema_version;
  m["tool"] = "octsr";
  m["version"] = octsr_version;
  m["command"] = command;
  m["config"] = config;
  m["seed"] = seed;
  m["argv"] = argv;
  m["outputs"] = outputs;
  return m;
}

void write_manifest(const std::filesystem::path& path, const nlohmann::json& manifest) {
  atomic_write(path, manifest.dump(2) + "\n", false);
}

}  // namespace octsr
