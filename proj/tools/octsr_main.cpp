#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>
#include <omp.h>

#include "octsr/admm.hpp"
#include "octsr/deconv.hpp"
#include "octsr/forward.hpp"
#include "octsr/gaussfit.hpp"
#include "octsr/grids.hpp"
#include "octsr/idft.hpp"
#include "octsr/io.hpp"
#include "octsr/phantom.hpp"
#include "octsr/units.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int exit_ok = 0;
constexpr int exit_user_error = 1;
constexpr int exit_internal_error = 2;

std::string fmt(double v) { return octsr::format_double(v); }

// ---------------------------------------------------------------------------
// shared option bundles

struct SpectrumOptions {
  std::string lambda_min = "791.6nm";
  std::string lambda_max = "994.0nm";
  int m_count = 2048;
  std::string center = "892.8nm";
  std::string fwhm = "103.4nm";

  void attach(CLI::App* cmd) {
    cmd->add_option("--lambda-min", lambda_min, "shortest wavelength (with unit)");
    cmd->add_option("--lambda-max", lambda_max, "longest wavelength (with unit)");
    cmd->add_option("--m-count", m_count, "number of spectral samples")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--center", center, "source center wavelength");
    cmd->add_option("--fwhm", fwhm, "source FWHM in wavelength");
  }

  octsr::WavenumberGrid grid() const {
    return octsr::wavenumber_grid_from_wavelengths(octsr::parse_length(lambda_min),
                                                   octsr::parse_length(lambda_max),
                                                   m_count);
  }

  octsr::EmissionSpectrum spectrum() const {
    auto result = octsr::gaussian_spectrum(grid(), octsr::parse_length(center),
                                           octsr::parse_length(fwhm));
    if (result.coverage_warning)
      std::cerr << "warning: source half-maximum band misses the spectral grid\n";
    return std::move(result.spectrum);
  }

  json config() const {
    return {{"lambda_min", lambda_min}, {"lambda_max", lambda_max},
            {"m_count", m_count},       {"center", center},
            {"fwhm", fwhm}};
  }
};

struct AdmmOptions {
  double lambda = 0.0;
  double lambda_rel = 0.05;
  double rho = 1.0;
  double alpha = 1.6;
  int max_iterations = 1000;
  std::string grid_step = "1um";
  std::string support = "1mm";  // length or "auto"
  std::string support_start = "0m";
  bool nonnegative = false;
  bool adaptive_rho = false;

  void attach(CLI::App* cmd) {
    cmd->add_option("--lambda", lambda, "absolute l1 weight (0 = use --lambda-rel)");
    cmd->add_option("--lambda-rel", lambda_rel,
                    "l1 weight as a fraction of ||A^T i||_inf");
    cmd->add_option("--rho", rho, "ADMM penalty parameter")->check(CLI::PositiveNumber);
    cmd->add_option("--alpha", alpha, "over-relaxation factor [1, 1.8]");
    cmd->add_option("--max-iters", max_iterations, "ADMM iteration cap")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--grid-step", grid_step, "reconstruction grid step");
    cmd->add_option("--support", support, "support length, or 'auto'");
    cmd->add_option("--support-start", support_start, "support start depth");
    cmd->add_flag("--nonnegative", nonnegative, "constrain the profile to be >= 0");
    cmd->add_flag("--adaptive-rho", adaptive_rho, "enable ratio-based rho adaptation");
  }

  bool auto_support() const { return support == "auto"; }

  octsr::AdmmConfig config(const octsr::SpatialGrid* estimated = nullptr) const {
    octsr::AdmmConfig cfg;
    cfg.lambda = lambda;
    cfg.rho = rho;
    cfg.alpha = alpha;
    cfg.max_iterations = max_iterations;
    cfg.nonnegative = nonnegative;
    cfg.adaptive_rho = adaptive_rho;
    if (estimated) {
      cfg.recon_grid = *estimated;
    } else {
      const double step = octsr::parse_length(grid_step);
      const double length = octsr::parse_length(support);
      const double start = octsr::parse_length(support_start);
      cfg.recon_grid = octsr::SpatialGrid(
          start, step, std::max(1, static_cast<int>(std::lround(length / step))));
    }
    return cfg;
  }

  json as_json() const {
    return {{"lambda", lambda},       {"lambda_rel", lambda_rel},
            {"rho", rho},             {"alpha", alpha},
            {"max_iters", max_iterations}, {"grid_step", grid_step},
            {"support", support},     {"support_start", support_start},
            {"nonnegative", nonnegative}, {"adaptive_rho", adaptive_rho}};
  }
};

octsr::NoiseModel noise_from(double sigma, std::uint64_t seed) {
  octsr::NoiseModel noise;
  noise.kind = sigma > 0.0 ? octsr::NoiseKind::additive_gaussian : octsr::NoiseKind::none;
  noise.sigma = sigma;
  noise.seed = seed;
  return noise;
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

// ---------------------------------------------------------------------------
// subcommand payloads

int run_simulate(const std::vector<std::string>& argv, const SpectrumOptions& spec_opts,
                 const std::string& phantom, const std::vector<std::string>& reflectors,
                 int a_lines, const std::string& min_sep, const std::string& max_sep,
                 const std::string& top_depth, double top_refl, double bottom_refl,
                 int sparse_count, const std::string& grid_step, const std::string& support,
                 const std::string& support_start, double sigma, std::uint64_t seed,
                 const std::string& out, const std::string& format, bool include_reference) {
  const octsr::EmissionSpectrum source = spec_opts.spectrum();
  const double step = octsr::parse_length(grid_step);
  const double start = octsr::parse_length(support_start);
  const int n = std::max(1, static_cast<int>(std::lround(octsr::parse_length(support) / step)));
  const octsr::SpatialGrid zgrid(start, step, n);

  std::vector<octsr::ReflectivityProfile> profiles;
  if (phantom == "reflectors") {
    if (reflectors.empty())
      throw std::invalid_argument("simulate: --phantom reflectors needs at least one --reflector");
    octsr::ReflectivityProfile p;
    p.z_grid = zgrid;
    p.values = Eigen::VectorXd::Zero(n);
    for (const auto& spec : reflectors) {
      const auto colon = spec.find(':');
      const double pos = octsr::parse_length(spec.substr(0, colon));
      const double amp = colon == std::string::npos ? 1.0 : std::stod(spec.substr(colon + 1));
      const int node = static_cast<int>(std::lround((pos - start) / step));
      if (node < 0 || node >= n)
        throw std::invalid_argument("simulate: reflector at " + spec + " is outside the support");
      p.values[node] += amp;
    }
    profiles.resize(std::max(1, a_lines), p);
  } else if (phantom == "wedge") {
    octsr::AirWedgeSpec wedge;
    wedge.lateral_count = a_lines;
    wedge.min_separation = octsr::parse_length(min_sep);
    wedge.max_separation = octsr::parse_length(max_sep);
    wedge.top_depth = octsr::parse_length(top_depth);
    wedge.top_reflectivity = top_refl;
    wedge.bottom_reflectivity = bottom_refl;
    profiles = octsr::synthesize_air_wedge(wedge, zgrid).lines;
  } else if (phantom == "sparse") {
    for (int j = 0; j < std::max(1, a_lines); ++j) {
      std::mt19937_64 rng(octsr::mix_seed(seed, 1000003ULL + j));
      std::uniform_int_distribution<int> node(n / 20, n - 1 - n / 20);
      std::uniform_real_distribution<double> amp(0.5, 1.5);
      octsr::ReflectivityProfile p;
      p.z_grid = zgrid;
      p.values = Eigen::VectorXd::Zero(n);
      for (int r = 0; r < sparse_count; ++r) p.values[node(rng)] += amp(rng);
      profiles.push_back(std::move(p));
    }
  } else {
    throw std::invalid_argument("simulate: unknown phantom '" + phantom +
                                "' (expected reflectors | wedge | sparse)");
  }

  std::vector<octsr::Interferogram> lines;
  lines.reserve(profiles.size());
  for (std::size_t j = 0; j < profiles.size(); ++j) {
    octsr::NoiseModel noise = noise_from(sigma, octsr::mix_seed(seed, j));
    lines.push_back(octsr::simulate_interferogram(profiles[j], source, noise));
  }

  octsr::save_spectra(out, lines, include_reference ? &source : nullptr,
                      octsr::spectra_encoding_from_string(format));

  json config = {{"phantom", phantom},
                 {"a_lines", static_cast<int>(profiles.size())},
                 {"grid_step", grid_step},
                 {"support", support},
                 {"support_start", support_start},
                 {"noise_sigma", sigma},
                 {"format", format},
                 {"include_reference", include_reference},
                 {"spectrum", spec_opts.config()}};
  if (phantom == "wedge") {
    config["min_sep"] = min_sep;
    config["max_sep"] = max_sep;
    config["top_depth"] = top_depth;
    config["top_reflectivity"] = top_refl;
    config["bottom_reflectivity"] = bottom_refl;
  }
  if (phantom == "reflectors") config["reflectors"] = reflectors;
  if (phantom == "sparse") config["sparse_count"] = sparse_count;
  octsr::write_manifest(out + ".manifest.json",
                        octsr::make_manifest("simulate", config, seed, argv, {out}));
  std::cout << "wrote " << out << " (" << profiles.size() << " A-lines, M="
            << source.k_grid.m_count << ")\n";
  return exit_ok;
}

int run_psf(const std::vector<std::string>& argv, const SpectrumOptions& spec_opts,
            const std::string& in, const std::string& out) {
  octsr::EmissionSpectrum s;
  if (!in.empty()) {
    auto loaded = octsr::load_spectra(in);
    if (!loaded.reference)
      throw std::invalid_argument("psf: '" + in + "' carries no reference spectrum row");
    s = *loaded.reference;
  } else {
    s = spec_opts.spectrum();
  }
  const octsr::PsfReport report = octsr::psf_report(s);
  std::cout << "fwhm = " << fmt(report.fwhm * 1e6) << " um\n";
  std::cout << "peak_position = " << fmt(report.peak_position * 1e6) << " um\n";

  if (!out.empty()) {
    json config = {{"in", in}, {"spectrum", spec_opts.config()}, {"fwhm_m", report.fwhm}};
    json manifest = octsr::make_manifest("psf", config, 0, argv, {out});
    std::vector<std::vector<std::string>> rows;
    for (int m = 0; m < report.psf.size(); ++m)
      rows.push_back({fmt(report.z_grid.z(m)), fmt(report.psf[m])});
    octsr::write_csv(out, {"z_m", "psf"}, rows, &manifest);
    octsr::write_manifest(out + ".manifest.json", manifest);
  }
  return exit_ok;
}

int run_recon(const std::vector<std::string>& argv, const std::string& in,
              const std::string& method_name, const AdmmOptions& admm_opts,
              int lr_iterations, int aline, const std::string& out) {
  const octsr::ReconMethod method = octsr::recon_method_from_string(method_name);
  auto loaded = octsr::load_spectra(in);
  if (loaded.interferograms.empty())
    throw std::invalid_argument("recon: '" + in + "' has no A-lines");
  if (aline >= static_cast<int>(loaded.interferograms.size()))
    throw std::invalid_argument("recon: --aline out of range");

  std::vector<int> selection;
  if (aline >= 0) selection.push_back(aline);
  else
    for (std::size_t j = 0; j < loaded.interferograms.size(); ++j)
      selection.push_back(static_cast<int>(j));

  octsr::PsfReport psf;
  std::unique_ptr<octsr::AdmmSolver> solver;
  if (method != octsr::ReconMethod::idft) {
    if (!loaded.reference)
      throw std::invalid_argument("recon: method '" + method_name +
                                  "' needs the reference spectrum row in the input file");
    if (method == octsr::ReconMethod::idft_deconv) psf = octsr::psf_report(*loaded.reference);
    if (method == octsr::ReconMethod::admm && !admm_opts.auto_support())
      solver = std::make_unique<octsr::AdmmSolver>(*loaded.reference, admm_opts.config());
  }

  std::vector<std::vector<std::string>> rows;
  for (int j : selection) {
    const octsr::Interferogram& ig = loaded.interferograms[j];
    octsr::ReconResult rec;
    if (method == octsr::ReconMethod::idft) {
      rec = octsr::reconstruct_idft(ig);
    } else if (method == octsr::ReconMethod::idft_deconv) {
      octsr::LucyRichardsonOptions lr;
      lr.iterations = lr_iterations;
      rec = octsr::lucy_richardson(octsr::reconstruct_idft(ig), psf, lr);
    } else {
      const octsr::AdmmSolver* use = solver.get();
      std::unique_ptr<octsr::AdmmSolver> per_line;
      if (!use) {  // auto support from the coarse reconstruction
        const octsr::SpatialGrid est = octsr::estimate_support(
            octsr::reconstruct_idft(ig), octsr::parse_length(admm_opts.grid_step));
        per_line = std::make_unique<octsr::AdmmSolver>(*loaded.reference,
                                                       admm_opts.config(&est));
        use = per_line.get();
      }
      const double lambda = admm_opts.lambda > 0.0
                                ? admm_opts.lambda
                                : admm_opts.lambda_rel * use->lambda_max(ig);
      rec = use->solve(ig, lambda);
      std::cout << "aline " << j << ": iterations=" << rec.diagnostics.at("iterations")
                << " converged=" << rec.diagnostics.at("converged")
                << " objective=" << fmt(rec.diagnostics.at("objective")) << "\n";
    }
    for (int m = 0; m < rec.values.size(); ++m)
      rows.push_back({std::to_string(j), fmt(rec.z_grid.z(m)), fmt(rec.values[m].real()),
                      fmt(rec.values[m].imag()), fmt(rec.magnitude[m])});
  }

  json config = {{"in", in}, {"method", method_name}, {"admm", admm_opts.as_json()},
                 {"lr_iterations", lr_iterations}, {"aline", aline}};
  json manifest = octsr::make_manifest("recon", config, 0, argv, {out});
  octsr::write_csv(out, {"aline", "z_m", "real", "imag", "magnitude"}, rows, &manifest);
  octsr::write_manifest(out + ".manifest.json", manifest);
  std::cout << "wrote " << out << "\n";
  return exit_ok;
}

int run_bench_wedge(const std::vector<std::string>& argv, const SpectrumOptions& spec_opts,
                    const std::string& methods_list, int a_lines, const std::string& min_sep,
                    const std::string& max_sep, const std::string& top_depth, double top_refl,
                    double bottom_refl, double sigma, std::uint64_t seed,
                    const AdmmOptions& admm_opts, int lr_iterations, const std::string& out_dir) {
  octsr::AirWedgeSpec wedge;
  wedge.lateral_count = a_lines;
  wedge.min_separation = octsr::parse_length(min_sep);
  wedge.max_separation = octsr::parse_length(max_sep);
  wedge.top_depth = octsr::parse_length(top_depth);
  wedge.top_reflectivity = top_refl;
  wedge.bottom_reflectivity = bottom_refl;

  std::set<octsr::ReconMethod> methods;
  for (const auto& name : split_list(methods_list))
    methods.insert(octsr::recon_method_from_string(name));

  const octsr::EmissionSpectrum source = spec_opts.spectrum();
  octsr::WedgeBenchOptions options;
  options.lambda_relative = admm_opts.lambda > 0.0 ? 0.0 : admm_opts.lambda_rel;
  options.lucy.iterations = lr_iterations;

  const auto reports = octsr::resolution_benchmark(
      wedge, source, noise_from(sigma, seed), methods, admm_opts.config(), options);

  fs::create_directories(out_dir);
  json config = {{"a_lines", a_lines},       {"min_sep", min_sep},
                 {"max_sep", max_sep},       {"top_depth", top_depth},
                 {"top_reflectivity", top_refl}, {"bottom_reflectivity", bottom_refl},
                 {"noise_sigma", sigma},     {"methods", methods_list},
                 {"admm", admm_opts.as_json()}, {"lr_iterations", lr_iterations},
                 {"spectrum", spec_opts.config()}};
  std::vector<std::string> outputs;
  for (const auto& rep : reports)
    outputs.push_back(
        (fs::path(out_dir) / ("wedge_" + std::string(to_string(rep.method)) + ".csv"))
            .string());
  outputs.push_back((fs::path(out_dir) / "resolution_summary.csv").string());
  json manifest = octsr::make_manifest("bench-wedge", config, seed, argv, outputs);

  std::vector<std::vector<std::string>> summary;
  for (std::size_t r = 0; r < reports.size(); ++r) {
    const auto& rep = reports[r];
    std::vector<std::vector<std::string>> rows;
    for (const auto& m : rep.per_position)
      rows.push_back({std::to_string(m.lateral_index), fmt(m.expected_separation),
                      fmt(m.fitted_separation), fmt(m.relative_error), fmt(m.fit_quality),
                      m.fit_ok ? "1" : "0"});
    octsr::write_csv(outputs[r],
                     {"lateral_index", "expected_separation_m", "fitted_separation_m",
                      "relative_error", "fit_r2", "fit_ok"},
                     rows, &manifest);
    summary.push_back({to_string(rep.method), fmt(rep.resolution)});
    std::cout << to_string(rep.method) << " resolution = " << fmt(rep.resolution * 1e6)
              << " um\n";
  }
  octsr::write_csv(outputs.back(), {"method", "resolution_m"}, summary, &manifest);
  octsr::write_manifest(fs::path(out_dir) / "manifest.json", manifest);
  return exit_ok;
}

int run_dirichlet(const std::vector<std::string>& argv, double delta_k, int m_count,
                  double k0, const std::string& z_min, const std::string& z_max,
                  const std::string& z_step, const std::string& out) {
  const octsr::WavenumberGrid grid(k0, delta_k, m_count);
  const double lo = octsr::parse_length(z_min);
  const double hi = octsr::parse_length(z_max);
  const double step = octsr::parse_length(z_step);
  if (hi < lo || !(step > 0.0))
    throw std::invalid_argument("dirichlet: invalid z sweep");

  std::vector<double> zs;
  for (double z = lo; z <= hi + 0.5 * step; z += step) zs.push_back(z);

  std::vector<std::vector<std::string>> rows;
  for (double z : zs) {
    const auto resp = octsr::dirichlet_response(z, grid);
    for (int m = 0; m < m_count; ++m)
      rows.push_back({fmt(z), fmt(m * grid.recon_step()), fmt(resp.kernel_magnitude[m]),
                      fmt(std::arg(resp.response[m]))});
  }
  json config = {{"delta_k", delta_k}, {"m_count", m_count}, {"k0", k0},
                 {"z_min", z_min},     {"z_max", z_max},     {"z_step", z_step}};
  json manifest = octsr::make_manifest("dirichlet", config, 0, argv, {out});
  octsr::write_csv(out, {"z_source_m", "z_prime_m", "magnitude", "phase_rad"}, rows,
                   &manifest);
  octsr::write_manifest(out + ".manifest.json", manifest);
  std::cout << "wrote " << out << " (" << zs.size() << " kernels)\n";
  return exit_ok;
}

int run_truncate(const std::vector<std::string>& argv, const std::string& in,
                 double fraction, const std::string& out) {
  auto loaded = octsr::load_spectra(in);
  if (!loaded.reference)
    throw std::invalid_argument("truncate: '" + in + "' carries no reference spectrum row");

  std::vector<octsr::Interferogram> truncated;
  octsr::EmissionSpectrum spectrum;
  for (const auto& ig : loaded.interferograms) {
    auto r = octsr::truncate_bandwidth(ig, *loaded.reference, fraction);
    truncated.push_back(std::move(r.interferogram));
    spectrum = std::move(r.spectrum);
  }
  if (loaded.interferograms.empty()) {
    octsr::Interferogram dummy;
    dummy.values = loaded.reference->values;
    dummy.k_grid = loaded.k_grid;
    spectrum = octsr::truncate_bandwidth(dummy, *loaded.reference, fraction).spectrum;
  }
  octsr::save_spectra(out, truncated, &spectrum, loaded.encoding);

  json config = {{"in", in}, {"fraction", fraction}};
  octsr::write_manifest(out + ".manifest.json",
                        octsr::make_manifest("truncate", config, 0, argv, {out}));
  std::cout << "wrote " << out << " (M=" << spectrum.k_grid.m_count << ")\n";
  return exit_ok;
}

int dispatch(const std::vector<std::string>& args, int depth);

int run_rerun(const std::string& manifest_path, int depth) {
  std::ifstream in(manifest_path);
  if (!in) throw std::invalid_argument("rerun: cannot open '" + manifest_path + "'");
  json manifest = json::parse(in);
  if (!manifest.contains("argv") || !manifest["argv"].is_array())
    throw std::invalid_argument("rerun: manifest has no argv record");
  if (depth > 0) throw std::invalid_argument("rerun: nested rerun is not allowed");
  std::vector<std::string> argv;
  for (const auto& a : manifest["argv"]) argv.push_back(a.get<std::string>());
  return dispatch(argv, depth + 1);
}

// ---------------------------------------------------------------------------

int dispatch(const std::vector<std::string>& args, int depth) {
  CLI::App app{"Fourier-domain OCT simulation and super-resolution reconstruction"};
  app.require_subcommand(1);
  int threads = 0;
  app.add_option("--threads", threads, "worker threads (0 = library default)");

  // simulate
  auto* simulate = app.add_subcommand("simulate", "synthesize a phantom spectra file");
  SpectrumOptions sim_spec;
  sim_spec.attach(simulate);
  std::string sim_phantom = "reflectors";
  std::vector<std::string> sim_reflectors;
  int sim_alines = 1;
  std::string sim_min_sep = "0.5um", sim_max_sep = "15um", sim_top = "60.4um";
  double sim_top_refl = 1.0, sim_bottom_refl = 1.0;
  int sim_sparse_count = 12;
  std::string sim_grid_step = "62.5nm", sim_support = "1mm", sim_support_start = "0m";
  double sim_sigma = 0.0;
  std::uint64_t sim_seed = 1;
  std::string sim_out, sim_format = "binary";
  bool sim_no_reference = false;
  simulate->add_option("--phantom", sim_phantom, "reflectors | wedge | sparse");
  simulate->add_option("--reflector", sim_reflectors,
                       "reflector 'position:amplitude' (repeatable)");
  simulate->add_option("--a-lines", sim_alines, "number of A-lines");
  simulate->add_option("--min-sep", sim_min_sep, "wedge: smallest separation");
  simulate->add_option("--max-sep", sim_max_sep, "wedge: largest separation");
  simulate->add_option("--top-depth", sim_top, "wedge: upper interface depth");
  simulate->add_option("--top-reflectivity", sim_top_refl, "wedge: upper reflectivity");
  simulate->add_option("--bottom-reflectivity", sim_bottom_refl,
                       "wedge: lower reflectivity");
  simulate->add_option("--sparse-count", sim_sparse_count, "sparse: reflectors per A-line");
  simulate->add_option("--grid-step", sim_grid_step, "synthesis grid step");
  simulate->add_option("--support", sim_support, "synthesis support length");
  simulate->add_option("--support-start", sim_support_start, "synthesis support start");
  simulate->add_option("--noise-sigma", sim_sigma, "additive Gaussian noise sigma");
  simulate->add_option("--seed", sim_seed, "noise / phantom seed");
  simulate->add_option("--out", sim_out, "output spectra file")->required();
  simulate->add_option("--format", sim_format, "binary | csv");
  simulate->add_flag("--no-reference", sim_no_reference,
                     "do not store the source spectrum row");

  // psf
  auto* psf = app.add_subcommand("psf", "axial PSF and FWHM of a source spectrum");
  SpectrumOptions psf_spec;
  psf_spec.attach(psf);
  std::string psf_in, psf_out;
  psf->add_option("--in", psf_in, "spectra file with a reference row");
  psf->add_option("--out", psf_out, "PSF table output");

  // recon
  auto* recon = app.add_subcommand("recon", "reconstruct depth profiles from spectra");
  std::string rec_in, rec_method = "idft", rec_out;
  int rec_aline = -1, rec_lr_iterations = 20;
  AdmmOptions rec_admm;
  recon->add_option("--in", rec_in, "input spectra file")->required();
  recon->add_option("--method", rec_method, "idft | idft-deconv | admm");
  recon->add_option("--aline", rec_aline, "A-line index (-1 = all)");
  recon->add_option("--lr-iterations", rec_lr_iterations, "Lucy-Richardson iterations");
  rec_admm.attach(recon);
  recon->add_option("--out", rec_out, "profile table output")->required();

  // bench-wedge
  auto* bench = app.add_subcommand("bench-wedge", "air-wedge resolution benchmark");
  SpectrumOptions bench_spec;
  bench_spec.attach(bench);
  std::string bench_methods = "idft,idft-deconv,admm";
  int bench_alines = 200, bench_lr_iterations = 20;
  std::string bench_min_sep = "0.5um", bench_max_sep = "15um", bench_top = "60.4um";
  double bench_top_refl = 1.0, bench_bottom_refl = 1.0, bench_sigma = 0.0;
  std::uint64_t bench_seed = 1;
  AdmmOptions bench_admm;
  std::string bench_out_dir = "bench-out";
  bench->add_option("--methods", bench_methods, "comma list of methods");
  bench->add_option("--a-lines", bench_alines, "lateral positions");
  bench->add_option("--min-sep", bench_min_sep, "smallest separation");
  bench->add_option("--max-sep", bench_max_sep, "largest separation");
  bench->add_option("--top-depth", bench_top, "upper interface depth");
  bench->add_option("--top-reflectivity", bench_top_refl, "upper reflectivity");
  bench->add_option("--bottom-reflectivity", bench_bottom_refl, "lower reflectivity");
  bench->add_option("--noise-sigma", bench_sigma, "additive Gaussian noise sigma");
  bench->add_option("--seed", bench_seed, "noise seed");
  bench->add_option("--lr-iterations", bench_lr_iterations, "Lucy-Richardson iterations");
  bench_admm.attach(bench);
  bench->add_option("--out-dir", bench_out_dir, "output directory");

  // dirichlet
  auto* dirichlet = app.add_subcommand("dirichlet", "shift-variant kernel sweep");
  double dir_delta_k = 2094.1;
  int dir_m_count = 2048;
  double dir_k0 = octsr::two_pi / 994.0e-9;
  std::string dir_zmin = "4.6um", dir_zmax = "5.0um", dir_zstep = "0.1um", dir_out;
  dirichlet->add_option("--delta-k", dir_delta_k, "k sampling interval [rad/m]");
  dirichlet->add_option("--m-count", dir_m_count, "number of spectral samples");
  dirichlet->add_option("--k0", dir_k0, "starting wavenumber [rad/m]");
  dirichlet->add_option("--z-min", dir_zmin, "first source depth");
  dirichlet->add_option("--z-max", dir_zmax, "last source depth");
  dirichlet->add_option("--z-step", dir_zstep, "source depth step");
  dirichlet->add_option("--out", dir_out, "kernel table output")->required();

  // truncate
  auto* truncate = app.add_subcommand("truncate", "reduce the spectral bandwidth");
  std::string tr_in, tr_out;
  double tr_fraction = 0.5;
  truncate->add_option("--in", tr_in, "input spectra file")->required();
  truncate->add_option("--fraction", tr_fraction, "kept fraction in (0, 1]");
  truncate->add_option("--out", tr_out, "output spectra file")->required();

  // rerun
  auto* rerun = app.add_subcommand("rerun", "re-execute a manifest's command");
  std::string rr_manifest;
  rerun->add_option("manifest", rr_manifest, "manifest.json path")->required();

  try {
    // CLI11's vector overload expects the arguments reversed
    app.parse(std::vector<std::string>(args.rbegin(), args.rend()));
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? exit_ok : exit_user_error;
  }

  if (threads > 0) omp_set_num_threads(threads);

  if (simulate->parsed())
    return run_simulate(args, sim_spec, sim_phantom, sim_reflectors, sim_alines,
                        sim_min_sep, sim_max_sep, sim_top, sim_top_refl, sim_bottom_refl,
                        sim_sparse_count, sim_grid_step, sim_support, sim_support_start,
                        sim_sigma, sim_seed, sim_out, sim_format, !sim_no_reference);
  if (psf->parsed()) return run_psf(args, psf_spec, psf_in, psf_out);
  if (recon->parsed())
    return run_recon(args, rec_in, rec_method, rec_admm, rec_lr_iterations, rec_aline,
                     rec_out);
  if (bench->parsed())
    return run_bench_wedge(args, bench_spec, bench_methods, bench_alines, bench_min_sep,
                           bench_max_sep, bench_top, bench_top_refl, bench_bottom_refl,
                           bench_sigma, bench_seed, bench_admm, bench_lr_iterations,
                           bench_out_dir);
  if (dirichlet->parsed())
    return run_dirichlet(args, dir_delta_k, dir_m_count, dir_k0, dir_zmin, dir_zmax,
                         dir_zstep, dir_out);
  if (truncate->parsed()) return run_truncate(args, tr_in, tr_fraction, tr_out);
  if (rerun->parsed()) return run_rerun(rr_manifest, depth);
  return exit_user_error;
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  try {
    return dispatch(args, 0);
  } catch (const octsr::resource_error& e) {
    std::cerr << json{{"error", {{"type", "resource"}, {"message", e.what()}}}}.dump()
              << "\n";
    return exit_user_error;
  } catch (const std::invalid_argument& e) {
    std::cerr << json{{"error", {{"type", "invalid_argument"}, {"message", e.what()}}}}.dump()
              << "\n";
    return exit_user_error;
  } catch (const std::exception& e) {
    std::cerr << json{{"error", {{"type", "internal"}, {"message", e.what()}}}}.dump()
              << "\n";
    return exit_internal_error;
  }
}
