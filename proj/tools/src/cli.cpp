#include "cli.hpp"

#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "manifest.hpp"
#include "qpmsynth/error.hpp"
#include "qpmsynth/io.hpp"
#include "qpmsynth/pmf.hpp"
#include "qpmsynth/poling.hpp"
#include "qpmsynth/schmidt.hpp"
#include "qpmsynth/spectra.hpp"
#include "qpmsynth/sweep.hpp"

namespace qpmsynth::cli {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

namespace {

// ---------------------------------------------------------------------------
// Option groups

struct GridOptions {
  double start_nm = 1535.0;
  double stop_nm = 1565.0;
  std::optional<std::size_t> points;  ///< per-command default when unset
};

struct DesignOptions {
  std::string design_file;
  bool uniform = false;
  double length_um = 10000.0;
  double fwhm_um = 8000.0;
  std::optional<double> base_period_um;
  int max_order = 31;
  std::string parity = "odd";
  std::string quantizer = "area-matching";
};

struct PumpOptions {
  double center_nm = 775.0;
  std::optional<double> fwhm_nm;
};

struct FilterOptions {
  std::string shape = "none";
  double width_nm = 13.0;
  std::optional<double> signal_center_nm;
  std::optional<double> idler_center_nm;
};

struct SweepOptions {
  double lo_nm = 0.8;
  double hi_nm = 4.6;
  std::size_t points = 39;
  std::string source = "auto";
};

struct Options {
  std::string dispersion = QPMSYNTH_DEFAULT_DISPERSION;
  std::string out_dir;
  GridOptions grid;
  DesignOptions design;
  PumpOptions pump;
  FilterOptions filter;
  SweepOptions sweep;
  std::size_t profile_samples = 2001;
  double cut_pump_nm = 775.0;
  std::vector<std::string> named_designs;
  std::string intensity_file;
  double noise_floor = 0.0;
  bool import_sweep = false;
};

// Result of a command before anything touches the disk.
struct Artifact {
  std::string name;
  std::string content;
};

struct Run {
  std::vector<Artifact> artifacts;
  Json parameters = Json::object();
  std::vector<std::string> inputs;
  std::vector<std::string> summary;
};

[[noreturn]] void usage_fail(const std::string& what) { throw Error(ErrorCode::usage, what); }

// ---------------------------------------------------------------------------
// Resolution helpers

// 1024 points for sidelobe metrics, 512 for purity work.
SpectralGrid resolve_grid(const GridOptions& g, std::size_t default_points, Run& run) {
  const std::size_t n = g.points.value_or(default_points);
  run.parameters["grid"] = {{"start_nm", g.start_nm}, {"stop_nm", g.stop_nm}, {"points", n}};
  return square_grid(g.start_nm, g.stop_nm, n);
}

DispersionModel resolve_dispersion(const Options& o, Run& run) {
  run.inputs.push_back(o.dispersion);
  run.parameters["dispersion"] = o.dispersion;
  return io::load_dispersion(o.dispersion);
}

GaussianDesignParams generator_params(const DesignOptions& d) {
  if (!d.base_period_um) {
    usage_fail("--base-period-um is required when no --design file is given");
  }
  GaussianDesignParams p;
  p.total_length_um = d.length_um;
  p.target_fwhm_um = d.fwhm_um;
  p.base_period_um = *d.base_period_um;
  p.max_order = d.max_order;
  p.parity = d.parity == "all" ? OrderParity::all : OrderParity::odd_only;
  p.quantizer = d.quantizer == "midpoint" ? Quantizer::midpoint : Quantizer::area_matching;
  return p;
}

struct ResolvedDesign {
  CrystalDesign design;
  std::optional<GaussianDesignParams> generator;  ///< set for generated Gaussian designs
  CurveSource source = CurveSource::other;
};

ResolvedDesign resolve_design(const DesignOptions& d, Run& run) {
  if (!d.design_file.empty()) {
    run.inputs.push_back(d.design_file);
    run.parameters["design"] = {{"file", d.design_file}};
    return {io::load_design(d.design_file), std::nullopt, CurveSource::other};
  }
  const auto p = generator_params(d);
  if (d.uniform) {
    run.parameters["design"] = {{"generator", "uniform"},
                                {"length_um", p.total_length_um},
                                {"base_period_um", p.base_period_um}};
    return {uniform_design(p.total_length_um, p.base_period_um), std::nullopt,
            CurveSource::theoretical_ppktp};
  }
  run.parameters["design"] = {{"generator", "gaussian"},
                              {"length_um", p.total_length_um},
                              {"fwhm_um", p.target_fwhm_um},
                              {"base_period_um", p.base_period_um},
                              {"max_order", p.max_order},
                              {"parity", d.parity},
                              {"quantizer", d.quantizer}};
  return {gaussian_apodized_design(p), p, CurveSource::theoretical_cpktp};
}

PumpSpec resolve_pump(const PumpOptions& p, Run& run) {
  if (!p.fwhm_nm) usage_fail("--pump-fwhm is required");
  run.parameters["pump"] = {{"center_nm", p.center_nm}, {"fwhm_nm", *p.fwhm_nm}};
  return {p.center_nm, *p.fwhm_nm};
}

struct Filters {
  FilterSpec signal;
  FilterSpec idler;
  bool active() const { return signal.shape != FilterShape::none; }
};

Filters resolve_filters(const FilterOptions& f, const JsaMatrix& jsa, Run& run) {
  if (f.shape == "none") {
    run.parameters["filters"] = {{"shape", "none"}};
    return {};
  }
  const auto [sig_peak, idl_peak] = marginal_peaks(jsa);
  const double sc = f.signal_center_nm.value_or(sig_peak);
  const double ic = f.idler_center_nm.value_or(idl_peak);
  run.parameters["filters"] = {{"shape", "flat-top"},
                               {"width_nm", f.width_nm},
                               {"signal_center_nm", sc},
                               {"idler_center_nm", ic}};
  return {FilterSpec::flat_top(sc, f.width_nm), FilterSpec::flat_top(ic, f.width_nm)};
}

CurveSource resolve_source(const std::string& name, CurveSource fallback) {
  if (name == "auto") return fallback;
  if (name == "theoretical-cpktp") return CurveSource::theoretical_cpktp;
  if (name == "theoretical-ppktp") return CurveSource::theoretical_ppktp;
  if (name == "measured-cpktp") return CurveSource::measured_cpktp;
  return CurveSource::other;
}

template <class Writer>
std::string render(Writer&& w) {
  std::ostringstream os;
  w(os);
  return os.str();
}

std::string sweep_artifacts(Run& run, const PmfGrid& pmf, const SweepOptions& s, double pump_center,
                            CurveSource source) {
  run.parameters["sweep"] = {{"lo_nm", s.lo_nm}, {"hi_nm", s.hi_nm}, {"points", s.points},
                             {"source", to_string(source)}};
  const auto curve = purity_vs_bandwidth(pmf, pump_center, {s.lo_nm, s.hi_nm}, s.points, source);
  const auto opt = optimal_bandwidth(curve);
  run.artifacts.push_back({"curve.csv", render([&](std::ostream& os) { io::write_curve_csv(os, curve); })});
  std::ostringstream rep;
  rep << "source = " << to_string(source) << '\n'
      << "optimal_fwhm_nm = " << io::format_value(opt.bandwidth_nm) << '\n'
      << "max_purity = " << io::format_value(opt.purity) << '\n'
      << "boundary_optimum = " << (opt.at_boundary ? "yes" : "no") << '\n';
  run.artifacts.push_back({"optimum.txt", rep.str()});
  std::string line = "optimal pump FWHM " + io::format_value(opt.bandwidth_nm) + " nm, purity " +
                     io::format_value(opt.purity);
  if (opt.at_boundary) line += " (warning: maximum at the sweep boundary)";
  return line;
}

// ---------------------------------------------------------------------------
// Commands

Run cmd_design(const Options& o) {
  Run run;
  const auto rd = resolve_design(o.design, run);
  const auto& design = rd.design;
  if (o.profile_samples < 2) usage_fail("--profile-samples must be at least 2");
  run.parameters["profile_samples"] = o.profile_samples;

  const double L = design.total_length_um();
  std::vector<double> z(o.profile_samples);
  for (std::size_t k = 0; k < z.size(); ++k) {
    z[k] = k + 1 == z.size() ? L : L * static_cast<double>(k) / static_cast<double>(z.size() - 1);
  }
  const auto eff = effective_profile(design, z);
  std::vector<std::string> header{"z_um", "effective_amplitude"};
  std::vector<std::vector<double>> cols{z, eff};
  if (rd.generator) {
    std::vector<double> target(z.size());
    for (std::size_t k = 0; k < z.size(); ++k) target[k] = target_gaussian(*rd.generator, z[k]);
    header.push_back("target_amplitude");
    cols.push_back(std::move(target));
  }

  run.artifacts.push_back({"design.json", io::design_to_string(design)});
  run.artifacts.push_back(
      {"profile.csv", render([&](std::ostream& os) { io::write_columns_csv(os, header, cols); })});
  run.summary.push_back(std::to_string(design.segments().size()) + " segments, " +
                        std::to_string(design.distinct_orders()) + " distinct orders, length " +
                        io::format_value(L) + " um");
  return run;
}

Run cmd_pmf(const Options& o) {
  Run run;
  const auto model = resolve_dispersion(o, run);
  const auto rd = resolve_design(o.design, run);
  const auto grid = resolve_grid(o.grid, 1024, run);
  run.parameters["cut_pump_nm"] = o.cut_pump_nm;

  const auto pmf = phi_grid(domains(rd.design), model, grid);
  const Eigen::MatrixXd intensity = pmf.amplitude.cwiseAbs2();
  const auto cut = anti_diagonal_cut(pmf, o.cut_pump_nm);
  const auto side = sidelobe_suppression(cut.intensity);

  run.artifacts.push_back(
      {"pmf.csv", render([&](std::ostream& os) { io::write_grid_csv(os, grid, pmf.amplitude); })});
  run.artifacts.push_back(
      {"pmf_intensity.csv", render([&](std::ostream& os) { io::write_grid_csv(os, grid, intensity); })});
  run.artifacts.push_back({"cut.csv", render([&](std::ostream& os) {
                             io::write_columns_csv(os, {"idler_nm", "signal_nm", "intensity"},
                                                   {cut.idler_nm, cut.signal_nm, cut.intensity});
                           })});
  std::ostringstream rep;
  rep << "cut_pump_nm = " << io::format_value(o.cut_pump_nm) << '\n'
      << "sidelobe_suppression_db = "
      << (side.suppression_db ? io::format_value(*side.suppression_db) : "no-sidelobe") << '\n';
  run.artifacts.push_back({"sidelobe.txt", rep.str()});
  run.summary.push_back("sidelobe suppression " +
                        (side.suppression_db ? io::format_value(*side.suppression_db) + " dB"
                                             : std::string("no-sidelobe")));
  return run;
}

Run cmd_jsa(const Options& o) {
  Run run;
  const auto model = resolve_dispersion(o, run);
  const auto rd = resolve_design(o.design, run);
  const auto grid = resolve_grid(o.grid, 512, run);
  const auto pump = resolve_pump(o.pump, run);

  const auto pmf = phi_grid(domains(rd.design), model, grid);
  const auto jsa = build_jsa(pump_envelope(pump, grid), pmf);
  const auto filters = resolve_filters(o.filter, jsa, run);
  const auto filtered = apply_filters(jsa, filters.signal, filters.idler);

  run.artifacts.push_back({"jsa.csv", render([&](std::ostream& os) {
                             io::write_grid_csv(os, grid, filtered.jsa.amplitude);
                           })});
  run.artifacts.push_back(
      {"jsi.csv", render([&](std::ostream& os) { io::write_grid_csv(os, grid, jsi(filtered.jsa)); })});
  std::ostringstream rep;
  rep << "passed_fraction = " << io::format_value(filtered.passed_fraction) << '\n'
      << "normalized = " << (filtered.jsa.normalized ? "yes" : "no") << '\n';
  run.artifacts.push_back({"jsa.txt", rep.str()});
  run.summary.push_back("passed fraction " + io::format_value(filtered.passed_fraction));
  return run;
}

Run cmd_purity(const Options& o) {
  Run run;
  const auto model = resolve_dispersion(o, run);
  const auto rd = resolve_design(o.design, run);
  const auto grid = resolve_grid(o.grid, 512, run);
  const auto pump = resolve_pump(o.pump, run);

  const auto pmf = phi_grid(domains(rd.design), model, grid);
  const auto jsa = build_jsa(pump_envelope(pump, grid), pmf);
  const auto filters = resolve_filters(o.filter, jsa, run);

  std::ostringstream rep;
  SchmidtResult result;
  if (filters.active()) {
    const auto filtered = apply_filters(jsa, filters.signal, filters.idler);
    result = schmidt_decompose(filtered.jsa);
    const auto h = spectral_heralding_efficiency(jsa, filters.signal, filters.idler);
    io::write_schmidt_report(rep, result);
    rep << "heralding_definition = " << h.definition << '\n'
        << "heralding_signal = " << io::format_value(h.signal) << '\n'
        << "heralding_idler = " << io::format_value(h.idler) << '\n'
        << "joint_pass = " << io::format_value(h.joint_pass) << '\n';
  } else {
    result = schmidt_decompose(jsa);
    io::write_schmidt_report(rep, result);
  }
  run.artifacts.push_back({"schmidt.txt", rep.str()});
  run.artifacts.push_back({"schmidt_coefficients.csv", render([&](std::ostream& os) {
                             io::write_schmidt_coefficients_csv(os, result);
                           })});
  run.summary.push_back("purity " + io::format_value(result.purity));
  return run;
}

Run cmd_sweep(const Options& o) {
  Run run;
  const auto model = resolve_dispersion(o, run);
  const auto rd = resolve_design(o.design, run);
  const auto grid = resolve_grid(o.grid, 512, run);
  run.parameters["pump_center_nm"] = o.pump.center_nm;

  const auto pmf = phi_grid(domains(rd.design), model, grid);
  run.summary.push_back(
      sweep_artifacts(run, pmf, o.sweep, o.pump.center_nm, resolve_source(o.sweep.source, rd.source)));
  return run;
}

Run cmd_compare(const Options& o) {
  Run run;
  const auto model = resolve_dispersion(o, run);
  const auto grid = resolve_grid(o.grid, 512, run);

  std::vector<DesignCase> cases;
  if (o.named_designs.empty()) {
    const auto p = generator_params(o.design);
    cases.push_back({"cpktp", gaussian_apodized_design(p)});
    cases.push_back({"ppktp", uniform_design(p.total_length_um, p.base_period_um)});
    run.parameters["designs"] = {{"generator", "gaussian+uniform"},
                                 {"length_um", p.total_length_um},
                                 {"fwhm_um", p.target_fwhm_um},
                                 {"base_period_um", p.base_period_um},
                                 {"max_order", p.max_order},
                                 {"parity", o.design.parity},
                                 {"quantizer", o.design.quantizer}};
  } else {
    Json list = Json::array();
    for (const auto& spec : o.named_designs) {
      const auto eq = spec.find('=');
      if (eq == std::string::npos || eq == 0 || eq + 1 == spec.size()) {
        usage_fail("--design expects NAME=PATH, got '" + spec + "'");
      }
      const std::string name = spec.substr(0, eq);
      const std::string path = spec.substr(eq + 1);
      run.inputs.push_back(path);
      list.push_back({{"name", name}, {"file", path}});
      cases.push_back({name, io::load_design(path)});
    }
    run.parameters["designs"] = list;
  }

  CompareOptions opts;
  opts.pump_center_nm = o.pump.center_nm;
  opts.range = {o.sweep.lo_nm, o.sweep.hi_nm};
  opts.n_points = o.sweep.points;
  opts.filter_width_nm = o.filter.width_nm;
  run.parameters["compare"] = {{"pump_center_nm", opts.pump_center_nm},
                               {"lo_nm", opts.range.lo_nm},
                               {"hi_nm", opts.range.hi_nm},
                               {"points", opts.n_points},
                               {"filter_width_nm", opts.filter_width_nm}};

  const auto rows = compare_designs(cases, model, grid, opts);
  run.artifacts.push_back(
      {"comparison.csv", render([&](std::ostream& os) { io::write_comparison_csv(os, rows); })});
  const auto text = render([&](std::ostream& os) { io::write_comparison_text(os, rows); });
  run.artifacts.push_back({"comparison.txt", text});
  run.summary.push_back(text);
  return run;
}

Run cmd_sfg_import(const Options& o) {
  Run run;
  run.inputs.push_back(o.intensity_file);
  run.parameters["intensity"] = o.intensity_file;
  run.parameters["noise_floor"] = o.noise_floor;

  const auto data = io::load_real_grid_csv(o.intensity_file);
  MeasuredImportOptions imp;
  imp.noise_floor = o.noise_floor;
  const auto pmf = pmf_from_measured(data.grid, data.values, imp);

  run.artifacts.push_back({"pmf_reconstructed.csv", render([&](std::ostream& os) {
                             io::write_grid_csv(os, pmf.grid, Eigen::MatrixXd(pmf.amplitude.real()));
                           })});
  if (o.pump.fwhm_nm) {
    const auto pump = resolve_pump(o.pump, run);
    const auto result = schmidt_decompose(build_jsa(pump_envelope(pump, pmf.grid), pmf));
    run.artifacts.push_back(
        {"schmidt.txt", render([&](std::ostream& os) { io::write_schmidt_report(os, result); })});
    run.artifacts.push_back({"schmidt_coefficients.csv", render([&](std::ostream& os) {
                               io::write_schmidt_coefficients_csv(os, result);
                             })});
    run.summary.push_back("purity " + io::format_value(result.purity));
  }
  if (o.import_sweep) {
    run.parameters["pump_center_nm"] = o.pump.center_nm;
    run.summary.push_back(sweep_artifacts(run, pmf, o.sweep, o.pump.center_nm,
                                          resolve_source(o.sweep.source, CurveSource::measured_cpktp)));
  }
  return run;
}

// ---------------------------------------------------------------------------
// Output

void check_output_dir(const fs::path& dir) {
  std::error_code ec;
  if (fs::exists(dir, ec)) {
    if (!fs::is_directory(dir, ec)) throw Error(ErrorCode::io, dir.string() + " is not a directory");
    return;
  }
  const fs::path parent = dir.has_parent_path() ? dir.parent_path() : fs::path(".");
  if (!fs::exists(parent, ec)) {
    throw Error(ErrorCode::io, "parent of output directory does not exist: " + parent.string());
  }
}

void write_outputs(const Options& o, const std::string& command, const Run& run) {
  const fs::path dir(o.out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::io, "cannot create " + dir.string() + ": " + ec.message());

  Json outputs = Json::array();
  for (const auto& a : run.artifacts) {
    std::ofstream f(dir / a.name, std::ios::binary | std::ios::trunc);
    f << a.content;
    f.close();
    if (!f) throw Error(ErrorCode::io, "cannot write " + (dir / a.name).string());
    outputs.push_back({{"file", a.name}, {"bytes", a.content.size()}, {"sha256", sha256_hex(a.content)}});
  }
  Json inputs = Json::array();
  for (const auto& p : run.inputs) inputs.push_back({{"path", p}, {"sha256", sha256_file(p)}});

  Json manifest = {{"tool", "qpmsynth"},
                   {"version", QPMSYNTH_VERSION},
                   {"command", command},
                   {"created_utc", utc_timestamp()},
                   {"parameters", run.parameters},
                   {"inputs", inputs},
                   {"outputs", outputs}};
  std::ofstream m(dir / "manifest.json", std::ios::binary | std::ios::trunc);
  m << manifest.dump(2) << '\n';
  m.close();
  if (!m) throw Error(ErrorCode::io, "cannot write manifest.json");
}

// ---------------------------------------------------------------------------
// Option registration

void add_output(CLI::App* app, Options& o) {
  app->add_option("-o,--out", o.out_dir, "Output directory")->required();
}

void add_dispersion(CLI::App* app, Options& o) {
  app->add_option("--dispersion", o.dispersion, "Dispersion config (JSON)")->capture_default_str();
}

void add_grid(CLI::App* app, Options& o) {
  app->add_option("--grid-start", o.grid.start_nm, "First wavelength of both axes, nm")
      ->capture_default_str();
  app->add_option("--grid-stop", o.grid.stop_nm, "Last wavelength of both axes, nm")
      ->capture_default_str();
  app->add_option("--grid-points", o.grid.points, "Points per axis (default 1024 for pmf, else 512)")
      ->check(CLI::PositiveNumber);
}

void add_generator(CLI::App* app, Options& o, bool allow_file) {
  if (allow_file) {
    app->add_option("--design", o.design.design_file, "Design file (JSON); overrides the generator");
  }
  app->add_flag("--uniform", o.design.uniform, "Generate a uniform first-order design instead");
  app->add_option("--length-um", o.design.length_um, "Crystal length, um")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app->add_option("--fwhm-um", o.design.fwhm_um, "Target Gaussian FWHM, um")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app->add_option("--base-period-um", o.design.base_period_um, "First-order poling period, um")
      ->check(CLI::PositiveNumber);
  app->add_option("--max-order", o.design.max_order, "Highest QPM order")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app->add_option("--parity", o.design.parity, "Allowed orders")
      ->check(CLI::IsMember({"odd", "all"}))
      ->capture_default_str();
  app->add_option("--quantizer", o.design.quantizer, "Order quantizer")
      ->check(CLI::IsMember({"area-matching", "midpoint"}))
      ->capture_default_str();
}

void add_pump(CLI::App* app, Options& o) {
  app->add_option("--pump-center", o.pump.center_nm, "Pump center wavelength, nm")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app->add_option("--pump-fwhm", o.pump.fwhm_nm, "Pump intensity FWHM, nm")->check(CLI::PositiveNumber);
}

void add_filters(CLI::App* app, Options& o) {
  app->add_option("--filter", o.filter.shape, "Filter shape on both arms")
      ->check(CLI::IsMember({"none", "flat-top"}))
      ->capture_default_str();
  app->add_option("--filter-width", o.filter.width_nm, "Flat-top full width, nm")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app->add_option("--signal-filter-center", o.filter.signal_center_nm,
                  "Signal filter center, nm (default: marginal peak)");
  app->add_option("--idler-filter-center", o.filter.idler_center_nm,
                  "Idler filter center, nm (default: marginal peak)");
}

void add_sweep(CLI::App* app, Options& o) {
  app->add_option("--bw-lo", o.sweep.lo_nm, "Smallest pump FWHM, nm")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app->add_option("--bw-hi", o.sweep.hi_nm, "Largest pump FWHM, nm")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app->add_option("--bw-points", o.sweep.points, "Number of sweep points")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Design and simulation of multi-order QPM crystals for pure photon pairs", "qpmsynth"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(QPMSYNTH_VERSION));
  app.set_config("--config", "",
                 "TOML/INI file; one [subcommand] section with keys named like the long options");

  Options o;
  std::map<std::string, Run (*)(const Options&)> handlers;

  auto* design = app.add_subcommand("design", "Generate a poling design and its profile");
  add_output(design, o);
  add_generator(design, o, true);
  design->add_option("--profile-samples", o.profile_samples, "Samples of the profile CSV")
      ->capture_default_str();
  handlers["design"] = cmd_design;

  auto* pmf = app.add_subcommand("pmf", "Phase-matching function grid, cut and sidelobe metric");
  add_output(pmf, o);
  add_dispersion(pmf, o);
  add_generator(pmf, o, true);
  add_grid(pmf, o);
  pmf->add_option("--cut-pump", o.cut_pump_nm, "Pump wavelength of the anti-diagonal cut, nm")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  handlers["pmf"] = cmd_pmf;

  auto* jsa = app.add_subcommand("jsa", "Joint spectral amplitude and intensity grids");
  add_output(jsa, o);
  add_dispersion(jsa, o);
  add_generator(jsa, o, true);
  add_grid(jsa, o);
  add_pump(jsa, o);
  add_filters(jsa, o);
  handlers["jsa"] = cmd_jsa;

  auto* purity = app.add_subcommand("purity", "Schmidt decomposition and heralding efficiency");
  add_output(purity, o);
  add_dispersion(purity, o);
  add_generator(purity, o, true);
  add_grid(purity, o);
  add_pump(purity, o);
  add_filters(purity, o);
  handlers["purity"] = cmd_purity;

  auto* sweep = app.add_subcommand("sweep", "Purity versus pump bandwidth");
  add_output(sweep, o);
  add_dispersion(sweep, o);
  add_generator(sweep, o, true);
  add_grid(sweep, o);
  add_sweep(sweep, o);
  sweep->add_option("--pump-center", o.pump.center_nm, "Pump center wavelength, nm")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  sweep->add_option("--source", o.sweep.source, "Curve source tag")
      ->check(CLI::IsMember({"auto", "theoretical-cpktp", "theoretical-ppktp", "measured-cpktp", "other"}))
      ->capture_default_str();
  handlers["sweep"] = cmd_sweep;

  auto* compare = app.add_subcommand("compare", "Side-by-side table for several designs");
  add_output(compare, o);
  add_dispersion(compare, o);
  add_generator(compare, o, false);
  compare->add_option("--design", o.named_designs,
                      "NAME=PATH design file, repeatable (default: generated Gaussian vs uniform)");
  add_grid(compare, o);
  add_sweep(compare, o);
  compare->add_option("--pump-center", o.pump.center_nm, "Pump center wavelength, nm")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  compare->add_option("--filter-width", o.filter.width_nm, "Flat-top full width, nm")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  handlers["compare"] = cmd_compare;

  auto* sfg = app.add_subcommand("sfg-import", "Reconstruct a PMF from a measured |phi|^2 grid");
  add_output(sfg, o);
  sfg->add_option("--intensity", o.intensity_file, "Measured intensity grid (CSV)")->required();
  sfg->add_option("--noise-floor", o.noise_floor, "Subtracted before the square root")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  add_pump(sfg, o);
  sfg->add_flag("--sweep", o.import_sweep, "Also sweep purity versus pump bandwidth");
  add_sweep(sfg, o);
  sfg->add_option("--source", o.sweep.source, "Curve source tag")
      ->check(CLI::IsMember({"auto", "theoretical-cpktp", "theoretical-ppktp", "measured-cpktp", "other"}))
      ->capture_default_str();
  handlers["sfg-import"] = cmd_sfg_import;

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e, out, err);
  } catch (const CLI::FileError& e) {
    err << "error [io]: " << e.what() << '\n';
    return exit_code(ErrorCode::io);
  } catch (const CLI::ConfigError& e) {
    err << "error [parse]: " << e.what() << '\n';
    return exit_code(ErrorCode::parse);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return exit_code(ErrorCode::usage);
  }

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    check_output_dir(o.out_dir);
    const Run result = handlers.at(command)(o);
    write_outputs(o, command, result);
    for (const auto& line : result.summary) out << line << (line.ends_with('\n') ? "" : "\n");
    out << "wrote " << result.artifacts.size() + 1 << " files to " << o.out_dir << '\n';
    return 0;
  } catch (const Error& e) {
    err << "error [" << to_string(e.code()) << "]: " << e.what() << '\n';
    return exit_code(e.code());
  } catch (const fs::filesystem_error& e) {
    err << "error [io]: " << e.what() << '\n';
    return exit_code(ErrorCode::io);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return exit_code(ErrorCode::domain);
  }
}

}  // namespace qpmsynth::cli
