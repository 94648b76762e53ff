#include "qpmsynth/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <json.hpp>

#include "qpmsynth/error.hpp"

namespace qpmsynth::io {

using nlohmann::json;

namespace {

[[noreturn]] void parse_fail(const std::string& what) { throw Error(ErrorCode::parse, what); }

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::io, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::io, "cannot write " + path.string());
  out << text;
  if (!out) throw Error(ErrorCode::io, "write failed for " + path.string());
}

json parse_json(const std::string& text, const char* what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    parse_fail(std::string(what) + ": " + e.what());
  }
}

const json& field(const json& obj, const char* key, const std::string& where) {
  if (!obj.is_object() || !obj.contains(key)) parse_fail(where + ": missing field '" + key + "'");
  return obj.at(key);
}

double number(const json& obj, const char* key, const std::string& where) {
  const json& v = field(obj, key, where);
  if (!v.is_number()) parse_fail(where + ": field '" + key + "' must be a number");
  return v.get<double>();
}

template <class Int>
Int integer(const json& obj, const char* key, const std::string& where) {
  const json& v = field(obj, key, where);
  if (!v.is_number_integer()) parse_fail(where + ": field '" + key + "' must be an integer");
  return v.get<Int>();
}

std::string text_field(const json& obj, const char* key, const std::string& where) {
  const json& v = field(obj, key, where);
  if (!v.is_string()) parse_fail(where + ": field '" + key + "' must be a string");
  return v.get<std::string>();
}

std::pair<double, double> range_field(const json& obj, const char* key, const std::string& where) {
  const json& v = field(obj, key, where);
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
    parse_fail(where + ": field '" + key + "' must be [min, max]");
  }
  return {v[0].get<double>(), v[1].get<double>()};
}

CentralWavelengths parse_centers(const json& root) {
  const json& c = field(root, "central_wavelengths_nm", "dispersion");
  return {number(c, "pump", "central_wavelengths_nm"), number(c, "signal", "central_wavelengths_nm"),
          number(c, "idler", "central_wavelengths_nm")};
}

SellmeierAxis parse_axis(const json& a, const std::string& where) {
  SellmeierAxis axis;
  axis.constant = number(a, "constant", where);
  if (a.contains("resonances")) {
    for (const auto& r : a.at("resonances")) {
      axis.resonances.push_back({number(r, "B", where + ".resonances"),
                                 number(r, "C_um2", where + ".resonances")});
    }
  }
  if (a.contains("poles")) {
    for (const auto& p : a.at("poles")) {
      axis.poles.push_back({number(p, "B", where + ".poles"), number(p, "C_um2", where + ".poles")});
    }
  }
  if (a.contains("powers")) {
    for (const auto& p : a.at("powers")) {
      axis.powers.push_back({number(p, "coefficient", where + ".powers"),
                             integer<int>(p, "exponent", where + ".powers")});
    }
  }
  return axis;
}

std::string shortest(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

}  // namespace

// ---------------------------------------------------------------------------
// Dispersion config

DispersionModel parse_dispersion(const std::string& text) {
  const json root = parse_json(text, "dispersion config");
  const std::string kind = text_field(root, "model", "dispersion");
  try {
    if (kind == "sellmeier") {
      SellmeierModel m;
      const auto [lo, hi] = range_field(root, "valid_range_um", "dispersion");
      m.valid_min_um = lo;
      m.valid_max_um = hi;
      m.centers = parse_centers(root);
      const json& assign = field(root, "assignment", "dispersion");
      m.assignment = {text_field(assign, "pump", "assignment"),
                      text_field(assign, "signal", "assignment"),
                      text_field(assign, "idler", "assignment")};
      const json& axes = field(root, "axes", "dispersion");
      if (!axes.is_object()) parse_fail("dispersion: 'axes' must be an object");
      for (const auto& [label, a] : axes.items()) m.axes.emplace(label, parse_axis(a, "axes." + label));
      return DispersionModel::sellmeier(std::move(m));
    }
    if (kind == "linearized") {
      LinearizedModel m;
      const auto [lo, hi] = range_field(root, "valid_range_nm", "dispersion");
      m.valid_min_nm = lo;
      m.valid_max_nm = hi;
      m.centers = parse_centers(root);
      const json& waves = field(root, "waves", "dispersion");
      for (Wave w : {Wave::pump, Wave::signal, Wave::idler}) {
        const std::string where = std::string("waves.") + to_string(w);
        const json& t = field(waves, to_string(w), "waves");
        m.waves[static_cast<int>(w)] = {number(t, "k0_rad_per_um", where),
                                        number(t, "group_slowness_fs_per_um", where)};
      }
      return DispersionModel::linearized(std::move(m));
    }
  } catch (const json::exception& e) {
    parse_fail(std::string("dispersion config: ") + e.what());
  }
  parse_fail("dispersion: unknown model '" + kind + "' (expected sellmeier or linearized)");
}

DispersionModel load_dispersion(const std::filesystem::path& path) {
  return parse_dispersion(read_file(path));
}

// ---------------------------------------------------------------------------
// Design file

std::string design_to_string(const CrystalDesign& design) {
  using ordered = nlohmann::ordered_json;
  ordered segs = ordered::array();
  for (const auto& s : design.segments()) {
    segs.push_back({{"order", s.order},
                    {"duty", s.duty},
                    {"periods", s.periods},
                    {"phase_offset", s.phase_offset}});
  }
  ordered root = {{"format", "qpmsynth-design"},
               {"version", 1},
               {"base_period_um", design.base_period_um()},
               {"total_length_um", design.total_length_um()},
               {"segments", segs}};
  return root.dump(2) + "\n";
}

CrystalDesign parse_design(const std::string& text) {
  const json root = parse_json(text, "design file");
  if (text_field(root, "format", "design") != "qpmsynth-design") {
    parse_fail("design: unexpected format tag");
  }
  if (integer<int>(root, "version", "design") != 1) parse_fail("design: unsupported version");
  const double base = number(root, "base_period_um", "design");
  const json& segs = field(root, "segments", "design");
  if (!segs.is_array()) parse_fail("design: 'segments' must be an array");

  std::vector<PolingSegment> segments;
  for (std::size_t k = 0; k < segs.size(); ++k) {
    const std::string where = "segments[" + std::to_string(k) + "]";
    PolingSegment s;
    s.order = integer<int>(segs[k], "order", where);
    s.duty = number(segs[k], "duty", where);
    s.periods = integer<std::int64_t>(segs[k], "periods", where);
    s.phase_offset = segs[k].contains("phase_offset") ? number(segs[k], "phase_offset", where) : 0.0;
    s.period_um = s.order * base;
    segments.push_back(s);
  }
  try {
    CrystalDesign design(base, std::move(segments));
    const double declared = number(root, "total_length_um", "design");
    if (std::abs(declared - design.total_length_um()) > 1e-6) {
      parse_fail("design: total_length_um disagrees with the segment sum");
    }
    return design;
  } catch (const Error& e) {
    if (e.code() == ErrorCode::parse) throw;
    parse_fail(std::string("design: ") + e.what());
  }
}

void save_design(const CrystalDesign& design, const std::filesystem::path& path) {
  write_file(path, design_to_string(design));
}

CrystalDesign load_design(const std::filesystem::path& path) { return parse_design(read_file(path)); }

// ---------------------------------------------------------------------------
// Grid CSV

std::string format_value(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

namespace {

void write_axis(std::ostream& os, const char* name, const UniformAxis& a) {
  os << name << ',' << shortest(a.start_nm) << ',' << shortest(a.stop_nm) << ',' << a.count
     << ",nm\n";
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double to_double(const std::string& s, std::size_t line) {
  double v = 0.0;
  const char* b = s.data();
  const char* e = s.data() + s.size();
  while (b < e && (*b == ' ' || *b == '\t')) ++b;
  while (e > b && (e[-1] == ' ' || e[-1] == '\r' || e[-1] == '\t')) --e;
  auto res = std::from_chars(b, e, v);
  if (res.ec != std::errc() || res.ptr != e) {
    parse_fail("grid csv line " + std::to_string(line) + ": invalid number '" + s + "'");
  }
  return v;
}

UniformAxis read_axis(std::istream& is, const char* expected, std::size_t line) {
  std::string text;
  if (!std::getline(is, text)) parse_fail("grid csv: missing axis header for " + std::string(expected));
  if (!text.empty() && text.back() == '\r') text.pop_back();
  const auto cells = split(text);
  if (cells.size() != 5 || cells[0] != expected || cells[4] != "nm") {
    parse_fail("grid csv line " + std::to_string(line) + ": expected '" + expected +
               ",<start>,<stop>,<count>,nm'");
  }
  const double count = to_double(cells[3], line);
  if (count < 1 || count != std::floor(count)) {
    parse_fail("grid csv line " + std::to_string(line) + ": count must be a positive integer");
  }
  try {
    return UniformAxis(to_double(cells[1], line), to_double(cells[2], line),
                       static_cast<std::size_t>(count));
  } catch (const Error& e) {
    parse_fail("grid csv line " + std::to_string(line) + ": " + e.what());
  }
}

template <class Matrix, class Emit>
void write_rows(std::ostream& os, const SpectralGrid& grid, const Matrix& values, Emit emit) {
  if (values.rows() != static_cast<Eigen::Index>(grid.signal.count) ||
      values.cols() != static_cast<Eigen::Index>(grid.idler.count)) {
    throw Error(ErrorCode::shape, "grid values do not match the axes");
  }
  write_axis(os, "signal", grid.signal);
  write_axis(os, "idler", grid.idler);
  std::string row;
  for (Eigen::Index i = 0; i < values.rows(); ++i) {
    row.clear();
    for (Eigen::Index j = 0; j < values.cols(); ++j) {
      if (j) row += ',';
      emit(row, values(i, j));
    }
    row += '\n';
    os << row;
  }
}

/// Returns the grid and the raw rows (each row's cells parsed as doubles).
std::pair<SpectralGrid, std::vector<std::vector<double>>> read_rows(std::istream& is) {
  SpectralGrid grid;
  grid.signal = read_axis(is, "signal", 1);
  grid.idler = read_axis(is, "idler", 2);
  std::vector<std::vector<double>> rows;
  std::string text;
  std::size_t line = 2;
  while (std::getline(is, text)) {
    ++line;
    if (!text.empty() && text.back() == '\r') text.pop_back();
    if (text.empty()) continue;
    std::vector<double> row;
    for (const auto& cell : split(text)) row.push_back(to_double(cell, line));
    rows.push_back(std::move(row));
  }
  if (rows.size() != grid.signal.count) {
    parse_fail("grid csv: expected " + std::to_string(grid.signal.count) + " rows, found " +
               std::to_string(rows.size()));
  }
  return {grid, std::move(rows)};
}

}  // namespace

void write_grid_csv(std::ostream& os, const SpectralGrid& grid, const Eigen::MatrixXd& values) {
  write_rows(os, grid, values, [](std::string& row, double v) { row += format_value(v); });
}

void write_grid_csv(std::ostream& os, const SpectralGrid& grid, const Eigen::MatrixXcd& values) {
  write_rows(os, grid, values, [](std::string& row, std::complex<double> v) {
    row += format_value(v.real());
    row += ',';
    row += format_value(v.imag());
  });
}

RealGridData read_real_grid_csv(std::istream& is) {
  auto [grid, rows] = read_rows(is);
  RealGridData out{grid, Eigen::MatrixXd(static_cast<Eigen::Index>(grid.signal.count),
                                         static_cast<Eigen::Index>(grid.idler.count))};
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != grid.idler.count) {
      parse_fail("grid csv row " + std::to_string(i) + ": expected " +
                 std::to_string(grid.idler.count) + " values");
    }
    for (std::size_t j = 0; j < rows[i].size(); ++j) {
      out.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    }
  }
  return out;
}

ComplexGridData read_complex_grid_csv(std::istream& is) {
  auto [grid, rows] = read_rows(is);
  ComplexGridData out{grid, Eigen::MatrixXcd(static_cast<Eigen::Index>(grid.signal.count),
                                             static_cast<Eigen::Index>(grid.idler.count))};
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != 2 * grid.idler.count) {
      parse_fail("grid csv row " + std::to_string(i) + ": expected " +
                 std::to_string(2 * grid.idler.count) + " values (re,im pairs)");
    }
    for (std::size_t j = 0; j < grid.idler.count; ++j) {
      out.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = {rows[i][2 * j],
                                                                               rows[i][2 * j + 1]};
    }
  }
  return out;
}

RealGridData load_real_grid_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::io, "cannot open " + path.string());
  return read_real_grid_csv(in);
}

// ---------------------------------------------------------------------------
// Reports

void write_schmidt_report(std::ostream& os, const SchmidtResult& r) {
  double sum = 0.0;
  for (double c : r.coefficients) sum += c;
  os << "purity = " << format_value(r.purity) << '\n'
     << "schmidt_number = " << format_value(r.schmidt_number) << '\n'
     << "heralded_g2 = " << format_value(r.heralded_g2) << '\n'
     << "coefficient_count = " << r.coefficients.size() << '\n'
     << "coefficient_sum = " << format_value(sum) << '\n';
}

void write_schmidt_coefficients_csv(std::ostream& os, const SchmidtResult& r) {
  os << "k,lambda\n";
  for (std::size_t k = 0; k < r.coefficients.size(); ++k) {
    os << k << ',' << format_value(r.coefficients[k]) << '\n';
  }
}

void write_columns_csv(std::ostream& os, const std::vector<std::string>& header,
                       const std::vector<std::vector<double>>& columns) {
  if (header.size() != columns.size()) throw Error(ErrorCode::shape, "header/column count mismatch");
  for (std::size_t c = 0; c < header.size(); ++c) os << (c ? "," : "") << header[c];
  os << '\n';
  const std::size_t n = columns.empty() ? 0 : columns.front().size();
  for (const auto& col : columns) {
    if (col.size() != n) throw Error(ErrorCode::shape, "columns differ in length");
  }
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < columns.size(); ++c) os << (c ? "," : "") << format_value(columns[c][r]);
    os << '\n';
  }
}

void write_curve_csv(std::ostream& os, const SweepCurve& curve) {
  write_columns_csv(os, {"pump_fwhm_nm", "purity"}, {curve.bandwidths_nm, curve.purities});
}

namespace {

std::vector<std::vector<std::string>> comparison_cells(std::span<const ComparisonRow> rows) {
  std::vector<std::vector<std::string>> out;
  out.push_back({"design", "optimal_fwhm_nm", "max_purity", "boundary_optimum", "sidelobe_db",
                 "filtered_purity", "heralding_signal", "heralding_idler", "joint_pass",
                 "heralding_definition", "filter_signal_center_nm", "filter_idler_center_nm"});
  for (const auto& r : rows) {
    out.push_back({r.name, format_value(r.optimum.bandwidth_nm), format_value(r.optimum.purity),
                   r.optimum.at_boundary ? "yes" : "no",
                   r.sidelobe_db ? format_value(*r.sidelobe_db) : "no-sidelobe",
                   format_value(r.filtered_purity), format_value(r.heralding.signal),
                   format_value(r.heralding.idler), format_value(r.heralding.joint_pass),
                   std::string(r.heralding.definition), format_value(r.filter_signal_center_nm),
                   format_value(r.filter_idler_center_nm)});
  }
  return out;
}

}  // namespace

void write_comparison_csv(std::ostream& os, std::span<const ComparisonRow> rows) {
  for (const auto& line : comparison_cells(rows)) {
    for (std::size_t c = 0; c < line.size(); ++c) os << (c ? "," : "") << line[c];
    os << '\n';
  }
}

void write_comparison_text(std::ostream& os, std::span<const ComparisonRow> rows) {
  const auto cells = comparison_cells(rows);
  std::vector<std::size_t> width(cells.front().size(), 0);
  for (const auto& line : cells) {
    for (std::size_t c = 0; c < line.size(); ++c) width[c] = std::max(width[c], line[c].size());
  }
  for (const auto& line : cells) {
    for (std::size_t c = 0; c < line.size(); ++c) {
      os << (c ? "  " : "") << std::left << std::setw(static_cast<int>(width[c])) << line[c];
    }
    os << '\n';
  }
}

}  // namespace qpmsynth::io
