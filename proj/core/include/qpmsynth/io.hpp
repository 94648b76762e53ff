#pragma once

#include <complex>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "qpmsynth/dispersion.hpp"
#include "qpmsynth/grid.hpp"
#include "qpmsynth/poling.hpp"
#include "qpmsynth/schmidt.hpp"
#include "qpmsynth/sweep.hpp"

namespace qpmsynth::io {

// Dispersion config (JSON). See docs/formats.md for the schema.
DispersionModel parse_dispersion(const std::string& text);
DispersionModel load_dispersion(const std::filesystem::path& path);

// Design file (JSON): base period, total length, segments with lengths in
// whole periods. save -> load is bit-exact.
std::string design_to_string(const CrystalDesign& design);
CrystalDesign parse_design(const std::string& text);
void save_design(const CrystalDesign& design, const std::filesystem::path& path);
CrystalDesign load_design(const std::filesystem::path& path);

// Grid CSV: two header lines
//   signal,<start>,<stop>,<count>,nm
//   idler,<start>,<stop>,<count>,nm
// followed by one row per signal wavelength. Real grids carry one value per
// idler wavelength; complex grids carry re,im pairs. Values use 9
// significant digits.
void write_grid_csv(std::ostream& os, const SpectralGrid& grid, const Eigen::MatrixXd& values);
void write_grid_csv(std::ostream& os, const SpectralGrid& grid, const Eigen::MatrixXcd& values);

struct RealGridData {
  SpectralGrid grid;
  Eigen::MatrixXd values;
};
struct ComplexGridData {
  SpectralGrid grid;
  Eigen::MatrixXcd values;
};
RealGridData read_real_grid_csv(std::istream& is);
ComplexGridData read_complex_grid_csv(std::istream& is);
RealGridData load_real_grid_csv(const std::filesystem::path& path);

// Flat key = value report followed by nothing else; coefficients go to a
// separate one-column CSV.
void write_schmidt_report(std::ostream& os, const SchmidtResult& result);
void write_schmidt_coefficients_csv(std::ostream& os, const SchmidtResult& result);

void write_curve_csv(std::ostream& os, const SweepCurve& curve);
void write_comparison_csv(std::ostream& os, std::span<const ComparisonRow> rows);
void write_comparison_text(std::ostream& os, std::span<const ComparisonRow> rows);

/// Column-oriented CSV with a header row; values in 9 significant digits.
void write_columns_csv(std::ostream& os, const std::vector<std::string>& header,
                       const std::vector<std::vector<double>>& columns);

/// Formats a double with 9 significant digits.
std::string format_value(double v);

}  // namespace qpmsynth::io
