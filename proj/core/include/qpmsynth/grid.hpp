#pragma once

#include <cstddef>
#include <vector>

namespace qpmsynth {

/// Uniformly spaced wavelength axis in nm. A single-point axis has
/// start == stop.
struct UniformAxis {
  double start_nm = 0.0;
  double stop_nm = 0.0;
  std::size_t count = 0;

  UniformAxis() = default;
  UniformAxis(double start, double stop, std::size_t n);

  double step() const noexcept;
  double operator[](std::size_t i) const noexcept;
  std::vector<double> values() const;

  bool operator==(const UniformAxis&) const = default;
};

/// Signal (rows) by idler (columns) wavelength grid.
struct SpectralGrid {
  UniformAxis signal;
  UniformAxis idler;

  /// Area element in nm^2 used for normalization; a single-point axis
  /// contributes a unit width.
  double cell_area() const noexcept;

  bool operator==(const SpectralGrid&) const = default;
};

/// Square grid with the same axis for signal and idler.
SpectralGrid square_grid(double start_nm, double stop_nm, std::size_t n);

}  // namespace qpmsynth
