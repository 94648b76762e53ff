#include "qpmsynth/grid.hpp"

#include <cmath>

#include "qpmsynth/error.hpp"

namespace qpmsynth {

UniformAxis::UniformAxis(double start, double stop, std::size_t n)
    : start_nm(start), stop_nm(stop), count(n) {
  if (n == 0) throw Error(ErrorCode::domain, "axis needs at least one point");
  if (!std::isfinite(start) || !std::isfinite(stop) || !(start > 0.0)) {
    throw Error(ErrorCode::domain, "axis wavelengths must be positive and finite");
  }
  if (n == 1 ? start != stop : !(stop > start)) {
    throw Error(ErrorCode::domain, "axis must be strictly increasing");
  }
}

double UniformAxis::step() const noexcept {
  return count > 1 ? (stop_nm - start_nm) / static_cast<double>(count - 1) : 0.0;
}

double UniformAxis::operator[](std::size_t i) const noexcept {
  if (count <= 1) return start_nm;
  if (i + 1 == count) return stop_nm;
  return start_nm + static_cast<double>(i) * step();
}

std::vector<double> UniformAxis::values() const {
  std::vector<double> v(count);
  for (std::size_t i = 0; i < count; ++i) v[i] = (*this)[i];
  return v;
}

double SpectralGrid::cell_area() const noexcept {
  const double ds = signal.count > 1 ? signal.step() : 1.0;
  const double di = idler.count > 1 ? idler.step() : 1.0;
  return ds * di;
}

SpectralGrid square_grid(double start_nm, double stop_nm, std::size_t n) {
  UniformAxis axis(start_nm, stop_nm, n);
  return {axis, axis};
}

}  // namespace qpmsynth
