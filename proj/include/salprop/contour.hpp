#ifndef SALPROP_CONTOUR_HPP_
#define SALPROP_CONTOUR_HPP_

#include "salprop/imagecore.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>

namespace salprop {

/// Per-pixel contour response C(z), values in [0,1].
class ContourMap
{
public:
  ContourMap() = default;

  /// Takes ownership of a response raster; throws ParseError when a value leaves [0,1].
  explicit ContourMap(Raster values);

  const Raster & values() const noexcept { return values_; }
  double operator()(int y, int x) const { return values_(y, x); }
  int width() const noexcept { return static_cast<int>(values_.cols()); }
  int height() const noexcept { return static_cast<int>(values_.rows()); }

private:
  Raster values_;
};

/// Load a precomputed contour raster (8/16-bit grayscale PGM or PNG), scaled by the format maximum.
ContourMap load_contour_map(const std::filesystem::path & path, int expected_w, int expected_h);

/// Sobel gradient magnitude with edge clamping, divided by its global maximum.
template <typename Scalar>
RasterT<Scalar> sobel_magnitude(const RasterT<Scalar> & img)
{
  const int h = static_cast<int>(img.rows()), w = static_cast<int>(img.cols());
  auto at = [&](int y, int x) { return img(std::clamp(y, 0, h - 1), std::clamp(x, 0, w - 1)); };
  RasterT<Scalar> mag(h, w);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const Scalar gx = (at(y - 1, x + 1) + 2 * at(y, x + 1) + at(y + 1, x + 1))
                      - (at(y - 1, x - 1) + 2 * at(y, x - 1) + at(y + 1, x - 1));
      const Scalar gy = (at(y + 1, x - 1) + 2 * at(y + 1, x) + at(y + 1, x + 1))
                      - (at(y - 1, x - 1) + 2 * at(y - 1, x) + at(y - 1, x + 1));
      mag(y, x) = std::sqrt(gx * gx + gy * gy);
    }
  }
  const Scalar peak = mag.maxCoeff();
  if (peak > 0) { mag /= peak; }
  return mag;
}

/// Fallback contour when no precomputed map is available.
ContourMap sobel_contour(const Raster & img);

}  // namespace salprop

#endif  // SALPROP_CONTOUR_HPP_
