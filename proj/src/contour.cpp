#include "salprop/contour.hpp"

#include "salprop/image_io.hpp"

#include <sstream>

namespace salprop {

ContourMap::ContourMap(Raster values) : values_(std::move(values))
{
  if (values_.size() == 0) { throw Error(ErrorCode::ParseError, "empty contour map"); }
  if (!(values_ >= 0.0).all() || !(values_ <= 1.0).all()) {
    throw Error(ErrorCode::ParseError, "contour responses must lie in [0,1]");
  }
}

ContourMap load_contour_map(const std::filesystem::path & path, int expected_w, int expected_h)
{
  const DecodedImage d = decode_image(path);
  if (d.channels != 1) {
    throw Error(ErrorCode::ParseError, path.string() + ": contour map must be single-channel");
  }
  if (d.width != expected_w || d.height != expected_h) {
    std::ostringstream ss;
    ss << path.string() << ": contour is " << d.width << 'x' << d.height << ", image is "
       << expected_w << 'x' << expected_h;
    throw Error(ErrorCode::DimensionMismatch, ss.str());
  }
  Raster values(d.height, d.width);
  for (int y = 0; y < d.height; ++y) {
    for (int x = 0; x < d.width; ++x) {
      values(y, x) = static_cast<double>(d.samples[static_cast<std::size_t>(y) * d.width + x]) / d.maxval;
    }
  }
  return ContourMap(std::move(values));
}

ContourMap sobel_contour(const Raster & img) { return ContourMap(sobel_magnitude<double>(img)); }

}  // namespace salprop
