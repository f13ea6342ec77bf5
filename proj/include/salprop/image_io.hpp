#ifndef SALPROP_IMAGE_IO_HPP_
#define SALPROP_IMAGE_IO_HPP_

#include "salprop/imagecore.hpp"

#include <cstdint>
#include <filesystem>
#include <vector>

namespace salprop {

/// Raw decoded samples of a PNM or PNG file, before any scaling.
struct DecodedImage
{
  int width{0};
  int height{0};
  int channels{0};  // 1 (gray) or 3 (RGB)
  std::uint32_t maxval{255};
  std::vector<std::uint16_t> samples;  // interleaved, row-major
};

DecodedImage decode_image(const std::filesystem::path & path);

/// Load as a [0,1] luminance raster; color input uses 0.299/0.587/0.114 weights.
Raster load_image(const std::filesystem::path & path);

/// Gray raster in [0,1] to an 8-bit file; format chosen by extension (.png, .pgm).
void save_gray(const std::filesystem::path & path, const Raster & img);

/// Interleaved 8-bit RGB to PNG.
void save_rgb_png(const std::filesystem::path & path, int width, int height,
                  const std::vector<std::uint8_t> & rgb);

}  // namespace salprop

#endif  // SALPROP_IMAGE_IO_HPP_
