#ifndef SALPROP_SEGMENTATION_HPP_
#define SALPROP_SEGMENTATION_HPP_

#include "salprop/imagecore.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <vector>

namespace salprop {

struct SegParams
{
  double sigma{0.8};
  double k{100.0};
  int min_size{100};

  void validate() const;
};

/// Dense partition of the image into superpixels. Labels run 0..R-1.
struct SuperpixelLabeling
{
  LabelMap labels;
  std::vector<std::int64_t> region_sizes;

  int width() const noexcept { return static_cast<int>(labels.cols()); }
  int height() const noexcept { return static_cast<int>(labels.rows()); }
  int num_regions() const noexcept { return static_cast<int>(region_sizes.size()); }
};

/// Normalized 1-D Gaussian taps, radius ceil(3 sigma).
template <typename Scalar>
Eigen::Array<Scalar, Eigen::Dynamic, 1> gaussian_kernel(Scalar sigma)
{
  const int radius = static_cast<int>(std::ceil(3 * sigma));
  Eigen::Array<Scalar, Eigen::Dynamic, 1> k(2 * radius + 1);
  for (int i = -radius; i <= radius; ++i) {
    k(i + radius) = std::exp(-Scalar(i * i) / (2 * sigma * sigma));
  }
  return k / k.sum();
}

/// Separable Gaussian blur with edge clamping. sigma == 0 is the identity.
template <typename Scalar>
RasterT<Scalar> gaussian_smooth(const RasterT<Scalar> & img, Scalar sigma)
{
  if (sigma <= 0) { return img; }
  const auto kernel = gaussian_kernel(sigma);
  const int radius  = static_cast<int>(kernel.size() / 2);
  const int h = static_cast<int>(img.rows()), w = static_cast<int>(img.cols());

  RasterT<Scalar> tmp(h, w), out(h, w);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      Scalar acc = 0;
      for (int i = -radius; i <= radius; ++i) { acc += kernel(i + radius) * img(y, std::clamp(x + i, 0, w - 1)); }
      tmp(y, x) = acc;
    }
  }
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      Scalar acc = 0;
      for (int i = -radius; i <= radius; ++i) { acc += kernel(i + radius) * tmp(std::clamp(y + i, 0, h - 1), x); }
      out(y, x) = acc;
    }
  }
  return out;
}

/**
 * Graph-based (Felzenszwalb-Huttenlocher) segmentation.
 *
 * The image is smoothed with `sigma`, then the 8-connected pixel grid is
 * processed in ascending edge weight (|intensity difference| on the 8-bit
 * scale, ties by source then target pixel index). Two components merge when
 * the edge weight does not exceed either component's internal difference
 * plus k/|C|. A final pass joins any component smaller than `min_size`
 * across its cheapest incident edge.
 */
SuperpixelLabeling segment_image(const Raster & img, const SegParams & params);

/// Same as segment_image but stops before the min_size pass (used by tests).
SuperpixelLabeling segment_image_unmerged(const Raster & img, const SegParams & params);

/// Random-color visualisation of a labeling (deterministic palette).
void save_labeling_png(const std::filesystem::path & path, const SuperpixelLabeling & seg);

}  // namespace salprop

#endif  // SALPROP_SEGMENTATION_HPP_
