#include "salprop/segmentation.hpp"

#include "salprop/image_io.hpp"

#include <numeric>
#include <tuple>

namespace salprop {

namespace {

// Edge weights live on the 8-bit intensity scale so that k keeps the meaning
// it has in the reference FH implementation.
constexpr double kIntensityScale = 255.0;

struct Edge
{
  double w;
  std::int32_t a, b;

  bool operator<(const Edge & o) const noexcept
  {
    return std::tie(w, a, b) < std::tie(o.w, o.a, o.b);
  }
};

class DisjointSets
{
public:
  explicit DisjointSets(std::size_t n) : parent_(n), rank_(n, 0), size_(n, 1)
  {
    std::iota(parent_.begin(), parent_.end(), 0);
  }

  std::int32_t find(std::int32_t x)
  {
    std::int32_t root = x;
    while (parent_[root] != root) { root = parent_[root]; }
    while (parent_[x] != root) {
      const std::int32_t next = parent_[x];
      parent_[x]              = root;
      x                       = next;
    }
    return root;
  }

  // Returns the surviving root.
  std::int32_t join(std::int32_t a, std::int32_t b)
  {
    if (rank_[a] < rank_[b]) { std::swap(a, b); }
    parent_[b] = a;
    size_[a] += size_[b];
    if (rank_[a] == rank_[b]) { ++rank_[a]; }
    return a;
  }

  std::int64_t size(std::int32_t root) const { return size_[root]; }

private:
  std::vector<std::int32_t> parent_;
  std::vector<std::int32_t> rank_;
  std::vector<std::int64_t> size_;
};

std::vector<Edge> grid_edges(const Raster & smooth)
{
  const int h = static_cast<int>(smooth.rows()), w = static_cast<int>(smooth.cols());
  std::vector<Edge> edges;
  edges.reserve(static_cast<std::size_t>(w) * h * 4);
  auto add = [&](int x, int y, int nx, int ny) {
    const double d = std::abs(smooth(y, x) - smooth(ny, nx)) * kIntensityScale;
    edges.push_back({d, y * w + x, ny * w + nx});
  };
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (x + 1 < w) { add(x, y, x + 1, y); }
      if (y + 1 < h) { add(x, y, x, y + 1); }
      if (x + 1 < w && y + 1 < h) { add(x, y, x + 1, y + 1); }
      if (x + 1 < w && y > 0) { add(x, y, x + 1, y - 1); }
    }
  }
  std::sort(edges.begin(), edges.end());
  return edges;
}

SuperpixelLabeling relabel(DisjointSets & sets, int w, int h)
{
  SuperpixelLabeling seg;
  seg.labels.resize(h, w);
  std::vector<std::int32_t> dense(static_cast<std::size_t>(w) * h, -1);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const std::int32_t root = sets.find(y * w + x);
      if (dense[root] < 0) {
        dense[root] = static_cast<std::int32_t>(seg.region_sizes.size());
        seg.region_sizes.push_back(0);
      }
      seg.labels(y, x) = dense[root];
      ++seg.region_sizes[dense[root]];
    }
  }
  return seg;
}

SuperpixelLabeling run_fh(const Raster & img, const SegParams & params, bool merge_small)
{
  params.validate();
  if (img.size() == 0) { throw Error(ErrorCode::DimensionMismatch, "empty raster"); }
  const Raster smooth = gaussian_smooth<double>(img, params.sigma);
  const int h = static_cast<int>(img.rows()), w = static_cast<int>(img.cols());
  const std::vector<Edge> edges = grid_edges(smooth);

  DisjointSets sets(static_cast<std::size_t>(w) * h);
  std::vector<double> threshold(static_cast<std::size_t>(w) * h, params.k);
  for (const Edge & e : edges) {
    const std::int32_t a = sets.find(e.a), b = sets.find(e.b);
    if (a == b) { continue; }
    if (e.w <= threshold[a] && e.w <= threshold[b]) {
      const std::int32_t r = sets.join(a, b);
      threshold[r]         = e.w + params.k / static_cast<double>(sets.size(r));
    }
  }

  if (merge_small) {
    for (const Edge & e : edges) {
      const std::int32_t a = sets.find(e.a), b = sets.find(e.b);
      if (a != b && (sets.size(a) < params.min_size || sets.size(b) < params.min_size)) {
        sets.join(a, b);
      }
    }
  }
  return relabel(sets, w, h);
}

}  // namespace

void SegParams::validate() const
{
  if (!(sigma >= 0) || !(k > 0) || min_size < 1) {
    throw Error(ErrorCode::ConfigError, "segmentation parameters need sigma >= 0, k > 0, min_size >= 1");
  }
}

SuperpixelLabeling segment_image(const Raster & img, const SegParams & params)
{
  return run_fh(img, params, true);
}

SuperpixelLabeling segment_image_unmerged(const Raster & img, const SegParams & params)
{
  return run_fh(img, params, false);
}

void save_labeling_png(const std::filesystem::path & path, const SuperpixelLabeling & seg)
{
  const int w = seg.width(), h = seg.height();
  std::vector<std::uint8_t> rgb(static_cast<std::size_t>(w) * h * 3);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      // splitmix-style hash of the label gives a stable palette
      std::uint64_t z = static_cast<std::uint64_t>(seg.labels(y, x)) + 0x9e3779b97f4a7c15ULL;
      z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
      z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
      z ^= z >> 31;
      const std::size_t i = (static_cast<std::size_t>(y) * w + x) * 3;
      rgb[i]              = static_cast<std::uint8_t>(z);
      rgb[i + 1]          = static_cast<std::uint8_t>(z >> 8);
      rgb[i + 2]          = static_cast<std::uint8_t>(z >> 16);
    }
  }
  save_rgb_png(path, w, h, rgb);
}

}  // namespace salprop
