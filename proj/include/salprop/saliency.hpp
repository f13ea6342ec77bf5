#ifndef SALPROP_SALIENCY_HPP_
#define SALPROP_SALIENCY_HPP_

#include "salprop/contour.hpp"
#include "salprop/imagecore.hpp"
#include "salprop/segmentation.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <filesystem>
#include <limits>
#include <span>
#include <vector>

namespace salprop {

struct GraphEdge
{
  int u{0}, v{0};
  double weight{0.0};              // D(u,v): mean contour response over the shared boundary
  std::int64_t boundary_length{0}; // |l(u,v)|
};

/**
 * Superpixel adjacency graph restricted to a window.
 *
 * Nodes are the superpixels owning at least one pixel of the window, ordered
 * by global label. `local_nodes` maps every window pixel to its node index,
 * which lets callers count a node's pixels inside any sub-box of the window.
 */
class RegionGraph
{
public:
  struct Neighbor
  {
    int node;
    double weight;
  };

  RegionGraph() = default;

  /// Validates: no self-loops, no duplicate edges, non-negative weights, indices in range.
  RegionGraph(BBox window, std::vector<std::int32_t> labels, std::vector<std::int64_t> sizes,
              LabelMap local_nodes, std::vector<GraphEdge> edges);

  /// Abstract graph with unit node sizes and no pixel layout; used for oracle tests.
  static RegionGraph from_edges(int num_nodes, std::vector<GraphEdge> edges);

  int num_nodes() const noexcept { return static_cast<int>(labels_.size()); }
  const BBox & window() const noexcept { return window_; }
  std::span<const std::int32_t> labels() const noexcept { return labels_; }
  std::span<const std::int64_t> sizes() const noexcept { return sizes_; }
  const LabelMap & local_nodes() const noexcept { return local_nodes_; }
  std::span<const GraphEdge> edges() const noexcept { return edges_; }
  std::span<const Neighbor> neighbors(int node) const { return adjacency_.at(static_cast<std::size_t>(node)); }

  /// Node index for a global superpixel label, or -1.
  int node_of_label(std::int32_t label) const;

  /// Per-node pixel count inside `box` (box must lie within the window).
  Eigen::Matrix<std::int64_t, Eigen::Dynamic, 1> sizes_within(const BBox & box) const;

private:
  BBox window_{};
  std::vector<std::int32_t> labels_;
  std::vector<std::int64_t> sizes_;
  LabelMap local_nodes_;
  std::vector<GraphEdge> edges_;
  std::vector<std::vector<Neighbor>> adjacency_;
};

/// Geodesic saliency per node. Unreachable nodes hold +infinity.
struct SaliencyMap
{
  static constexpr double unreachable = std::numeric_limits<double>::infinity();

  Eigen::VectorXd values;
  std::vector<bool> background;

  int size() const noexcept { return static_cast<int>(values.size()); }
};

/// Edge weight per adjacent superpixel pair: mean contour response over the
/// boundary pixel set of all cross-label 4-neighbour pairs inside the window.
RegionGraph build_region_graph(const SuperpixelLabeling & labeling, const ContourMap & contour,
                               const BBox & window);

/// Shortest-path distance from the background set to every node.
SaliencyMap geodesic_saliency(const RegionGraph & graph, std::span<const int> background);

/// Min-max rescale of finite values into [0,1]; flat maps become all zero, unreachable nodes become 1.
SaliencyMap normalize_saliency(const SaliencyMap & s);

/// Window-sized gray image where every pixel shows its node's (normalized) saliency.
Raster saliency_raster(const RegionGraph & graph, const SaliencyMap & normalized);

void save_saliency_png(const std::filesystem::path & path, const RegionGraph & graph,
                       const SaliencyMap & normalized);

}  // namespace salprop

#endif  // SALPROP_SALIENCY_HPP_
