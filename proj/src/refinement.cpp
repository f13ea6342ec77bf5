#include "salprop/refinement.hpp"

#include <algorithm>
#include <climits>

namespace salprop {

void RefineParams::validate() const
{
  if (!(threshold > 0.0 && threshold < 1.0)) {
    throw Error(ErrorCode::ConfigError, "threshold T must lie in (0,1)");
  }
  if (deltas.empty()) { throw Error(ErrorCode::ConfigError, "at least one window delta is required"); }
  for (std::size_t i = 0; i < deltas.size(); ++i) {
    if (deltas[i] < 0 || (i > 0 && deltas[i] <= deltas[i - 1])) {
      throw Error(ErrorCode::ConfigError, "window deltas must be non-negative and strictly increasing");
    }
  }
}

BBox enlarge_window(const BBox & b, int delta, int w, int h)
{
  return clamp_box(BBox{b.x1 - delta, b.y1 - delta, b.x2 + delta, b.y2 + delta}, w, h);
}

std::vector<int> select_background_nodes(const RegionGraph & graph)
{
  const LabelMap & local = graph.local_nodes();
  const Eigen::Index h = local.rows(), w = local.cols();
  std::vector<bool> on_ring(static_cast<std::size_t>(graph.num_nodes()), false);
  for (Eigen::Index x = 0; x < w; ++x) {
    on_ring[local(0, x)]     = true;
    on_ring[local(h - 1, x)] = true;
  }
  for (Eigen::Index y = 0; y < h; ++y) {
    on_ring[local(y, 0)]     = true;
    on_ring[local(y, w - 1)] = true;
  }
  std::vector<int> nodes;
  for (int i = 0; i < graph.num_nodes(); ++i) {
    if (on_ring[i]) { nodes.push_back(i); }
  }
  return nodes;
}

std::vector<std::int32_t> select_background_labels(const SuperpixelLabeling & labeling, const BBox & window)
{
  std::vector<std::int32_t> out;
  auto take = [&](int y, int x) { out.push_back(labeling.labels(y, x)); };
  for (int x = window.x1; x < window.x2; ++x) {
    take(window.y1, x);
    take(window.y2 - 1, x);
  }
  for (int y = window.y1; y < window.y2; ++y) {
    take(y, window.x1);
    take(y, window.x2 - 1);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

WindowRefinement refine_window(const BBox & input, int window_index, const SuperpixelLabeling & labeling,
                               const ContourMap & contour, const RefineParams & params)
{
  const int w = labeling.width(), h = labeling.height();
  const BBox b      = clamp_box(input, w, h);
  const BBox window = enlarge_window(b, params.deltas.at(static_cast<std::size_t>(window_index)), w, h);

  WindowRefinement out;
  out.graph                 = build_region_graph(labeling, contour, window);
  const auto background     = select_background_nodes(out.graph);
  out.saliency              = normalize_saliency(geodesic_saliency(out.graph, background));
  out.proposal.window_index = window_index;

  int x1 = INT_MAX, y1 = INT_MAX, x2 = INT_MIN, y2 = INT_MIN;
  const LabelMap & local = out.graph.local_nodes();
  for (int y = 0; y < window.height(); ++y) {
    for (int x = 0; x < window.width(); ++x) {
      if (out.saliency.values(local(y, x)) > params.threshold) {
        x1 = std::min(x1, x);
        y1 = std::min(y1, y);
        x2 = std::max(x2, x);
        y2 = std::max(y2, y);
      }
    }
  }
  if (x1 == INT_MAX) {
    out.proposal.box      = b;
    out.proposal.fallback = true;
  } else {
    out.proposal.box = BBox{window.x1 + x1, window.y1 + y1, window.x1 + x2 + 1, window.y1 + y2 + 1};
  }
  return out;
}

std::vector<RefinedProposal> refine_box(const BBox & b, const SuperpixelLabeling & labeling,
                                        const ContourMap & contour, const RefineParams & params)
{
  params.validate();
  std::vector<RefinedProposal> out;
  out.reserve(params.deltas.size());
  for (int m = 0; m <= params.max_index(); ++m) {
    out.push_back(refine_window(b, m, labeling, contour, params).proposal);
  }
  return out;
}

}  // namespace salprop
