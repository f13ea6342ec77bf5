#include "salprop/saliency.hpp"

#include "salprop/image_io.hpp"

#include <algorithm>
#include <cmath>
#include <array>
#include <tuple>
#include <unordered_map>
#include <queue>
#include <sstream>
#include <stdexcept>
#include <utility>

namespace salprop {

RegionGraph::RegionGraph(BBox window, std::vector<std::int32_t> labels, std::vector<std::int64_t> sizes,
                         LabelMap local_nodes, std::vector<GraphEdge> edges)
    : window_(window), labels_(std::move(labels)), sizes_(std::move(sizes)),
      local_nodes_(std::move(local_nodes)), edges_(std::move(edges))
{
  const int n = num_nodes();
  if (static_cast<int>(sizes_.size()) != n) {
    throw std::invalid_argument("RegionGraph: sizes and labels differ in length");
  }
  adjacency_.assign(static_cast<std::size_t>(n), {});
  std::vector<std::pair<int, int>> seen;
  seen.reserve(edges_.size());
  for (const GraphEdge & e : edges_) {
    if (e.u < 0 || e.v < 0 || e.u >= n || e.v >= n) { throw std::invalid_argument("RegionGraph: edge endpoint out of range"); }
    if (e.u == e.v) { throw std::invalid_argument("RegionGraph: self-loop"); }
    if (!(e.weight >= 0.0) || !std::isfinite(e.weight)) { throw std::invalid_argument("RegionGraph: negative or non-finite weight"); }
    seen.emplace_back(std::min(e.u, e.v), std::max(e.u, e.v));
    adjacency_[e.u].push_back({e.v, e.weight});
    adjacency_[e.v].push_back({e.u, e.weight});
  }
  std::sort(seen.begin(), seen.end());
  if (std::adjacent_find(seen.begin(), seen.end()) != seen.end()) {
    throw std::invalid_argument("RegionGraph: duplicate edge");
  }
}

RegionGraph RegionGraph::from_edges(int num_nodes, std::vector<GraphEdge> edges)
{
  std::vector<std::int32_t> labels(static_cast<std::size_t>(num_nodes));
  for (int i = 0; i < num_nodes; ++i) { labels[i] = i; }
  std::vector<std::int64_t> sizes(static_cast<std::size_t>(num_nodes), 1);
  return RegionGraph(BBox{}, std::move(labels), std::move(sizes), LabelMap(), std::move(edges));
}

int RegionGraph::node_of_label(std::int32_t label) const
{
  const auto it = std::lower_bound(labels_.begin(), labels_.end(), label);
  if (it == labels_.end() || *it != label) { return -1; }
  return static_cast<int>(it - labels_.begin());
}

Eigen::Matrix<std::int64_t, Eigen::Dynamic, 1> RegionGraph::sizes_within(const BBox & box) const
{
  if (!window_.contains(box) || local_nodes_.size() == 0) {
    throw Error(ErrorCode::InvalidBox, "box is not inside the graph window");
  }
  Eigen::Matrix<std::int64_t, Eigen::Dynamic, 1> counts = Eigen::Matrix<std::int64_t, Eigen::Dynamic, 1>::Zero(num_nodes());
  for (int y = box.y1; y < box.y2; ++y) {
    for (int x = box.x1; x < box.x2; ++x) { ++counts(local_nodes_(y - window_.y1, x - window_.x1)); }
  }
  return counts;
}

RegionGraph build_region_graph(const SuperpixelLabeling & labeling, const ContourMap & contour,
                               const BBox & window)
{
  const int w = labeling.width(), h = labeling.height();
  if (contour.width() != w || contour.height() != h) {
    throw Error(ErrorCode::DimensionMismatch, "labeling and contour differ in size");
  }
  if (!window.valid() || window.x2 > w || window.y2 > h) {
    throw Error(ErrorCode::InvalidBox, "window outside raster");
  }

  const auto block = labeling.labels.block(window.y1, window.x1, window.height(), window.width());
  std::vector<std::int32_t> labels;
  labels.reserve(static_cast<std::size_t>(block.size()));
  for (int y = 0; y < block.rows(); ++y) {
    for (int x = 0; x < block.cols(); ++x) { labels.push_back(block(y, x)); }
  }
  std::sort(labels.begin(), labels.end());
  labels.erase(std::unique(labels.begin(), labels.end()), labels.end());

  auto node_of = [&](std::int32_t label) {
    return static_cast<int>(std::lower_bound(labels.begin(), labels.end(), label) - labels.begin());
  };

  LabelMap local(window.height(), window.width());
  std::vector<std::int64_t> sizes(labels.size(), 0);
  for (int y = 0; y < block.rows(); ++y) {
    for (int x = 0; x < block.cols(); ++x) {
      const int node = node_of(block(y, x));
      local(y, x)    = node;
      ++sizes[node];
    }
  }

  // l(i,j) holds pixel z when z carries one of the two labels and has a
  // 4-neighbour inside the window carrying the other; each pixel counts once.
  struct Boundary
  {
    long double sum{0.0L};
    std::int64_t count{0};
  };
  std::unordered_map<std::uint64_t, Boundary> boundary;
  const auto n = static_cast<std::uint64_t>(labels.size());
  const int ww = window.width(), wh = window.height();
  for (int y = 0; y < wh; ++y) {
    for (int x = 0; x < ww; ++x) {
      const int own = local(y, x);
      std::array<int, 4> others{};
      int num_others = 0;
      auto consider  = [&](int ny, int nx) {
        if (nx < 0 || ny < 0 || nx >= ww || ny >= wh) { return; }
        const int other = local(ny, nx);
        if (other == own || std::find(others.begin(), others.begin() + num_others, other) != others.begin() + num_others) {
          return;
        }
        others[num_others++] = other;
      };
      consider(y, x - 1);
      consider(y, x + 1);
      consider(y - 1, x);
      consider(y + 1, x);
      const double response = contour(window.y1 + y, window.x1 + x);
      for (int i = 0; i < num_others; ++i) {
        const auto a = static_cast<std::uint64_t>(std::min(own, others[i]));
        const auto b = static_cast<std::uint64_t>(std::max(own, others[i]));
        Boundary & acc = boundary[a * n + b];
        acc.sum += response;
        ++acc.count;
      }
    }
  }

  std::vector<GraphEdge> edges;
  edges.reserve(boundary.size());
  for (const auto & [key, acc] : boundary) {
    edges.push_back({static_cast<int>(key / n), static_cast<int>(key % n),
                     static_cast<double>(acc.sum / static_cast<long double>(acc.count)), acc.count});
  }
  std::sort(edges.begin(), edges.end(), [](const GraphEdge & l, const GraphEdge & r) {
    return std::tie(l.u, l.v) < std::tie(r.u, r.v);
  });
  return RegionGraph(window, std::move(labels), std::move(sizes), std::move(local), std::move(edges));
}

SaliencyMap geodesic_saliency(const RegionGraph & graph, std::span<const int> background)
{
  if (background.empty()) { throw Error(ErrorCode::EmptyBackground, "no background nodes"); }
  const int n = graph.num_nodes();
  SaliencyMap s;
  s.values     = Eigen::VectorXd::Constant(n, SaliencyMap::unreachable);
  s.background.assign(static_cast<std::size_t>(n), false);

  // Dijkstra from a virtual source joined to every background node at cost 0.
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
  for (int b : background) {
    if (b < 0 || b >= n) { throw std::out_of_range("background node outside graph"); }
    s.background[b] = true;
    s.values(b)     = 0.0;
    queue.emplace(0.0, b);
  }
  std::vector<bool> settled(static_cast<std::size_t>(n), false);
  while (!queue.empty()) {
    const auto [dist, u] = queue.top();
    queue.pop();
    if (settled[u]) { continue; }
    settled[u] = true;
    for (const auto & nb : graph.neighbors(u)) {
      const double cand = dist + nb.weight;
      if (cand < s.values(nb.node)) {
        s.values(nb.node) = cand;
        queue.emplace(cand, nb.node);
      }
    }
  }
  return s;
}

SaliencyMap normalize_saliency(const SaliencyMap & s)
{
  double lo = SaliencyMap::unreachable, hi = -SaliencyMap::unreachable;
  for (Eigen::Index i = 0; i < s.values.size(); ++i) {
    const double v = s.values(i);
    if (std::isfinite(v)) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  if (lo > hi) { throw Error(ErrorCode::NoFiniteValues, "saliency map has no finite values"); }

  SaliencyMap out = s;
  const double range = hi - lo;
  for (Eigen::Index i = 0; i < out.values.size(); ++i) {
    double & v = out.values(i);
    if (!std::isfinite(v)) {
      v = 1.0;
    } else if (range > 0.0) {
      v = (v - lo) / range;
    } else {
      v = 0.0;
    }
  }
  return out;
}

Raster saliency_raster(const RegionGraph & graph, const SaliencyMap & normalized)
{
  const LabelMap & local = graph.local_nodes();
  Raster out(local.rows(), local.cols());
  for (Eigen::Index y = 0; y < local.rows(); ++y) {
    for (Eigen::Index x = 0; x < local.cols(); ++x) { out(y, x) = normalized.values(local(y, x)); }
  }
  return out;
}

void save_saliency_png(const std::filesystem::path & path, const RegionGraph & graph,
                       const SaliencyMap & normalized)
{
  save_gray(path, saliency_raster(graph, normalized));
}

}  // namespace salprop
