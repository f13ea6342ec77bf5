#include "salprop/saliency.hpp"

#include "test_support.hpp"

#include <doctest.h>

using namespace salprop;

namespace {

SuperpixelLabeling labeling_from(const LabelMap & labels)
{
  SuperpixelLabeling seg;
  seg.labels = labels;
  seg.region_sizes.assign(static_cast<std::size_t>(labels.maxCoeff() + 1), 0);
  for (Eigen::Index i = 0; i < labels.size(); ++i) { ++seg.region_sizes[labels.data()[i]]; }
  return seg;
}

SaliencyMap map_of(std::initializer_list<double> values)
{
  SaliencyMap s;
  s.values = Eigen::VectorXd(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (double v : values) { s.values(i++) = v; }
  s.background.assign(values.size(), false);
  return s;
}

const GraphEdge * find_edge(const RegionGraph & g, int u, int v)
{
  for (const auto & e : g.edges()) {
    if ((e.u == u && e.v == v) || (e.u == v && e.v == u)) { return &e; }
  }
  return nullptr;
}

}  // namespace

TEST_CASE("boundary distance is the mean response over the shared boundary")
{
  LabelMap labels(2, 2);
  labels << 0, 1, 0, 1;
  Raster c(2, 2);
  c << 0.2, 0.6, 0.4, 0.8;
  const RegionGraph g = build_region_graph(labeling_from(labels), ContourMap(c), BBox{0, 0, 2, 2});
  REQUIRE(g.edges().size() == 1);
  CHECK(g.edges()[0].boundary_length == 4);
  CHECK(g.edges()[0].weight == 0.5);
}

TEST_CASE("zero contour gives zero weights; non-adjacent regions get no edge")
{
  LabelMap labels(3, 6);
  labels << 0, 0, 1, 1, 2, 2,
            0, 0, 1, 1, 2, 2,
            0, 0, 1, 1, 2, 2;
  const RegionGraph g = build_region_graph(labeling_from(labels), ContourMap(Raster::Zero(3, 6)), BBox{0, 0, 6, 3});
  CHECK(g.num_nodes() == 3);
  CHECK(g.edges().size() == 2);
  for (const auto & e : g.edges()) { CHECK(e.weight == 0.0); }
  CHECK(find_edge(g, 0, 1) != nullptr);
  CHECK(find_edge(g, 1, 2) != nullptr);
  CHECK(find_edge(g, 0, 2) == nullptr);
  CHECK(find_edge(g, 0, 1)->boundary_length == 6);
}

TEST_CASE("window restriction: nodes, sizes and boundaries stay inside the window")
{
  LabelMap labels(4, 4);
  labels << 0, 0, 1, 1,
            0, 0, 1, 1,
            2, 2, 3, 3,
            2, 2, 3, 3;
  Raster c = Raster::Constant(4, 4, 0.25);
  c(0, 2) = 1.0;  // outside window below, must not contribute
  const RegionGraph g = build_region_graph(labeling_from(labels), ContourMap(c), BBox{1, 1, 4, 4});
  REQUIRE(g.num_nodes() == 4);
  CHECK(std::vector<std::int32_t>(g.labels().begin(), g.labels().end()) == std::vector<std::int32_t>{0, 1, 2, 3});
  CHECK(std::vector<std::int64_t>(g.sizes().begin(), g.sizes().end()) == std::vector<std::int64_t>{1, 2, 2, 4});
  const GraphEdge * e01 = find_edge(g, 0, 1);
  REQUIRE(e01 != nullptr);
  CHECK(e01->boundary_length == 2);
  CHECK(e01->weight == 0.25);
  CHECK(g.node_of_label(3) == 3);
  CHECK(g.node_of_label(7) == -1);
}

TEST_CASE("geodesic saliency fixtures")
{
  SUBCASE("chain")
  {
    const auto g = RegionGraph::from_edges(3, {{0, 1, 0.2, 1}, {1, 2, 0.3, 1}});
    const std::vector<int> bg{0};
    const SaliencyMap s = geodesic_saliency(g, bg);
    CHECK(s.values(0) == 0.0);
    CHECK(s.values(1) == doctest::Approx(0.2).epsilon(1e-15));
    CHECK(s.values(2) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(s.background[0]);
    CHECK(!s.background[1]);
  }
  SUBCASE("diamond takes the cheaper branch")
  {
    // A=0 (bg), B=1, C=2, D=3
    const auto g = RegionGraph::from_edges(4, {{0, 1, 0.2, 1}, {1, 3, 0.3, 1}, {0, 2, 0.1, 1}, {2, 3, 0.3, 1}});
    const std::vector<int> bg{0};
    CHECK(geodesic_saliency(g, bg).values(3) == doctest::Approx(0.4).epsilon(1e-15));
  }
  SUBCASE("unreachable nodes carry the sentinel")
  {
    const auto g = RegionGraph::from_edges(3, {{0, 1, 0.5, 1}});
    const std::vector<int> bg{0};
    const SaliencyMap s = geodesic_saliency(g, bg);
    CHECK(s.values(2) == SaliencyMap::unreachable);
  }
  SUBCASE("empty background")
  {
    const auto g = RegionGraph::from_edges(2, {{0, 1, 0.5, 1}});
    try {
      geodesic_saliency(g, std::vector<int>{});
      FAIL("expected EmptyBackground");
    } catch (const Error & e) {
      CHECK(e.code() == ErrorCode::EmptyBackground);
    }
  }
}

TEST_CASE("RegionGraph rejects malformed edges")
{
  CHECK_THROWS(RegionGraph::from_edges(2, {{0, 0, 0.1, 1}}));
  CHECK_THROWS(RegionGraph::from_edges(2, {{0, 1, -0.1, 1}}));
  CHECK_THROWS(RegionGraph::from_edges(2, {{0, 1, 0.1, 1}, {1, 0, 0.2, 1}}));
  CHECK_THROWS(RegionGraph::from_edges(2, {{0, 2, 0.1, 1}}));
}

TEST_CASE("geodesic saliency properties on random graphs")
{
  std::mt19937 rng(42);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = std::uniform_int_distribution<int>(2, 12)(rng);
    const RegionGraph g = testing::random_connected_graph(rng, n, n);
    std::vector<int> bg{std::uniform_int_distribution<int>(0, n - 1)(rng)};
    const SaliencyMap s = geodesic_saliency(g, bg);

    // oracle
    const auto oracle = testing::enumerate_path_minima(g, bg);
    for (int t = 0; t < n; ++t) { CHECK(std::abs(s.values(t) - oracle[t]) < 1e-12); }

    // triangle property on every edge
    for (const auto & e : g.edges()) {
      CHECK(s.values(e.v) <= s.values(e.u) + e.weight + 1e-12);
      CHECK(s.values(e.u) <= s.values(e.v) + e.weight + 1e-12);
    }

    // scaling weights scales distances
    std::vector<GraphEdge> scaled(g.edges().begin(), g.edges().end());
    for (auto & e : scaled) { e.weight *= 2.5; }
    const SaliencyMap s2 = geodesic_saliency(RegionGraph::from_edges(n, scaled), bg);
    for (int t = 0; t < n; ++t) { CHECK(s2.values(t) == doctest::Approx(2.5 * s.values(t)).epsilon(1e-12)); }

    // an extra edge never increases any distance
    const int u = std::uniform_int_distribution<int>(0, n - 1)(rng), v = std::uniform_int_distribution<int>(0, n - 1)(rng);
    std::vector<GraphEdge> more(g.edges().begin(), g.edges().end());
    const bool exists = std::any_of(more.begin(), more.end(), [&](const GraphEdge & e) {
      return (e.u == u && e.v == v) || (e.u == v && e.v == u);
    });
    if (u != v && !exists) {
      more.push_back({u, v, std::uniform_real_distribution<double>(0.0, 1.0)(rng), 1});
      const SaliencyMap s3 = geodesic_saliency(RegionGraph::from_edges(n, more), bg);
      for (int t = 0; t < n; ++t) { CHECK(s3.values(t) <= s.values(t)); }
    }
  }
}

TEST_CASE("normalize_saliency")
{
  const SaliencyMap a = normalize_saliency(map_of({0.2, 0.7, 1.2}));
  CHECK(a.values(0) == 0.0);
  CHECK(a.values(1) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(a.values(2) == 1.0);

  const SaliencyMap flat = normalize_saliency(map_of({0.3, 0.3, 0.3}));
  CHECK((flat.values.array() == 0.0).all());

  const SaliencyMap unit = map_of({0.0, 0.25, 1.0});
  CHECK(normalize_saliency(unit).values == unit.values);

  const SaliencyMap with_inf = normalize_saliency(map_of({0.0, 0.5, SaliencyMap::unreachable}));
  CHECK(with_inf.values(1) == 1.0);
  CHECK(with_inf.values(2) == 1.0);

  try {
    normalize_saliency(map_of({SaliencyMap::unreachable}));
    FAIL("expected NoFiniteValues");
  } catch (const Error & e) {
    CHECK(e.code() == ErrorCode::NoFiniteValues);
  }
}

TEST_CASE("region graph weights lie in [0,1] on random inputs")
{
  std::mt19937 rng(8);
  for (int trial = 0; trial < 10; ++trial) {
    const Raster img = testing::random_blocks(rng, 40, 32, 5);
    const SuperpixelLabeling seg = segment_image(img, SegParams{0.8, 100.0, 10});
    const ContourMap contour(testing::random_raster(rng, 40, 32));
    const RegionGraph g = build_region_graph(seg, contour, BBox{3, 2, 37, 30});
    std::int64_t total = 0;
    for (auto s : g.sizes()) { total += s; }
    CHECK(total == 34 * 28);
    for (const auto & e : g.edges()) {
      CHECK(e.weight >= 0.0);
      CHECK(e.weight <= 1.0);
      CHECK(e.u != e.v);
      CHECK(e.boundary_length >= 2);
    }
  }
}
