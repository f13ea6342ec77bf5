#include "salprop/evaluation.hpp"

#include "salprop/proposal_io.hpp"

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>

namespace salprop {

namespace pt = boost::property_tree;

std::vector<double> iou_grid(double step)
{
  if (!(step > 0.0 && step <= 0.5)) { throw Error(ErrorCode::ConfigError, "IoU grid step must lie in (0,0.5]"); }
  const auto steps = static_cast<int>(std::floor(0.5 / step + 1e-9));
  std::vector<double> grid;
  for (int i = 0; i <= steps; ++i) { grid.push_back(std::round((0.5 + i * step) * 1e9) / 1e9); }
  // snap the last point so the grid always ends exactly at 1.0
  if (std::abs(grid.back() - 1.0) < 1e-9) {
    grid.back() = 1.0;
  } else {
    grid.push_back(1.0);
  }
  return grid;
}

GroundTruth without_difficult(const GroundTruth & gt)
{
  GroundTruth out;
  for (const auto & [id, boxes] : gt) {
    auto & kept = out[id];
    std::copy_if(boxes.begin(), boxes.end(), std::back_inserter(kept), [](const GtBox & b) { return !b.difficult; });
  }
  return out;
}

std::size_t count_boxes(const GroundTruth & gt)
{
  std::size_t n = 0;
  for (const auto & [id, boxes] : gt) { n += boxes.size(); }
  return n;
}

MatchTable::MatchTable(const ProposalSet & proposals, const GroundTruth & gt)
{
  if (count_boxes(gt) == 0) { throw Error(ErrorCode::NoGroundTruth, "no ground-truth boxes to evaluate"); }
  static const std::vector<BBox> none;
  for (const auto & [id, boxes] : gt) {
    const auto it                  = proposals.find(id);
    const std::vector<BBox> & list = it == proposals.end() ? none : it->second;
    for (const GtBox & g : boxes) {
      auto & steps = steps_.emplace_back();
      double best  = 0.0;
      for (std::size_t r = 0; r < list.size(); ++r) {
        const double iou = bbox_iou(g.box, list[r]);
        if (iou > best) {
          best = iou;
          steps.emplace_back(r, iou);
        }
      }
    }
  }
}

double MatchTable::best_iou(std::size_t g, std::size_t top_n) const
{
  const auto & steps = steps_.at(g);
  // last step whose rank is < top_n
  const auto it = std::lower_bound(steps.begin(), steps.end(), top_n,
                                   [](const std::pair<std::size_t, double> & s, std::size_t n) { return s.first < n; });
  return it == steps.begin() ? 0.0 : std::prev(it)->second;
}

double MatchTable::recall(std::size_t top_n, double iou_thresh) const
{
  std::size_t hits = 0;
  for (std::size_t g = 0; g < steps_.size(); ++g) {
    if (best_iou(g, top_n) >= iou_thresh) { ++hits; }
  }
  return static_cast<double>(hits) / static_cast<double>(steps_.size());
}

double recall_at(const ProposalSet & proposals, const GroundTruth & gt, std::size_t top_n, double iou_thresh)
{
  if (!(iou_thresh > 0.0 && iou_thresh <= 1.0)) { throw Error(ErrorCode::ConfigError, "IoU threshold must lie in (0,1]"); }
  return MatchTable(proposals, gt).recall(top_n, iou_thresh);
}

RecallCurve recall_iou_curve(const ProposalSet & proposals, const GroundTruth & gt, std::size_t top_n,
                             const std::vector<double> & grid)
{
  const MatchTable table(proposals, gt);
  RecallCurve curve;
  for (double t : grid) {
    if (!(t > 0.0 && t <= 1.0)) { throw Error(ErrorCode::ConfigError, "IoU threshold must lie in (0,1]"); }
    curve.points.emplace_back(t, table.recall(top_n, t));
  }
  return curve;
}

RecallCurve recall_count_curve(const ProposalSet & proposals, const GroundTruth & gt, double iou_thresh,
                               const std::vector<std::size_t> & counts)
{
  const MatchTable table(proposals, gt);
  RecallCurve curve;
  for (std::size_t n : counts) { curve.points.emplace_back(static_cast<double>(n), table.recall(n, iou_thresh)); }
  return curve;
}

double average_recall(const ProposalSet & proposals, const GroundTruth & gt, std::size_t top_n,
                      const std::vector<double> & grid)
{
  const RecallCurve curve = recall_iou_curve(proposals, gt, top_n, grid);
  double sum = 0.0;
  for (const auto & [t, r] : curve.points) { sum += r; }
  return sum / static_cast<double>(curve.points.size());
}

std::vector<GtBox> load_voc_annotations(const std::filesystem::path & path)
{
  pt::ptree tree;
  try {
    pt::read_xml(path.string(), tree);
  } catch (const pt::xml_parser_error & e) {
    throw Error(ErrorCode::ParseError, path.string() + ": " + e.message());
  }
  const auto annotation = tree.get_child_optional("annotation");
  if (!annotation) { throw Error(ErrorCode::ParseError, path.string() + ": missing <annotation>"); }

  std::vector<GtBox> out;
  for (const auto & [tag, node] : *annotation) {
    if (tag != "object") { continue; }
    GtBox g;
    try {
      g.label     = node.get<std::string>("name", "");
      g.difficult = node.get<int>("difficult", 0) != 0;
      const auto & bb = node.get_child("bndbox");
      auto coord = [&](const char * key) { return static_cast<int>(std::lround(parse_number(bb.get<std::string>(key)))); };
      const int xmin = coord("xmin"), ymin = coord("ymin"), xmax = coord("xmax"), ymax = coord("ymax");
      g.box = make_box(xmin - 1, ymin - 1, xmax, ymax);
    } catch (const pt::ptree_error & e) {
      throw Error(ErrorCode::ParseError, path.string() + ": " + e.what());
    }
    out.push_back(std::move(g));
  }
  return out;
}

GroundTruth load_voc_directory(const std::filesystem::path & dir)
{
  if (!std::filesystem::is_directory(dir)) { throw Error(ErrorCode::IoError, dir.string() + " is not a directory"); }
  GroundTruth gt;
  for (const auto & entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".xml") {
      gt[entry.path().stem().string()] = load_voc_annotations(entry.path());
    }
  }
  return gt;
}

GroundTruth load_gt_csv(const std::filesystem::path & path)
{
  std::ifstream in(path);
  if (!in) { throw Error(ErrorCode::IoError, "cannot open " + path.string()); }
  GroundTruth gt;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) { continue; }
    const auto f = split_csv_line(line);
    if (f.size() != 5) { throw Error(ErrorCode::ParseError, path.string() + ":" + std::to_string(line_no) + ": expected 5 fields"); }
    double c[4];
    try {
      for (int i = 0; i < 4; ++i) { c[i] = parse_number(f[i + 1]); }
    } catch (const Error &) {
      if (line_no == 1) { continue; }
      throw;
    }
    GtBox g;
    g.box = make_box(static_cast<int>(std::lround(c[0])), static_cast<int>(std::lround(c[1])),
                     static_cast<int>(std::lround(c[2])), static_cast<int>(std::lround(c[3])));
    gt[f[0]].push_back(g);
  }
  return gt;
}

void write_curve_csv(const std::filesystem::path & path, const RecallCurve & curve)
{
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) { throw Error(ErrorCode::IoError, "cannot write " + path.string()); }
  out << "threshold_or_count,recall\n";
  for (const auto & [x, r] : curve.points) { out << format_number(x) << ',' << format_number(r) << '\n'; }
}

}  // namespace salprop
