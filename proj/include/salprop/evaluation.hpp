#ifndef SALPROP_EVALUATION_HPP_
#define SALPROP_EVALUATION_HPP_

#include "salprop/imagecore.hpp"

#include <cstddef>
#include <filesystem>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace salprop {

struct GtBox
{
  BBox box;
  std::string label;
  bool difficult{false};
};

/// Ground truth keyed by image id.
using GroundTruth = std::map<std::string, std::vector<GtBox>>;

/// Ranked proposal boxes keyed by image id (best first).
using ProposalSet = std::map<std::string, std::vector<BBox>>;

struct RecallCurve
{
  std::vector<std::pair<double, double>> points;  // (threshold or count, recall)
};

/// IoU thresholds 0.5, 0.5+step, ..., 1.0 (endpoints inclusive).
std::vector<double> iou_grid(double step = 0.05);

/// Drop `difficult` objects.
GroundTruth without_difficult(const GroundTruth & gt);

std::size_t count_boxes(const GroundTruth & gt);

/**
 * Per-ground-truth best-IoU prefix table.
 *
 * For every ground-truth box it stores the ranks at which the running
 * maximum IoU over the image's proposals increases. Recall at any
 * (top-n, threshold) pair is then a lookup per ground-truth box, so whole
 * recall-vs-count sweeps cost one pass over the proposals.
 */
class MatchTable
{
public:
  MatchTable(const ProposalSet & proposals, const GroundTruth & gt);

  std::size_t num_ground_truth() const noexcept { return steps_.size(); }

  /// Best IoU reached by ground-truth g within the top n proposals.
  double best_iou(std::size_t g, std::size_t top_n) const;

  double recall(std::size_t top_n, double iou_thresh) const;

private:
  // (rank, iou) pairs with strictly increasing rank and iou
  std::vector<std::vector<std::pair<std::size_t, double>>> steps_;
};

/// Fraction of ground-truth boxes matched at IoU >= iou_thresh by some top-n proposal of their image.
double recall_at(const ProposalSet & proposals, const GroundTruth & gt, std::size_t top_n, double iou_thresh);

RecallCurve recall_iou_curve(const ProposalSet & proposals, const GroundTruth & gt, std::size_t top_n,
                             const std::vector<double> & grid);

RecallCurve recall_count_curve(const ProposalSet & proposals, const GroundTruth & gt, double iou_thresh,
                               const std::vector<std::size_t> & counts);

/// Mean recall over `grid` (default 0.50:0.05:1.00).
double average_recall(const ProposalSet & proposals, const GroundTruth & gt, std::size_t top_n,
                      const std::vector<double> & grid = iou_grid());

/// VOC XML: 1-based inclusive bndbox converted to 0-based half-open.
std::vector<GtBox> load_voc_annotations(const std::filesystem::path & path);

/// Every *.xml in a directory, keyed by file stem.
GroundTruth load_voc_directory(const std::filesystem::path & dir);

/// CSV `image_id,x1,y1,x2,y2` in half-open pixel coordinates, optional header.
GroundTruth load_gt_csv(const std::filesystem::path & path);

void write_curve_csv(const std::filesystem::path & path, const RecallCurve & curve);

}  // namespace salprop

#endif  // SALPROP_EVALUATION_HPP_
