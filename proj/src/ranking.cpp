#include "salprop/ranking.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

namespace salprop {

void RankParams::validate() const
{
  if (!(lambda > 0.0 && lambda < 1.0)) { throw Error(ErrorCode::ConfigError, "lambda must lie in (0,1)"); }
  if (!(nms_iou > 0.0 && nms_iou <= 1.0)) { throw Error(ErrorCode::ConfigError, "NMS IoU must lie in (0,1]"); }
  if (max_proposals == 0) { throw Error(ErrorCode::ConfigError, "proposal budget must be positive"); }
}

double saliency_score(const RefinedProposal & refined, const SaliencyMap & saliency, const RegionGraph & graph,
                      int max_index, double lambda)
{
  const auto counts = graph.sizes_within(refined.box);
  double mass = 0.0;
  for (int t = 0; t < graph.num_nodes(); ++t) {
    if (counts(t) > 0) { mass += saliency.values(t) * static_cast<double>(counts(t)); }
  }
  const double prefactor = static_cast<double>(max_index + 1 - refined.window_index);
  return prefactor * mass / std::pow(static_cast<double>(bbox_area(refined.box)), lambda);
}

std::vector<ScoredProposal> sort_by_score(std::vector<ScoredProposal> proposals)
{
  std::stable_sort(proposals.begin(), proposals.end(),
                   [](const ScoredProposal & a, const ScoredProposal & b) { return a.score > b.score; });
  for (std::size_t i = 0; i < proposals.size(); ++i) { proposals[i].index = static_cast<int>(i); }
  return proposals;
}

std::vector<ScoredProposal> merge_rerank(const std::vector<ScoredProposal> & refined_sorted,
                                         const std::vector<ScoredProposal> & input_ordered)
{
  std::vector<ScoredProposal> merged;
  merged.reserve(refined_sorted.size() + input_ordered.size());
  auto append = [&merged](const std::vector<ScoredProposal> & list) {
    for (std::size_t i = 0; i < list.size(); ++i) {
      ScoredProposal p = list[i];
      p.score          = inverse_index_score(i, list.size());
      p.index          = static_cast<int>(i);
      merged.push_back(p);
    }
  };
  append(refined_sorted);
  append(input_ordered);
  std::sort(merged.begin(), merged.end(), [](const ScoredProposal & a, const ScoredProposal & b) {
    // input before refined on equal score, then by original index
    return std::make_tuple(-a.score, a.origin.is_input() ? 0 : 1, a.index)
         < std::make_tuple(-b.score, b.origin.is_input() ? 0 : 1, b.index);
  });
  return merged;
}

std::vector<ScoredProposal> nms(const std::vector<ScoredProposal> & proposals, double iou_thresh,
                                std::size_t budget)
{
  std::vector<ScoredProposal> kept;
  for (const ScoredProposal & p : proposals) {
    if (kept.size() >= budget) { break; }
    const bool suppressed = std::any_of(kept.begin(), kept.end(), [&](const ScoredProposal & k) {
      return bbox_iou(k.box, p.box) >= iou_thresh;
    });
    if (!suppressed) { kept.push_back(p); }
  }
  return kept;
}

}  // namespace salprop
