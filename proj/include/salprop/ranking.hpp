#ifndef SALPROP_RANKING_HPP_
#define SALPROP_RANKING_HPP_

#include "salprop/imagecore.hpp"
#include "salprop/refinement.hpp"
#include "salprop/saliency.hpp"

#include <cstddef>
#include <vector>

namespace salprop {

struct RankParams
{
  double lambda{0.9};
  double nms_iou{0.9};
  std::size_t max_proposals{2000};

  void validate() const;
};

struct Origin
{
  enum class Kind { input, refined };

  Kind kind{Kind::input};
  int window_index{0};  // meaningful for refined only

  static Origin input() { return {Kind::input, 0}; }
  static Origin refined(int m) { return {Kind::refined, m}; }
  bool is_input() const noexcept { return kind == Kind::input; }

  friend bool operator==(const Origin &, const Origin &) = default;
};

struct ScoredProposal
{
  BBox box;
  double score{0.0};
  Origin origin;
  int index{0};  // position in the list it was ranked in before merging
};

/**
 * Saliency ranking score of a refined box b' taken from window m:
 *
 *   (M + 1 - m) * sum_t S(t) size(t) / |b'|^lambda
 *
 * where t runs over the window's superpixels and size(t) counts the pixels
 * of t inside b'. `saliency` is expected to be normalized.
 */
double saliency_score(const RefinedProposal & refined, const SaliencyMap & saliency, const RegionGraph & graph,
                      int max_index, double lambda);

/// Stable sort by score, highest first; `index` is rewritten to the new position.
std::vector<ScoredProposal> sort_by_score(std::vector<ScoredProposal> proposals);

/// Normalized inverse index of position i in a list of length n: (n - i) / n.
inline double inverse_index_score(std::size_t i, std::size_t n)
{
  return static_cast<double>(n - i) / static_cast<double>(n);
}

/// Re-score both lists by inverse index, concatenate, and sort descending.
/// Ties go to input proposals first, then to the lower original index.
std::vector<ScoredProposal> merge_rerank(const std::vector<ScoredProposal> & refined_sorted,
                                         const std::vector<ScoredProposal> & input_ordered);

/// Greedy suppression: keep a proposal iff its IoU with every kept one is below iou_thresh.
std::vector<ScoredProposal> nms(const std::vector<ScoredProposal> & proposals, double iou_thresh,
                                std::size_t budget);

}  // namespace salprop

#endif  // SALPROP_RANKING_HPP_
