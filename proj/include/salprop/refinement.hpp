#ifndef SALPROP_REFINEMENT_HPP_
#define SALPROP_REFINEMENT_HPP_

#include "salprop/contour.hpp"
#include "salprop/imagecore.hpp"
#include "salprop/saliency.hpp"
#include "salprop/segmentation.hpp"

#include <vector>

namespace salprop {

struct RefineParams
{
  double threshold{0.01};          // T, applied to the normalized map with strict >
  std::vector<int> deltas{1, 5, 15, 25};  // one enlargement width per window index m = 0..M

  int max_index() const noexcept { return static_cast<int>(deltas.size()) - 1; }  // M
  void validate() const;
};

struct RefinedProposal
{
  BBox box;
  int window_index{0};  // m
  double raw_score{0.0};
  int source{0};        // index of the input box
  bool fallback{false}; // no superpixel exceeded T; box is the input box
};

/// Everything produced for one (box, m) pair; ranking needs the graph and map.
struct WindowRefinement
{
  RefinedProposal proposal;
  RegionGraph graph;
  SaliencyMap saliency;  // normalized
};

/// Grow by delta on every side and clamp to the raster.
BBox enlarge_window(const BBox & b, int delta, int w, int h);

/// Superpixels owning at least one pixel of the window's 1-pixel inner ring, as graph node ids.
std::vector<int> select_background_nodes(const RegionGraph & graph);

/// Same selection expressed as global superpixel labels (sorted).
std::vector<std::int32_t> select_background_labels(const SuperpixelLabeling & labeling, const BBox & window);

/// Saliency pass on one window, then the tight box around every pixel whose node exceeds T.
WindowRefinement refine_window(const BBox & input, int window_index, const SuperpixelLabeling & labeling,
                               const ContourMap & contour, const RefineParams & params);

/// M+1 refined proposals for one input box, in window order.
std::vector<RefinedProposal> refine_box(const BBox & b, const SuperpixelLabeling & labeling,
                                        const ContourMap & contour, const RefineParams & params);

}  // namespace salprop

#endif  // SALPROP_REFINEMENT_HPP_
