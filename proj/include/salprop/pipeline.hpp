#ifndef SALPROP_PIPELINE_HPP_
#define SALPROP_PIPELINE_HPP_

#include "salprop/contour.hpp"
#include "salprop/evaluation.hpp"
#include "salprop/proposal_io.hpp"
#include "salprop/ranking.hpp"
#include "salprop/refinement.hpp"
#include "salprop/segmentation.hpp"

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace salprop {

enum class ContourSource { sobel, file };

struct PipelineConfig
{
  SegParams seg;
  RefineParams refine;
  RankParams rank;

  ContourSource contour_source{ContourSource::sobel};
  std::filesystem::path contour_dir;
  bool contour_fallback{false};  // use Sobel when a contour file is missing

  std::filesystem::path image_dir;
  std::filesystem::path proposal_dir;
  std::filesystem::path output_dir;
  std::filesystem::path annotation_dir;  // VOC XML
  std::filesystem::path gt_csv;          // alternative to annotation_dir

  std::vector<std::size_t> budgets{500, 1000, 2000};
  std::vector<double> count_ious{0.7, 0.8, 0.9};
  std::size_t max_count{1000};
  double iou_step{0.05};
  bool include_difficult{false};

  int workers{1};

  /// Throws ConfigError on bad parameters or missing paths needed by `refine`.
  void validate_refine() const;
  /// Throws ConfigError on bad parameters or missing paths needed by `eval`.
  void validate_eval() const;
};

struct ImageRefinement
{
  std::vector<ScoredProposal> refined_sorted;  // saliency-score order, every window of every box
  std::vector<ScoredProposal> input_ordered;   // clamped input boxes in native order
  std::vector<ScoredProposal> final_proposals; // merged, suppressed, budgeted
  std::size_t dropped_inputs{0};               // input boxes entirely outside the image
};

/// Full per-image pipeline over an already segmented image.
ImageRefinement refine_proposals(const SuperpixelLabeling & labeling, const ContourMap & contour,
                                 const std::vector<ProposalRecord> & inputs, const PipelineConfig & config,
                                 int workers = 1);

/// Segment, obtain the contour, and refine.
ImageRefinement refine_image(const Raster & image, const ContourMap & contour,
                             const std::vector<ProposalRecord> & inputs, const PipelineConfig & config,
                             int workers = 1);

std::vector<ProposalRecord> to_records(const std::vector<ScoredProposal> & proposals);

struct RunReport
{
  std::size_t succeeded{0};
  std::size_t failed{0};
  std::vector<std::string> messages;  // one per failure or warning, in image order
};

/// Image files (.png/.pgm/.ppm) in a directory, sorted by name.
std::vector<std::filesystem::path> list_images(const std::filesystem::path & dir);

/// Contour for one image according to the configured source.
ContourMap obtain_contour(const Raster & image, const std::string & image_id, const PipelineConfig & config);

/// refine: one output CSV per image in output_dir.
RunReport run_refine(const PipelineConfig & config);

/// eval: curve CSVs and AR tables in output_dir.
RunReport run_eval(const PipelineConfig & config);

/// Per-box, per-window normalized saliency PNGs for one image plus its labeling.
RunReport run_saliency_dump(const PipelineConfig & config, const std::filesystem::path & image_path,
                            const std::vector<ProposalRecord> & boxes);

}  // namespace salprop

#endif  // SALPROP_PIPELINE_HPP_
