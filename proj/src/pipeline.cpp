#include "salprop/pipeline.hpp"

#include "salprop/image_io.hpp"
#include "salprop/parallel.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <optional>

namespace salprop {

namespace fs = std::filesystem;

namespace {

void require_dir(const fs::path & dir, const char * what)
{
  if (dir.empty()) { throw Error(ErrorCode::ConfigError, std::string(what) + " directory not set"); }
  if (!fs::is_directory(dir)) { throw Error(ErrorCode::ConfigError, std::string(what) + " directory does not exist: " + dir.string()); }
}

void ensure_output_dir(const fs::path & dir)
{
  if (dir.empty()) { throw Error(ErrorCode::ConfigError, "output directory not set"); }
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) { throw Error(ErrorCode::ConfigError, "cannot create output directory " + dir.string()); }
}

std::optional<fs::path> find_contour_file(const fs::path & dir, const std::string & id)
{
  for (const char * ext : {".png", ".pgm"}) {
    fs::path p = dir / (id + ext);
    if (fs::is_regular_file(p)) { return p; }
  }
  return std::nullopt;
}

}  // namespace

void PipelineConfig::validate_refine() const
{
  seg.validate();
  refine.validate();
  rank.validate();
  require_dir(image_dir, "image");
  require_dir(proposal_dir, "proposal");
  if (contour_source == ContourSource::file) { require_dir(contour_dir, "contour"); }
  if (workers < 1) { throw Error(ErrorCode::ConfigError, "worker count must be positive"); }
}

void PipelineConfig::validate_eval() const
{
  require_dir(proposal_dir, "proposal");
  if (annotation_dir.empty() == gt_csv.empty()) {
    throw Error(ErrorCode::ConfigError, "exactly one of annotation directory or ground-truth CSV is required");
  }
  if (!annotation_dir.empty()) { require_dir(annotation_dir, "annotation"); }
  if (!gt_csv.empty() && !fs::is_regular_file(gt_csv)) {
    throw Error(ErrorCode::ConfigError, "ground-truth CSV does not exist: " + gt_csv.string());
  }
  if (budgets.empty() || std::find(budgets.begin(), budgets.end(), std::size_t{0}) != budgets.end()) {
    throw Error(ErrorCode::ConfigError, "evaluation budgets must be positive");
  }
  for (double t : count_ious) {
    if (!(t > 0.0 && t <= 1.0)) { throw Error(ErrorCode::ConfigError, "IoU thresholds must lie in (0,1]"); }
  }
  if (max_count < 1) { throw Error(ErrorCode::ConfigError, "max count must be positive"); }
  iou_grid(iou_step);
}

ImageRefinement refine_proposals(const SuperpixelLabeling & labeling, const ContourMap & contour,
                                 const std::vector<ProposalRecord> & inputs, const PipelineConfig & config,
                                 int workers)
{
  config.refine.validate();
  config.rank.validate();
  const int w = labeling.width(), h = labeling.height();
  const int windows = config.refine.max_index() + 1;

  ImageRefinement out;
  std::vector<BBox> boxes;
  for (const ProposalRecord & r : inputs) {
    try {
      const BBox b = clamp_box(r.box, w, h);
      out.input_ordered.push_back({b, r.score, Origin::input(), static_cast<int>(boxes.size())});
      boxes.push_back(b);
    } catch (const Error &) {
      ++out.dropped_inputs;
    }
  }

  std::vector<ScoredProposal> refined(boxes.size() * static_cast<std::size_t>(windows));
  parallel_for(refined.size(), workers, [&](std::size_t slot) {
    const std::size_t box = slot / static_cast<std::size_t>(windows);
    const int m           = static_cast<int>(slot % static_cast<std::size_t>(windows));
    const WindowRefinement wr = refine_window(boxes[box], m, labeling, contour, config.refine);
    const double score = saliency_score(wr.proposal, wr.saliency, wr.graph, config.refine.max_index(), config.rank.lambda);
    refined[slot]      = {wr.proposal.box, score, Origin::refined(m), static_cast<int>(slot)};
  });

  out.refined_sorted  = sort_by_score(std::move(refined));
  out.final_proposals = nms(merge_rerank(out.refined_sorted, out.input_ordered), config.rank.nms_iou,
                            config.rank.max_proposals);
  return out;
}

ImageRefinement refine_image(const Raster & image, const ContourMap & contour,
                             const std::vector<ProposalRecord> & inputs, const PipelineConfig & config, int workers)
{
  if (contour.width() != image.cols() || contour.height() != image.rows()) {
    throw Error(ErrorCode::DimensionMismatch, "contour and image differ in size");
  }
  const SuperpixelLabeling labeling = segment_image(image, config.seg);
  return refine_proposals(labeling, contour, inputs, config, workers);
}

std::vector<ProposalRecord> to_records(const std::vector<ScoredProposal> & proposals)
{
  std::vector<ProposalRecord> out;
  out.reserve(proposals.size());
  for (const auto & p : proposals) { out.push_back({p.box, p.score}); }
  return out;
}

std::vector<fs::path> list_images(const fs::path & dir)
{
  std::vector<fs::path> out;
  for (const auto & entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file()) { continue; }
    std::string ext = entry.path().extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (ext == ".png" || ext == ".pgm" || ext == ".ppm") { out.push_back(entry.path()); }
  }
  std::sort(out.begin(), out.end());
  return out;
}

ContourMap obtain_contour(const Raster & image, const std::string & image_id, const PipelineConfig & config)
{
  if (config.contour_source == ContourSource::sobel) { return sobel_contour(image); }
  if (auto file = find_contour_file(config.contour_dir, image_id)) {
    return load_contour_map(*file, static_cast<int>(image.cols()), static_cast<int>(image.rows()));
  }
  if (config.contour_fallback) { return sobel_contour(image); }
  throw Error(ErrorCode::IoError, "no contour file for " + image_id + " in " + config.contour_dir.string());
}

RunReport run_refine(const PipelineConfig & config)
{
  config.validate_refine();
  ensure_output_dir(config.output_dir);
  const auto images = list_images(config.image_dir);

  // Parallelise across images when there are several, across boxes otherwise.
  const int outer = images.size() > 1 ? config.workers : 1;
  const int inner = images.size() > 1 ? 1 : config.workers;

  std::vector<std::optional<std::string>> failures(images.size());
  std::vector<std::optional<std::string>> warnings(images.size());
  parallel_for(images.size(), outer, [&](std::size_t i) {
    const std::string id = images[i].stem().string();
    try {
      const fs::path proposal_file = config.proposal_dir / (id + ".csv");
      if (!fs::is_regular_file(proposal_file)) {
        throw Error(ErrorCode::IoError, "missing proposal file " + proposal_file.string());
      }
      const auto inputs  = read_proposals_csv(proposal_file);
      const Raster image = load_image(images[i]);
      const ContourMap contour = obtain_contour(image, id, config);
      const ImageRefinement result = refine_image(image, contour, inputs, config, inner);
      write_proposals_csv(config.output_dir / (id + ".csv"), to_records(result.final_proposals));
      if (result.dropped_inputs > 0) {
        warnings[i] = id + ": dropped " + std::to_string(result.dropped_inputs) + " input boxes outside the image";
      }
    } catch (const std::exception & e) {
      failures[i] = id + ": " + e.what();
    }
  });

  RunReport report;
  for (std::size_t i = 0; i < images.size(); ++i) {
    if (warnings[i]) { report.messages.push_back("warning: " + *warnings[i]); }
    if (failures[i]) {
      ++report.failed;
      report.messages.push_back("error: " + *failures[i]);
    } else {
      ++report.succeeded;
    }
  }
  return report;
}

RunReport run_eval(const PipelineConfig & config)
{
  config.validate_eval();
  ensure_output_dir(config.output_dir);

  GroundTruth gt = config.annotation_dir.empty() ? load_gt_csv(config.gt_csv) : load_voc_directory(config.annotation_dir);
  if (!config.include_difficult) { gt = without_difficult(gt); }

  RunReport report;
  ProposalSet proposals;
  for (const auto & [id, boxes] : gt) {
    const fs::path file = config.proposal_dir / (id + ".csv");
    auto & list         = proposals[id];
    if (!fs::is_regular_file(file)) {
      report.messages.push_back("warning: no proposals for " + id + ", counted as empty");
      continue;
    }
    for (const auto & r : read_proposals_csv(file)) { list.push_back(r.box); }
    ++report.succeeded;
  }

  const MatchTable table(proposals, gt);
  const std::vector<double> grid = iou_grid(config.iou_step);

  for (std::size_t budget : config.budgets) {
    RecallCurve curve;
    for (double t : grid) { curve.points.emplace_back(t, table.recall(budget, t)); }
    write_curve_csv(config.output_dir / ("recall_iou_top" + std::to_string(budget) + ".csv"), curve);
  }

  std::vector<std::size_t> counts(config.max_count);
  std::iota(counts.begin(), counts.end(), std::size_t{1});
  for (double t : config.count_ious) {
    RecallCurve curve;
    for (std::size_t n : counts) { curve.points.emplace_back(static_cast<double>(n), table.recall(n, t)); }
    write_curve_csv(config.output_dir / ("recall_count_iou" + format_number(t) + ".csv"), curve);
  }

  auto ar_at = [&](std::size_t n) {
    double sum = 0.0;
    for (double t : grid) { sum += table.recall(n, t); }
    return sum / static_cast<double>(grid.size());
  };

  {
    std::ofstream out(config.output_dir / "ar_count.csv", std::ios::binary | std::ios::trunc);
    out << "count,average_recall\n";
    for (std::size_t n : counts) { out << n << ',' << format_number(ar_at(n)) << '\n'; }
    if (!out) { throw Error(ErrorCode::IoError, "failed writing ar_count.csv"); }
  }
  {
    std::ofstream out(config.output_dir / "summary.csv", std::ios::binary | std::ios::trunc);
    out << "budget,average_recall";
    for (double t : config.count_ious) { out << ",recall@" << format_number(t); }
    out << '\n';
    for (std::size_t budget : config.budgets) {
      out << budget << ',' << format_number(ar_at(budget));
      for (double t : config.count_ious) { out << ',' << format_number(table.recall(budget, t)); }
      out << '\n';
    }
    if (!out) { throw Error(ErrorCode::IoError, "failed writing summary.csv"); }
  }
  return report;
}

RunReport run_saliency_dump(const PipelineConfig & config, const fs::path & image_path,
                            const std::vector<ProposalRecord> & boxes)
{
  config.seg.validate();
  config.refine.validate();
  ensure_output_dir(config.output_dir);
  const std::string id = image_path.stem().string();
  const Raster image   = load_image(image_path);
  const ContourMap contour = obtain_contour(image, id, config);
  const SuperpixelLabeling labeling = segment_image(image, config.seg);
  save_labeling_png(config.output_dir / (id + "_segments.png"), labeling);
  save_gray(config.output_dir / (id + "_contour.png"), contour.values());

  RunReport report;
  for (std::size_t i = 0; i < boxes.size(); ++i) {
    for (int m = 0; m <= config.refine.max_index(); ++m) {
      try {
        const WindowRefinement wr = refine_window(boxes[i].box, m, labeling, contour, config.refine);
        save_saliency_png(config.output_dir / (id + "_b" + std::to_string(i) + "_m" + std::to_string(m) + ".png"),
                          wr.graph, wr.saliency);
        ++report.succeeded;
      } catch (const std::exception & e) {
        ++report.failed;
        report.messages.push_back("error: box " + std::to_string(i) + " window " + std::to_string(m) + ": " + e.what());
      }
    }
  }
  return report;
}

}  // namespace salprop
