// salprop: saliency-based refinement and evaluation of object proposals.
//
//   salprop refine --images DIR --proposals DIR --output DIR [--contour-source file --contours DIR]
//   salprop eval   --proposals DIR (--annotations DIR | --gt-csv FILE) --output DIR
//   salprop saliency-dump --image FILE (--boxes FILE | --box x1,y1,x2,y2 ...) --output DIR
//
// Every option may also be given in a key = value config file via --config.

#include "salprop/pipeline.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

namespace {

constexpr int kExitOk      = 0;
constexpr int kExitPartial = 1;
constexpr int kExitConfig  = 2;

int report_exit(const salprop::RunReport & report, const char * what)
{
  for (const auto & m : report.messages) { std::cerr << m << '\n'; }
  std::cerr << what << ": " << report.succeeded << " ok, " << report.failed << " failed\n";
  return report.failed > 0 ? kExitPartial : kExitOk;
}

}  // namespace

int main(int argc, char ** argv)
{
  salprop::PipelineConfig cfg;
  std::string contour_source = "sobel";

  CLI::App app{"Saliency-based object proposal refinement"};
  app.set_config("--config", "", "key = value configuration file");
  app.require_subcommand(1);

  app.add_option("--sigma", cfg.seg.sigma, "Gaussian pre-smoothing for segmentation")->capture_default_str();
  app.add_option("--k", cfg.seg.k, "Segmentation scale constant")->capture_default_str();
  app.add_option("--min-size", cfg.seg.min_size, "Minimum superpixel size in pixels")->capture_default_str();
  app.add_option("--threshold", cfg.refine.threshold, "Binarization threshold T on normalized saliency")->capture_default_str();
  app.add_option("--deltas", cfg.refine.deltas, "Window enlargement widths, one per window size")
    ->delimiter(',')
    ->capture_default_str();
  app.add_option("--lambda", cfg.rank.lambda, "Area exponent of the ranking score")->capture_default_str();
  app.add_option("--nms-iou", cfg.rank.nms_iou, "NMS IoU threshold")->capture_default_str();
  app.add_option("--max-proposals", cfg.rank.max_proposals, "Output proposal budget per image")->capture_default_str();
  app.add_option("--contour-source", contour_source, "Contour source")
    ->check(CLI::IsMember({"sobel", "file"}))
    ->capture_default_str();
  app.add_option("--contours", cfg.contour_dir, "Directory of precomputed contour maps (<id>.png|.pgm)");
  app.add_flag("--contour-fallback", cfg.contour_fallback, "Use the Sobel contour when a contour file is missing");
  app.add_option("--images", cfg.image_dir, "Image directory");
  app.add_option("--proposals", cfg.proposal_dir, "Proposal CSV directory (<id>.csv)");
  app.add_option("--output", cfg.output_dir, "Output directory");
  app.add_option("--annotations", cfg.annotation_dir, "VOC XML annotation directory");
  app.add_option("--gt-csv", cfg.gt_csv, "Ground-truth CSV (image_id,x1,y1,x2,y2)");
  app.add_option("--budgets", cfg.budgets, "Proposal budgets for recall-IoU curves")->delimiter(',')->capture_default_str();
  app.add_option("--count-ious", cfg.count_ious, "IoU thresholds for recall-vs-count curves")
    ->delimiter(',')
    ->capture_default_str();
  app.add_option("--max-count", cfg.max_count, "Largest proposal count in count sweeps")->capture_default_str();
  app.add_option("--iou-step", cfg.iou_step, "IoU grid step for average recall")->capture_default_str();
  app.add_flag("--include-difficult", cfg.include_difficult, "Keep objects flagged difficult");
  app.add_option("--workers", cfg.workers, "Worker threads")->capture_default_str();

  auto * refine = app.add_subcommand("refine", "Refine and re-rank proposals for every image")->fallthrough();
  auto * eval   = app.add_subcommand("eval", "Recall curves and average recall against ground truth")->fallthrough();
  auto * dump   = app.add_subcommand("saliency-dump", "Write per-box saliency maps for one image")->fallthrough();

  std::filesystem::path dump_image, dump_boxes;
  std::vector<std::string> dump_box_args;
  std::size_t dump_max_boxes = 10;
  dump->add_option("--image", dump_image, "Image file")->required();
  dump->add_option("--boxes", dump_boxes, "Proposal CSV with boxes to visualise");
  dump->add_option("--box", dump_box_args, "Box as x1,y1,x2,y2 (repeatable)");
  dump->add_option("--max-boxes", dump_max_boxes, "Visualise at most this many boxes")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError & e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  cfg.contour_source = contour_source == "file" ? salprop::ContourSource::file : salprop::ContourSource::sobel;

  try {
    if (refine->parsed()) { return report_exit(salprop::run_refine(cfg), "refine"); }
    if (eval->parsed()) {
      const auto report = salprop::run_eval(cfg);
      std::ifstream summary(cfg.output_dir / "summary.csv");
      std::cout << summary.rdbuf();
      return report_exit(report, "eval");
    }
    if (dump->parsed()) {
      std::vector<salprop::ProposalRecord> boxes;
      if (!dump_boxes.empty()) { boxes = salprop::read_proposals_csv(dump_boxes); }
      for (const auto & arg : dump_box_args) {
        const auto f = salprop::split_csv_line(arg);
        if (f.size() != 4) { throw salprop::Error(salprop::ErrorCode::ConfigError, "--box expects x1,y1,x2,y2"); }
        boxes.push_back({salprop::make_box(static_cast<int>(salprop::parse_number(f[0])), static_cast<int>(salprop::parse_number(f[1])),
                                           static_cast<int>(salprop::parse_number(f[2])), static_cast<int>(salprop::parse_number(f[3]))),
                         0.0});
      }
      if (boxes.empty()) { throw salprop::Error(salprop::ErrorCode::ConfigError, "no boxes given (--boxes or --box)"); }
      if (boxes.size() > dump_max_boxes) { boxes.resize(dump_max_boxes); }
      return report_exit(salprop::run_saliency_dump(cfg, dump_image, boxes), "saliency-dump");
    }
  } catch (const salprop::Error & e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.code() == salprop::ErrorCode::ConfigError ? kExitConfig : kExitPartial;
  } catch (const std::exception & e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitPartial;
  }
  return kExitOk;
}
