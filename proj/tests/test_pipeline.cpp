#include "salprop/image_io.hpp"
#include "salprop/pipeline.hpp"

#include "test_support.hpp"

#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace salprop;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string & name)
{
  const fs::path dir = fs::temp_directory_path() / "salprop_pipeline_tests" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path & p)
{
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int run_cli(const std::string & args)
{
  const std::string cmd = std::string(SALPROP_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  const int status      = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

}  // namespace

TEST_CASE("proposal CSV round trip and header handling")
{
  const fs::path dir = fresh_dir("csv");
  const std::vector<ProposalRecord> recs{{{0, 0, 10, 10}, 0.75}, {{3, 4, 8, 9}, 1e-7}, {{1, 1, 2, 2}, 0.1}};
  write_proposals_csv(dir / "p.csv", recs);
  CHECK(slurp(dir / "p.csv").rfind("x1,y1,x2,y2,score\n", 0) == 0);
  const auto back = read_proposals_csv(dir / "p.csv");
  REQUIRE(back.size() == recs.size());
  for (std::size_t i = 0; i < recs.size(); ++i) {
    CHECK(back[i].box == recs[i].box);
    CHECK(back[i].score == recs[i].score);
  }
  {
    std::ofstream out(dir / "noheader.csv");
    out << "1,2,3,4\n5.4,6,7,8,0.5\n";
  }
  const auto plain = read_proposals_csv(dir / "noheader.csv");
  REQUIRE(plain.size() == 2);
  CHECK(plain[1].box == BBox{5, 6, 7, 8});
  {
    std::ofstream out(dir / "broken.csv");
    out << "x1,y1,x2,y2,score\n1,2,3\n";
  }
  CHECK_THROWS_AS(read_proposals_csv(dir / "broken.csv"), Error);
}

TEST_CASE("refine_image expands then suppresses")
{
  std::mt19937 rng(31);
  const auto scene = testing::make_scene(rng);
  std::vector<ProposalRecord> inputs;
  for (int i = 0; i < 10; ++i) { inputs.push_back({testing::jitter_box(rng, scene.truth, 0.4, 0.8, 128, 128), 1.0 - i * 0.05}); }
  PipelineConfig cfg;
  cfg.rank.max_proposals = 12;
  const auto result = refine_image(scene.image, sobel_contour(scene.image), inputs, cfg);
  CHECK(result.refined_sorted.size() == 40);
  CHECK(result.input_ordered.size() == 10);
  CHECK(result.final_proposals.size() <= 12);
  CHECK(!result.final_proposals.empty());
  for (std::size_t i = 1; i < result.refined_sorted.size(); ++i) {
    CHECK(result.refined_sorted[i - 1].score >= result.refined_sorted[i].score);
  }

  const auto empty = refine_image(scene.image, sobel_contour(scene.image), {}, cfg);
  CHECK(empty.final_proposals.empty());
}

TEST_CASE("fallback guarantee keeps every distinct input box")
{
  std::mt19937 rng(6);
  const Raster img = testing::random_blocks(rng, 80, 60, 10);
  std::vector<ProposalRecord> inputs;
  for (int i = 0; i < 6; ++i) { inputs.push_back({BBox{5 + 10 * i, 5, 15 + 10 * i, 40}, 0.0}); }
  inputs.push_back({BBox{500, 500, 600, 600}, 0.0});  // outside, dropped
  PipelineConfig cfg;
  const auto result = refine_image(img, ContourMap(Raster::Zero(60, 80)), inputs, cfg);
  CHECK(result.dropped_inputs == 1);
  CHECK(result.final_proposals.size() >= 6);
}

TEST_CASE("run_refine and run_eval over directories")
{
  const fs::path root = fresh_dir("runs");
  fs::create_directories(root / "images");
  fs::create_directories(root / "proposals");
  fs::create_directories(root / "ann");
  std::mt19937 rng(77);
  std::ofstream gt(root / "gt.csv");
  gt << "image_id,x1,y1,x2,y2\n";
  for (int i = 0; i < 3; ++i) {
    const auto scene     = testing::make_scene(rng);
    const std::string id = "scene" + std::to_string(i);
    save_gray(root / "images" / (id + ".pgm"), scene.image);
    write_proposals_csv(root / "proposals" / (id + ".csv"),
                        {{testing::jitter_box(rng, scene.truth, 0.5, 0.7, 128, 128), 1.0}});
    gt << id << ',' << scene.truth.x1 << ',' << scene.truth.y1 << ',' << scene.truth.x2 << ',' << scene.truth.y2 << '\n';
  }
  gt.close();

  PipelineConfig cfg;
  cfg.image_dir    = root / "images";
  cfg.proposal_dir = root / "proposals";
  cfg.output_dir   = root / "out";
  const RunReport report = run_refine(cfg);
  CHECK(report.succeeded == 3);
  CHECK(report.failed == 0);
  CHECK(fs::is_regular_file(root / "out" / "scene0.csv"));

  // missing proposal file is a per-image failure
  fs::copy_file(root / "images" / "scene0.pgm", root / "images" / "orphan.pgm");
  const RunReport partial = run_refine(cfg);
  CHECK(partial.succeeded == 3);
  CHECK(partial.failed == 1);
  fs::remove(root / "images" / "orphan.pgm");

  PipelineConfig ecfg;
  ecfg.proposal_dir = root / "out";
  ecfg.gt_csv       = root / "gt.csv";
  ecfg.output_dir   = root / "eval";
  ecfg.max_count    = 20;
  const RunReport er = run_eval(ecfg);
  CHECK(er.succeeded == 3);
  for (const char * f : {"recall_iou_top500.csv", "recall_iou_top1000.csv", "recall_iou_top2000.csv", "recall_count_iou0.7.csv",
                         "recall_count_iou0.8.csv", "recall_count_iou0.9.csv", "ar_count.csv", "summary.csv"}) {
    CHECK_MESSAGE(fs::is_regular_file(root / "eval" / f), f);
  }
}

TEST_CASE("ground truth evaluated against itself is flat at 1")
{
  const fs::path root = fresh_dir("selfeval");
  fs::create_directories(root / "props");
  std::ofstream gt(root / "gt.csv");
  gt << "image_id,x1,y1,x2,y2\nimgA,0,0,10,10\nimgA,20,20,40,50\nimgB,3,3,9,9\n";
  gt.close();
  write_proposals_csv(root / "props" / "imgA.csv", {{{0, 0, 10, 10}, 1.0}, {{20, 20, 40, 50}, 0.5}});
  write_proposals_csv(root / "props" / "imgB.csv", {{{3, 3, 9, 9}, 1.0}});
  PipelineConfig cfg;
  cfg.proposal_dir = root / "props";
  cfg.gt_csv       = root / "gt.csv";
  cfg.output_dir   = root / "eval";
  cfg.max_count    = 5;
  run_eval(cfg);
  for (const auto & entry : fs::directory_iterator(root / "eval")) {
    std::ifstream in(entry.path());
    std::string line;
    std::getline(in, line);
    int rows = 0;
    while (std::getline(in, line)) {
      const auto f = split_csv_line(line);
      if (entry.path().filename() == "summary.csv") {
        for (std::size_t i = 1; i < f.size(); ++i) { CHECK(parse_number(f[i]) == 1.0); }
      } else if (parse_number(f[0]) >= 2 || entry.path().filename().string().rfind("recall_iou", 0) == 0) {
        CHECK_MESSAGE(parse_number(f.back()) == 1.0, entry.path().filename().string() << ": " << line);
      }
      ++rows;
    }
    CHECK(rows > 0);
  }
}

TEST_CASE("missing proposal file during eval counts as zero proposals")
{
  const fs::path root = fresh_dir("missing");
  fs::create_directories(root / "props");
  std::ofstream(root / "gt.csv") << "image_id,x1,y1,x2,y2\nonly,0,0,10,10\n";
  PipelineConfig cfg;
  cfg.proposal_dir = root / "props";
  cfg.gt_csv       = root / "gt.csv";
  cfg.output_dir   = root / "eval";
  cfg.max_count    = 3;
  const RunReport r = run_eval(cfg);
  CHECK(r.messages.size() == 1);
  std::ifstream in(root / "eval" / "summary.csv");
  std::string header, row;
  std::getline(in, header);
  std::getline(in, row);
  CHECK(row == "500,0,0,0,0");
}

TEST_CASE("config validation")
{
  PipelineConfig cfg;
  try {
    cfg.validate_refine();
    FAIL("expected ConfigError");
  } catch (const Error & e) {
    CHECK(e.code() == ErrorCode::ConfigError);
  }
  CHECK_THROWS_AS(cfg.validate_eval(), Error);
}

TEST_CASE("command line interface")
{
  const fs::path root = fresh_dir("cli");
  fs::create_directories(root / "images");
  fs::create_directories(root / "props");
  std::mt19937 rng(5);
  const auto scene = testing::make_scene(rng);
  save_gray(root / "images" / "s.png", scene.image);
  write_proposals_csv(root / "props" / "s.csv", {{testing::jitter_box(rng, scene.truth, 0.5, 0.7, 128, 128), 1.0}});
  std::ofstream(root / "gt.csv") << "s," << scene.truth.x1 << ',' << scene.truth.y1 << ',' << scene.truth.x2 << ','
                                 << scene.truth.y2 << '\n';

  const std::string r = root.string();
  CHECK(run_cli("refine --images " + r + "/images --proposals " + r + "/props --output " + r + "/out") == 0);
  CHECK(fs::is_regular_file(root / "out" / "s.csv"));
  CHECK(run_cli("eval --proposals " + r + "/out --gt-csv " + r + "/gt.csv --output " + r + "/eval --max-count 10") == 0);
  CHECK(fs::is_regular_file(root / "eval" / "summary.csv"));

  // config file with flag override
  std::ofstream(root / "run.ini") << "images = \"" << r << "/images\"\nproposals = \"" << r << "/props\"\noutput = \"" << r
                                  << "/out2\"\nlambda = 0.8\ndeltas = [1, 5, 15]\n";
  CHECK(run_cli("refine --config " + r + "/run.ini --workers 2") == 0);
  CHECK(fs::is_regular_file(root / "out2" / "s.csv"));

  CHECK(run_cli("saliency-dump --image " + r + "/images/s.png --box 10,10,100,100 --output " + r + "/dump") == 0);
  CHECK(fs::is_regular_file(root / "dump" / "s_b0_m3.png"));
  CHECK(fs::is_regular_file(root / "dump" / "s_segments.png"));

  CHECK(run_cli("refine --images " + r + "/nope --proposals " + r + "/props --output " + r + "/out") == 2);
  CHECK(run_cli("refine --lambda 1.5 --images " + r + "/images --proposals " + r + "/props --output " + r + "/out") == 2);
  CHECK(run_cli("frobnicate") == 2);
  CHECK(run_cli("refine --contour-source file --contours " + r + "/props --images " + r + "/images --proposals " + r +
                "/props --output " + r + "/out3") == 1);
}
