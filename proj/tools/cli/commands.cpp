#include "cli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>
#include <set>

#include "cli/report.hpp"
#include "voidinspect/image_io.hpp"

namespace voidinspect::cli {

namespace fs = std::filesystem;

namespace {

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

void require_inputs(const std::vector<fs::path>& files) {
  if (files.empty()) throw UsageError("no inputs");
}

void check_unique_stems(const std::vector<fs::path>& files) {
  std::set<std::string> seen;
  for (const fs::path& f : files)
    if (!seen.insert(f.stem().string()).second) throw UsageError("duplicate input name " + f.stem().string());
}

void make_out_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw UsageError("cannot create output directory " + dir.string() + ": " + ec.message());
}

struct ImageJob {
  GrayImage image;
  std::vector<ImageInspection> results;  // one per configured method
  std::string error;
};

// Images run concurrently when there are several; a single image spreads
// its balls over the workers instead.
std::vector<ImageJob> run_images(const std::vector<fs::path>& files, const RunConfig& cfg, bool keep_edges) {
  std::vector<ImageJob> jobs(files.size());
  const int outer = files.size() > 1 ? cfg.jobs : 1;
  const int inner = files.size() > 1 ? 1 : cfg.jobs;
  parallel_for(files.size(), outer, [&](std::size_t i) {
    ImageJob& job = jobs[i];
    try {
      job.image = load_image(files[i]);
      const std::vector<BallRegion> balls = segment_balls(job.image, cfg.segmentation);
      for (std::size_t m = 0; m < cfg.methods.size(); ++m)
        job.results.push_back(inspect_balls(job.image, balls, cfg.inspect, cfg.baseline, cfg.methods[m], inner,
                                            keep_edges && m == 0));
    } catch (const std::exception& e) {
      job.error = e.what();
      job.results.clear();
    }
  });
  return jobs;
}

// Directory listings skip files this tool writes next to its inputs.
std::vector<fs::path> image_inputs(const std::vector<fs::path>& inputs) {
  return expand_inputs(inputs, {".png", ".pgm"}, {".voids.png", ".overlay.png", ".truth.png", ".edges.png"});
}

fs::path truth_path_for(const fs::path& image, const Invocation& inv) {
  const fs::path dir = inv.truth_dir ? *inv.truth_dir : image.parent_path();
  return dir / (image.stem().string() + ".truth.json");
}

}  // namespace

std::vector<fs::path> expand_inputs(const std::vector<fs::path>& inputs, const std::vector<std::string>& suffixes,
                                   const std::vector<std::string>& excluded) {
  std::vector<fs::path> out;
  for (const fs::path& in : inputs) {
    if (!fs::is_directory(in)) {
      out.push_back(in);
      continue;
    }
    std::vector<fs::path> found;
    for (const auto& entry : fs::directory_iterator(in)) {
      if (!entry.is_regular_file()) continue;
      const std::string name = entry.path().filename().string();
      if (std::any_of(excluded.begin(), excluded.end(), [&](const std::string& s) { return ends_with(name, s); }))
        continue;
      for (const std::string& s : suffixes)
        if (ends_with(name, s)) {
          found.push_back(entry.path());
          break;
        }
    }
    std::sort(found.begin(), found.end());
    out.insert(out.end(), found.begin(), found.end());
  }
  return out;
}

int cmd_inspect(const Invocation& inv, std::ostream& out, std::ostream& err) {
  const RunConfig& cfg = inv.config;
  const std::vector<fs::path> files = image_inputs(inv.inputs);
  require_inputs(files);
  check_unique_stems(files);
  make_out_dir(cfg.out);

  const std::string hash = params_hash(cfg);
  const std::vector<ImageJob> jobs = run_images(files, cfg, cfg.dump_edges);
  std::vector<CsvRow> rows;
  int failed = 0;
  for (std::size_t i = 0; i < files.size(); ++i) {
    const ImageJob& job = jobs[i];
    const std::string name = files[i].filename().string();
    const std::string stem = files[i].stem().string();
    if (!job.error.empty()) {
      err << "error: " << files[i].string() << ": " << job.error << "\n";
      ++failed;
      continue;
    }
    try {
      for (std::size_t m = 0; m < cfg.methods.size(); ++m) {
        const ImageInspection& res = job.results[m];
        const std::string base = stem + "." + to_string(cfg.methods[m]);
        const std::string mask_file = base + ".voids.png";
        write_text(cfg.out / (base + ".json"), dump(report_json(name, hash, cfg.methods[m], mask_file, res)));
        save_png(cfg.out / mask_file, mask_to_image(void_mask(job.image.width(), job.image.height(), res)));
        if (cfg.overlay) save_png(cfg.out / (base + ".overlay.png"), make_overlay(job.image, res));
        for (std::size_t b = 0; b < res.edges.size(); ++b)
          save_png(cfg.out / (stem + ".ball" + std::to_string(b) + ".edges.png"), mask_to_image(res.edges[b].edges));
        for (std::size_t b = 0; b < res.reports.size(); ++b)
          rows.push_back({name, b, res.reports[b].ball.provenance, res.reports[b].void_percentage,
                          res.reports[b].regions.size(), cfg.methods[m]});
        out << name << " [" << to_string(cfg.methods[m]) << "]: " << res.reports.size() << " balls\n";
      }
    } catch (const std::exception& e) {
      err << "error: " << files[i].string() << ": " << e.what() << "\n";
      ++failed;
    }
  }
  std::stable_sort(rows.begin(), rows.end(), [](const CsvRow& a, const CsvRow& b) {
    return std::tie(a.image, a.method, a.ball_index) < std::tie(b.image, b.method, b.ball_index);
  });
  write_text(cfg.out / "summary.csv", summary_csv(rows));
  return failed ? 1 : 0;
}

int cmd_synth(const Invocation& inv, std::ostream& out, std::ostream&) {
  const RunConfig& cfg = inv.config;
  if (inv.count < 1) throw UsageError("count must be >= 1");
  make_out_dir(cfg.out);
  for (int k = 0; k < inv.count; ++k) {
    SynthSpec spec = cfg.synth;
    spec.seed = cfg.synth.seed + static_cast<std::uint64_t>(k);
    const SynthImage s = generate(spec);
    const std::string stem = "synth_" + std::to_string(spec.seed);
    save_png(cfg.out / (stem + ".png"), s.image);
    save_png(cfg.out / (stem + ".truth.png"), mask_to_image(s.truth.void_mask));
    write_text(cfg.out / (stem + ".truth.json"), dump(truth_json(stem + ".png", stem + ".truth.png", spec, s.truth)));
    out << stem << ".png\n";
  }
  return 0;
}

int cmd_eval(const Invocation& inv, std::ostream& out, std::ostream& err) {
  const RunConfig& cfg = inv.config;
  const std::vector<fs::path> files = expand_inputs(inv.inputs, {".proposed.json", ".baseline.json"});
  require_inputs(files);
  make_out_dir(cfg.out);
  int failed = 0;
  for (const fs::path& report_path : files) {
    try {
      const nlohmann::json report = read_json(report_path);
      const fs::path image = report.at("image").get<std::string>();
      const std::string method = report.at("method").get<std::string>();
      const fs::path truth_path = truth_path_for(report_path.parent_path() / image, inv);
      const GroundTruth truth = load_truth(truth_path);
      const BinaryMask predicted =
          image_to_mask(load_image(report_path.parent_path() / report.at("void_mask").get<std::string>()));
      if (!predicted.same_shape(truth.width, truth.height)) throw Error("void mask size does not match the truth");
      const std::vector<Point> pixels = set_pixels(predicted);

      std::vector<ScoreCard> cards;
      ordered_json balls = ordered_json::array();
      for (const BallTruth& t : truth.balls) {
        const nlohmann::json* match = nullptr;
        double best = 0.0;
        for (const auto& b : report.at("balls")) {
          const double d = std::hypot(b.at("center").at("x").get<double>() - t.center.x,
                                      b.at("center").at("y").get<double>() - t.center.y);
          if (d <= 0.5 * t.radius && (!match || d < best)) {
            match = &b;
            best = d;
          }
        }
        const ScoreCard card =
            match ? score_pixels(pixels, t, static_cast<int>(match->at("regions").size()),
                                 match->at("void_pct").get<double>())
                  : score_pixels({}, t, 0, 0.0);
        cards.push_back(card);
        ordered_json entry = {{"row", t.index.row}, {"col", t.index.col}, {"matched", match != nullptr}};
        entry.update(score_json(card));
        balls.push_back(std::move(entry));
      }
      const MeanScores mean = mean_scores(cards);
      ordered_json j;
      j["report"] = report_path.filename().string();
      j["truth"] = truth_path.filename().string();
      j["method"] = method;
      j["mean"] = {{"iou", mean.iou ? ordered_json(round3(*mean.iou)) : ordered_json(nullptr)},
                   {"precision", mean.precision ? ordered_json(round3(*mean.precision)) : ordered_json(nullptr)},
                   {"recall", mean.recall ? ordered_json(round3(*mean.recall)) : ordered_json(nullptr)},
                   {"area_pct_error", round3(mean.area_pct_error)},
                   {"balls", mean.balls}};
      j["balls"] = std::move(balls);
      const std::string stem = fs::path(image).stem().string() + "." + method;
      write_text(cfg.out / (stem + ".eval.json"), dump(j));
      out << report_path.filename().string() << ": mean iou "
          << (mean.iou ? std::to_string(round3(*mean.iou)) : std::string("n/a")) << "\n";
    } catch (const std::exception& e) {
      err << "error: " << report_path.string() << ": " << e.what() << "\n";
      ++failed;
    }
  }
  return failed ? 1 : 0;
}

int cmd_compare(const Invocation& inv, std::ostream& out, std::ostream& err) {
  RunConfig cfg = inv.config;
  cfg.methods = {Method::proposed, Method::baseline};
  const std::vector<fs::path> files = image_inputs(inv.inputs);
  require_inputs(files);
  check_unique_stems(files);
  make_out_dir(cfg.out);

  const std::vector<ImageJob> jobs = run_images(files, cfg, false);
  std::vector<Comparison> parts;
  ordered_json images = ordered_json::array();
  ordered_json balls = ordered_json::array();
  std::string csv = "image,row,col,proposed_recall,baseline_recall,proposed_iou,baseline_iou\n";
  auto cell = [](const std::optional<double>& v) { return v ? std::to_string(round3(*v)) : std::string(); };
  auto opt = [](const std::optional<double>& v) { return v ? ordered_json(round3(*v)) : ordered_json(nullptr); };
  int failed = 0;
  for (std::size_t i = 0; i < files.size(); ++i) {
    const std::string name = files[i].filename().string();
    try {
      if (!jobs[i].error.empty()) throw Error(jobs[i].error);
      const GroundTruth truth = load_truth(truth_path_for(files[i], inv));
      const Comparison c = compare(truth, jobs[i].results[0].reports, jobs[i].results[1].reports);
      images.push_back({{"image", name},
                        {"proposed_recall", opt(c.proposed_recall)},
                        {"baseline_recall", opt(c.baseline_recall)},
                        {"ordering_holds", c.ordering_holds},
                        {"no_voids", c.no_voids}});
      for (const PairedScore& p : c.balls) {
        balls.push_back({{"image", name},
                         {"row", p.index.row},
                         {"col", p.index.col},
                         {"proposed", score_json(p.proposed)},
                         {"baseline", score_json(p.baseline)}});
        csv += name + "," + std::to_string(p.index.row) + "," + std::to_string(p.index.col) + "," +
               cell(p.proposed.recall) + "," + cell(p.baseline.recall) + "," + cell(p.proposed.iou) + "," +
               cell(p.baseline.iou) + "\n";
      }
      parts.push_back(c);
    } catch (const std::exception& e) {
      err << "error: " << files[i].string() << ": " << e.what() << "\n";
      ++failed;
    }
  }
  const Comparison all = combine(parts);
  ordered_json j;
  j["proposed_recall"] = opt(all.proposed_recall);
  j["baseline_recall"] = opt(all.baseline_recall);
  j["ordering_holds"] = all.ordering_holds;
  j["strict"] = all.strict;
  j["no_voids"] = all.no_voids;
  j["images"] = std::move(images);
  j["balls"] = std::move(balls);
  write_text(cfg.out / "compare.json", dump(j));
  write_text(cfg.out / "compare.csv", csv);
  out << "proposed_recall " << (all.proposed_recall ? std::to_string(*all.proposed_recall) : "n/a")
      << "  baseline_recall " << (all.baseline_recall ? std::to_string(*all.baseline_recall) : "n/a")
      << "  ordering_holds " << (all.ordering_holds ? "true" : "false") << (all.no_voids ? "  (no voids)" : "")
      << "\n";
  return failed ? 1 : 0;
}

}  // namespace voidinspect::cli
