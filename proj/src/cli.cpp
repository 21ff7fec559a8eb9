#include "lanekit/cli.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <numeric>

#include <CLI11.hpp>
#include <json.hpp>

#include "lanekit/bench.hpp"
#include "lanekit/decoder.hpp"
#include "lanekit/encoder.hpp"
#include "lanekit/error.hpp"
#include "lanekit/lane_io.hpp"
#include "lanekit/losses.hpp"
#include "lanekit/metrics.hpp"
#include "lanekit/run_config.hpp"
#include "lanekit/synth.hpp"
#include "lanekit/tensor_io.hpp"

namespace lanekit {

namespace {

using nlohmann::json;

// Fixed 6-significant-digit formatting keeps CLI tables diff-able.
std::string fmt6(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

RunConfig load_config_opt(const std::string& path) {
  if (path.empty()) return run_config_from_json("");
  return load_run_config(path);
}

std::vector<LaneCurve> densified_curves(const LaneFile& file) {
  std::vector<LaneCurve> curves;
  curves.reserve(file.lanes.size());
  for (const LaneFile::Entry& e : file.lanes) curves.push_back(densify(e.curve));
  return curves;
}

void write_json_file(const std::string& path, const json& j) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << j.dump(2) << "\n";
}

int cmd_encode(const std::string& lanes_path, const std::string& prefix,
               const std::string& config_path, bool f32) {
  const RunConfig cfg = load_config_opt(config_path);
  const LaneFile file = read_lane_file(lanes_path);
  const std::vector<LaneCurve> curves = densified_curves(file);
  const GroundTruthMaps gt = encode(curves, file.image, cfg.encoder);
  const TensorDtype dtype = f32 ? TensorDtype::f32 : TensorDtype::f64;
  write_plane(prefix + "_heat.lkt", gt.heat, dtype);
  write_plane(prefix + "_off_up.lkt", gt.off_up, dtype);
  write_plane(prefix + "_off_mid.lkt", gt.off_mid, dtype);
  write_plane(prefix + "_off_down.lkt", gt.off_down, dtype);
  write_plane(prefix + "_mask.lkt", gt.mask, dtype);
  std::cout << "encoded " << file.lanes.size() << " lanes ("
            << file.image.width << "x" << file.image.height << ") -> "
            << prefix << "_{heat,off_up,off_mid,off_down,mask}.lkt\n";
  return 0;
}

int cmd_decode(const std::string& logits_path, const std::string& out_path,
               const std::string& decoder, const std::string& config_path) {
  const RunConfig cfg = load_config_opt(config_path);
  const LogitMaps logits = read_logits(logits_path);
  std::vector<DecodedLane> lanes;
  if (decoder == "greedy")
    lanes = greedy_decode(logits, cfg.decoder);
  else if (decoder == "efficient")
    lanes = efficient_decode(logits, cfg.decoder);
  else
    throw std::invalid_argument("unknown decoder: " + decoder);

  LaneFile out;
  out.image = logits.spec();
  for (size_t i = 0; i < lanes.size(); ++i) {
    LaneFile::Entry entry;
    entry.curve.id = static_cast<int>(i);
    entry.curve.points = lanes[i].points;
    entry.score = std::accumulate(lanes[i].scores.begin(),
                                  lanes[i].scores.end(), 0.0) /
                  static_cast<double>(lanes[i].scores.size());
    out.lanes.push_back(std::move(entry));
  }
  write_lane_file(out_path, out);
  std::cout << "decoded " << lanes.size() << " lanes (" << decoder << ") -> "
            << out_path << "\n";
  return 0;
}

int cmd_loss(const std::string& logits_path, const std::string& lanes_path,
             const std::string& config_path, const std::string& json_path) {
  const RunConfig cfg = load_config_opt(config_path);
  const LogitMaps logits = read_logits(logits_path);
  const LaneFile file = read_lane_file(lanes_path);
  const std::vector<LaneCurve> curves = densified_curves(file);
  const GroundTruthMaps gt = encode(curves, logits.spec(), cfg.encoder);
  const LossReport report = total_loss(logits, gt, curves, cfg.loss);

  std::cout << "heat   " << fmt6(report.heat_loss) << "\n"
            << "up     " << fmt6(report.loss_up) << "\n"
            << "down   " << fmt6(report.loss_down) << "\n"
            << "mid    " << fmt6(report.loss_mid) << "\n"
            << "total  " << fmt6(report.total) << "\n"
            << "n_pos  " << report.n_pos << "\n";
  if (report.empty_mask)
    std::cerr << "warning: empty supervision mask, offset losses are 0\n";
  if (!json_path.empty()) {
    json j;
    j["heat_loss"] = report.heat_loss;
    j["loss_up"] = report.loss_up;
    j["loss_down"] = report.loss_down;
    j["loss_mid"] = report.loss_mid;
    j["total"] = report.total;
    j["n_pos"] = report.n_pos;
    j["n_supervised"] = report.n_supervised;
    j["empty_mask"] = report.empty_mask;
    write_json_file(json_path, j);
  }
  return 0;
}

int cmd_eval(const std::vector<std::string>& pred_paths,
             const std::vector<std::string>& gt_paths,
             const std::string& metric, const std::string& json_path,
             double pt_thresh, double match_thresh, double iou_thresh,
             double width) {
  if (pred_paths.size() != gt_paths.size())
    throw std::invalid_argument("--pred and --gt need the same file count");
  std::vector<std::vector<LaneCurve>> preds, gts;
  ImageSpec spec;
  for (size_t i = 0; i < pred_paths.size(); ++i) {
    const LaneFile p = read_lane_file(pred_paths[i]);
    const LaneFile g = read_lane_file(gt_paths[i]);
    spec = g.image;
    preds.push_back(lane_file_curves(p));
    gts.push_back(lane_file_curves(g));
  }

  json j;
  if (metric == "tusimple") {
    const TusimpleReport r = eval_tusimple(preds, gts, pt_thresh, match_thresh);
    std::cout << "accuracy " << fmt6(r.accuracy) << "\n"
              << "fp       " << fmt6(r.fp_rate) << "\n"
              << "fn       " << fmt6(r.fn_rate) << "\n";
    j["metric"] = "tusimple";
    j["accuracy"] = r.accuracy;
    j["fp"] = r.fp_rate;
    j["fn"] = r.fn_rate;
  } else if (metric == "culane") {
    const CulaneReport r = eval_culane(preds, gts, spec, iou_thresh, width);
    std::cout << "tp " << r.tp << "  fp " << r.fp << "  fn " << r.fn << "\n"
              << "precision " << fmt6(r.precision) << "\n"
              << "recall    " << fmt6(r.recall) << "\n"
              << "f1        " << fmt6(r.f1) << "\n";
    j["metric"] = "culane";
    j["tp"] = r.tp;
    j["fp"] = r.fp;
    j["fn"] = r.fn;
    j["precision"] = r.precision;
    j["recall"] = r.recall;
    j["f1"] = r.f1;
  } else {
    throw std::invalid_argument("unknown metric: " + metric);
  }
  if (!json_path.empty()) write_json_file(json_path, j);
  return 0;
}

int cmd_synth(const std::string& config_path, const std::string& prefix,
              bool f32) {
  const RunConfig cfg = load_config_opt(config_path);
  const std::vector<LaneCurve> curves = gen_scene(cfg.scene);
  const LogitMaps ideal = render_ideal(curves, cfg.image, cfg.encoder);
  const TensorDtype dtype = f32 ? TensorDtype::f32 : TensorDtype::f64;

  LaneFile file;
  file.image = cfg.image;
  for (const LaneCurve& c : curves) file.lanes.push_back({c, std::nullopt});
  write_lane_file(prefix + "_lanes.json", file);
  write_logits(prefix + "_ideal.lkt", ideal, dtype);
  std::cout << "scene seed " << cfg.scene.seed << ": " << curves.size()
            << " lanes -> " << prefix << "_lanes.json, " << prefix
            << "_ideal.lkt\n";

  const bool noisy = cfg.noise.score_noise_sd > 0.0 ||
                     cfg.noise.offset_noise_sd > 0.0 ||
                     cfg.noise.dropout_prob > 0.0;
  if (noisy) {
    const LogitMaps noisyMaps = perturb(ideal, cfg.noise, cfg.encoder);
    write_logits(prefix + "_noisy.lkt", noisyMaps, dtype);
    std::cout << "perturbed logits -> " << prefix << "_noisy.lkt\n";
  }
  return 0;
}

int cmd_bench(const std::string& config_path, int scenes_override,
              const std::string& json_path) {
  RunConfig cfg = load_config_opt(config_path);
  if (scenes_override > 0) cfg.bench_scenes = scenes_override;
  const BenchReport r = run_bench(cfg);
  std::cout << "scenes            " << r.scenes << " (" << r.image.width << "x"
            << r.image.height << ", " << r.n_lanes << " lanes)\n"
            << "greedy median     " << fmt6(r.greedy_median_ms) << " ms (p95 "
            << fmt6(r.greedy_p95_ms) << ")\n"
            << "efficient median  " << fmt6(r.efficient_median_ms)
            << " ms (p95 " << fmt6(r.efficient_p95_ms) << ")\n"
            << "speedup           " << fmt6(r.speedup) << "x\n"
            << "result hash       " << r.result_hash << "\n";
  if (!json_path.empty()) {
    json j;
    j["scenes"] = r.scenes;
    j["image"] = {r.image.width, r.image.height};
    j["n_lanes"] = r.n_lanes;
    j["greedy_ms"] = {{"median", r.greedy_median_ms}, {"p95", r.greedy_p95_ms}};
    j["efficient_ms"] =
        {{"median", r.efficient_median_ms}, {"p95", r.efficient_p95_ms}};
    j["speedup"] = r.speedup;
    j["greedy_points"] = r.greedy_points;
    j["efficient_points"] = r.efficient_points;
    j["result_hash"] = r.result_hash;
    j["per_scene_greedy_ms"] = r.greedy_ms;
    j["per_scene_efficient_ms"] = r.efficient_ms;
    write_json_file(json_path, j);
  }
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args) {
  CLI::App app{"lane keypoint toolkit: ground-truth encoding, losses, "
               "decoders, metrics and a synthetic benchmark"};
  app.require_subcommand(1);

  std::string config_path;
  app.add_option("--config", config_path, "run configuration (JSON)")
      ->configurable(false);

  auto* enc = app.add_subcommand("encode", "lane file -> target tensors");
  std::string enc_lanes, enc_prefix;
  bool enc_f32 = false;
  enc->add_option("--lanes", enc_lanes, "input lane file")->required();
  enc->add_option("--out-prefix", enc_prefix, "output path prefix")->required();
  enc->add_flag("--f32", enc_f32, "write float32 tensors");

  auto* dec = app.add_subcommand("decode", "logit tensor -> lane file");
  std::string dec_logits, dec_out, dec_kind = "greedy";
  dec->add_option("--logits", dec_logits, "input logits tensor")->required();
  dec->add_option("--out", dec_out, "output lane file")->required();
  dec->add_option("--decoder", dec_kind, "greedy|efficient");

  auto* los = app.add_subcommand("loss", "score logits against a lane file");
  std::string los_logits, los_lanes, los_json;
  los->add_option("--logits", los_logits, "input logits tensor")->required();
  los->add_option("--lanes", los_lanes, "ground-truth lane file")->required();
  los->add_option("--json", los_json, "also write the report as JSON");

  auto* ev = app.add_subcommand("eval", "score predictions against truth");
  std::vector<std::string> ev_pred, ev_gt;
  std::string ev_metric = "culane", ev_json;
  double ev_pt = 20.0, ev_match = 0.85, ev_iou = 0.5, ev_width = 30.0;
  ev->add_option("--pred", ev_pred, "prediction lane files")->required();
  ev->add_option("--gt", ev_gt, "ground-truth lane files")->required();
  ev->add_option("--metric", ev_metric, "tusimple|culane");
  ev->add_option("--pt-thresh", ev_pt, "point gate, px (tusimple)");
  ev->add_option("--match-thresh", ev_match, "lane gate, fraction (tusimple)");
  ev->add_option("--iou-thresh", ev_iou, "IoU gate (culane)");
  ev->add_option("--width", ev_width, "mask width, px (culane)");
  ev->add_option("--json", ev_json, "also write the report as JSON");

  auto* syn = app.add_subcommand("synth", "generate a synthetic scene");
  std::string syn_prefix;
  bool syn_f32 = false;
  syn->add_option("--out-prefix", syn_prefix, "output path prefix")->required();
  syn->add_flag("--f32", syn_f32, "write float32 tensors");

  auto* ben = app.add_subcommand("bench", "time both decoders");
  int ben_scenes = 0;
  std::string ben_json;
  ben->add_option("--scenes", ben_scenes, "number of scenes");
  ben->add_option("--json", ben_json, "write the report as JSON");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;  // usage problems exit 2, --help exits 0
  }

  try {
    if (enc->parsed()) return cmd_encode(enc_lanes, enc_prefix, config_path, enc_f32);
    if (dec->parsed()) return cmd_decode(dec_logits, dec_out, dec_kind, config_path);
    if (los->parsed()) return cmd_loss(los_logits, los_lanes, config_path, los_json);
    if (ev->parsed())
      return cmd_eval(ev_pred, ev_gt, ev_metric, ev_json, ev_pt, ev_match,
                      ev_iou, ev_width);
    if (syn->parsed()) return cmd_synth(config_path, syn_prefix, syn_f32);
    if (ben->parsed()) return cmd_bench(config_path, ben_scenes, ben_json);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

}  // namespace lanekit
