#include "lanekit/run_config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "lanekit/error.hpp"

namespace lanekit {

using nlohmann::json;

void RunConfig::validate() const {
  if (!image.valid()) throw std::invalid_argument("image size must be positive");
  encoder.validate();
  loss.validate();
  decoder.validate();
  scene.validate();
  noise.validate();
  if (bench_scenes < 1)
    throw std::invalid_argument("bench_scenes must be >= 1");
}

const char* family_name(CurveFamily family) {
  switch (family) {
    case CurveFamily::straight: return "straight";
    case CurveFamily::quadratic: return "quadratic";
    case CurveFamily::cubic: return "cubic";
  }
  return "quadratic";
}

CurveFamily family_from_name(const std::string& name) {
  if (name == "straight") return CurveFamily::straight;
  if (name == "quadratic") return CurveFamily::quadratic;
  if (name == "cubic") return CurveFamily::cubic;
  throw ParseError("unknown curve family: " + name +
                   " (expected straight|quadratic|cubic)");
}

RunConfig run_config_from_json(const std::string& text) {
  json j;
  try {
    j = text.empty() ? json::object() : json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ParseError("config must be a JSON object");

  static const std::set<std::string> known = {
      "width", "height", "dy", "sigma_h", "sigma_g",
      "beta", "gamma", "lambda",
      "theta_h", "nms_window", "max_assoc_dist", "min_points", "refine",
      "n_lanes", "family", "min_separation", "x_margin",
      "top_min", "top_max", "bottom_min", "bottom_max",
      "seed", "max_attempts",
      "score_noise_sd", "offset_noise_sd",
      "offset_noise_up", "offset_noise_mid", "offset_noise_down",
      "dropout_prob", "noise_seed", "bench_scenes"};
  for (const auto& item : j.items())
    if (!known.count(item.key()))
      throw ParseError("unknown config key: " + item.key());

  RunConfig cfg;
  try {
    const auto get = [&](const char* key, auto& field) {
      if (j.contains(key)) j.at(key).get_to(field);
    };
    get("width", cfg.image.width);
    get("height", cfg.image.height);
    int dy = cfg.encoder.dy;
    get("dy", dy);
    cfg.encoder.dy = cfg.loss.dy = cfg.decoder.dy = dy;
    get("sigma_h", cfg.encoder.sigma_h);
    get("sigma_g", cfg.encoder.sigma_g);
    get("beta", cfg.loss.beta);
    get("gamma", cfg.loss.gamma);
    get("lambda", cfg.loss.lambda);
    get("theta_h", cfg.decoder.theta_h);
    get("nms_window", cfg.decoder.nms_window);
    cfg.decoder.max_assoc_dist = 2.0 * dy;
    get("max_assoc_dist", cfg.decoder.max_assoc_dist);
    get("min_points", cfg.decoder.min_points);
    get("refine", cfg.decoder.refine);
    get("n_lanes", cfg.scene.n_lanes);
    if (j.contains("family"))
      cfg.scene.family = family_from_name(j.at("family").get<std::string>());
    cfg.scene.min_separation = 2.0 * cfg.encoder.sigma_g;
    get("min_separation", cfg.scene.min_separation);
    get("x_margin", cfg.scene.x_margin);
    get("top_min", cfg.scene.top_min);
    get("top_max", cfg.scene.top_max);
    get("bottom_min", cfg.scene.bottom_min);
    get("bottom_max", cfg.scene.bottom_max);
    get("seed", cfg.scene.seed);
    get("max_attempts", cfg.scene.max_attempts);
    get("score_noise_sd", cfg.noise.score_noise_sd);
    get("offset_noise_sd", cfg.noise.offset_noise_sd);
    get("offset_noise_up", cfg.noise.offset_up);
    get("offset_noise_mid", cfg.noise.offset_mid);
    get("offset_noise_down", cfg.noise.offset_down);
    get("dropout_prob", cfg.noise.dropout_prob);
    cfg.noise.seed = cfg.scene.seed + 1;
    get("noise_seed", cfg.noise.seed);
    get("bench_scenes", cfg.bench_scenes);
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed config value: ") + e.what());
  }
  cfg.scene.image = cfg.image;
  cfg.validate();
  return cfg;
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return run_config_from_json(buf.str());
}

}  // namespace lanekit
