#pragma once

#include <string>

#include "lanekit/decoder.hpp"
#include "lanekit/encoder.hpp"
#include "lanekit/losses.hpp"
#include "lanekit/synth.hpp"

namespace lanekit {

// One flat declarative document for every tunable. All keys are optional;
// unknown keys are a load-time ParseError so typo'd hyperparameters cannot
// pass silently. "dy" sets the shared row interval of encoder, losses and
// decoder alike.
struct RunConfig {
  ImageSpec image{976, 590};
  EncoderConfig encoder;
  LossConfig loss;
  DecoderConfig decoder;
  SceneSpec scene;
  NoiseSpec noise;
  int bench_scenes = 20;

  void validate() const;
};

RunConfig run_config_from_json(const std::string& text);
RunConfig load_run_config(const std::string& path);

const char* family_name(CurveFamily family);
CurveFamily family_from_name(const std::string& name);

}  // namespace lanekit
