#include "lanekit/lane_io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "lanekit/error.hpp"

namespace lanekit {

using nlohmann::json;

std::string lane_file_to_json(const LaneFile& file) {
  json j;
  j["image_size"] = {file.image.width, file.image.height};
  j["lanes"] = json::array();
  for (const LaneFile::Entry& e : file.lanes) {
    json lane;
    lane["id"] = e.curve.id;
    json pts = json::array();
    for (const ImagePoint& p : e.curve.points) pts.push_back({p.x, p.y});
    lane["points"] = std::move(pts);
    if (e.score) lane["score"] = *e.score;
    j["lanes"].push_back(std::move(lane));
  }
  return j.dump(2) + "\n";
}

LaneFile lane_file_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("lane file is not valid JSON: ") + e.what());
  }
  LaneFile file;
  try {
    const auto& size = j.at("image_size");
    file.image.width = size.at(0).get<int>();
    file.image.height = size.at(1).get<int>();
    for (const auto& lane : j.at("lanes")) {
      LaneFile::Entry entry;
      entry.curve.id = lane.at("id").get<int>();
      for (const auto& pt : lane.at("points"))
        entry.curve.points.push_back(
            {pt.at(0).get<double>(), pt.at(1).get<double>()});
      if (lane.contains("score"))
        entry.score = lane.at("score").get<double>();
      validate_curve(entry.curve);
      file.lanes.push_back(std::move(entry));
    }
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed lane file: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ParseError(std::string("malformed lane file: ") + e.what());
  }
  return file;
}

void write_lane_file(const std::string& path, const LaneFile& file) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << lane_file_to_json(file);
  if (!out) throw std::runtime_error("failed writing: " + path);
}

LaneFile read_lane_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return lane_file_from_json(buf.str());
}

std::vector<LaneCurve> lane_file_curves(const LaneFile& file) {
  std::vector<LaneCurve> curves;
  curves.reserve(file.lanes.size());
  for (const LaneFile::Entry& e : file.lanes) curves.push_back(e.curve);
  return curves;
}

ParsedLanes parse_culane_annotation(const std::vector<std::string>& lines) {
  ParsedLanes out;
  for (size_t n = 0; n < lines.size(); ++n) {
    std::istringstream ss(lines[n]);
    std::vector<double> tokens;
    double v = 0.0;
    while (ss >> v) tokens.push_back(v);
    if (!ss.eof())
      throw ParseError("line " + std::to_string(n + 1) +
                       ": non-numeric token");
    if (tokens.empty()) continue;
    if (tokens.size() % 2 != 0)
      throw ParseError("line " + std::to_string(n + 1) +
                       ": odd coordinate count");
    LaneCurve curve;
    curve.id = static_cast<int>(out.curves.size());
    for (size_t i = 0; i + 1 < tokens.size(); i += 2)
      curve.points.push_back({tokens[i], tokens[i + 1]});
    std::stable_sort(curve.points.begin(), curve.points.end(),
                     [](const ImagePoint& a, const ImagePoint& b) {
                       return a.y < b.y;
                     });
    // Duplicate rows keep the first occurrence after the sort.
    curve.points.erase(
        std::unique(curve.points.begin(), curve.points.end(),
                    [](const ImagePoint& a, const ImagePoint& b) {
                      return a.y == b.y;
                    }),
        curve.points.end());
    if (curve.points.size() < 2) {
      out.warnings.push_back("line " + std::to_string(n + 1) +
                             ": fewer than 2 points, skipped");
      continue;
    }
    out.curves.push_back(std::move(curve));
  }
  return out;
}

ParsedLanes parse_tusimple_record(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("record is not valid JSON: ") + e.what());
  }
  ParsedLanes out;
  try {
    const auto& h_samples = j.at("h_samples");
    const auto& lanes = j.at("lanes");
    for (size_t li = 0; li < lanes.size(); ++li) {
      const auto& xs = lanes[li];
      if (xs.size() != h_samples.size())
        throw ParseError("lane " + std::to_string(li) +
                         " length does not match h_samples");
      LaneCurve curve;
      curve.id = static_cast<int>(out.curves.size());
      for (size_t i = 0; i < xs.size(); ++i) {
        const double x = xs[i].get<double>();
        if (x == -2.0) continue;  // absent-row sentinel, resolved here
        curve.points.push_back({x, h_samples[i].get<double>()});
      }
      if (curve.points.size() < 2) continue;
      out.curves.push_back(std::move(curve));
    }
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed record: ") + e.what());
  }
  return out;
}

}  // namespace lanekit
