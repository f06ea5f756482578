// Copyright 2026 The sss-canon Authors
// SPDX-License-Identifier: Apache-2.0

#include "sss/io.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

#include "io_json.hpp"

namespace sss::io {

namespace detail {

json load_json(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

void save_json(const json& doc, const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw FormatError("cannot write " + path.string());
  out << doc.dump(2) << '\n';
  if (!out) throw FormatError("write failed: " + path.string());
}

void expect_format(const json& doc, std::string_view format, const fs::path& path) {
  const std::string found = doc.value("format", "");
  if (found != format) {
    throw FormatError(path.string() + ": expected a '" + std::string(format) + "' document, found '" +
                      found + "'");
  }
  const int version = doc.value("version", -1);
  if (version != kFormatVersion) {
    throw FormatError(path.string() + ": unsupported version " + std::to_string(version) +
                      " (expected " + std::to_string(kFormatVersion) + ")");
  }
}

}  // namespace detail

using detail::expect_format;
using detail::json;
using detail::load_json;
using detail::save_json;

namespace {

fs::path sibling(const fs::path& header, const char* ext) {
  fs::path p = header;
  p.replace_extension(ext);
  return p;
}

template <typename T>
T get(const json& doc, const char* key, const fs::path& path) {
  if (!doc.contains(key)) throw FormatError(path.string() + ": missing key '" + key + "'");
  try {
    return doc.at(key).get<T>();
  } catch (const json::exception& e) {
    throw FormatError(path.string() + ": bad value for '" + key + "': " + e.what());
  }
}

void write_f32(const Matrix<float>& m, const fs::path& path) {
  for (float v : m.flat()) {
    if (!std::isfinite(v)) throw FormatError("non-finite value rejected while writing " + path.string());
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot write " + path.string());
  std::vector<std::uint32_t> words(m.size());
  std::memcpy(words.data(), m.flat().data(), m.size() * sizeof(float));
  if constexpr (std::endian::native == std::endian::big) {
    for (auto& w : words) w = __builtin_bswap32(w);
  }
  out.write(reinterpret_cast<const char*>(words.data()), static_cast<std::streamsize>(words.size() * 4));
  if (!out) throw FormatError("write failed: " + path.string());
}

std::vector<char> read_bytes(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

Matrix<float> read_f32(const fs::path& path, std::size_t rows, std::size_t cols) {
  const auto bytes = read_bytes(path);
  const std::size_t expected = rows * cols * 4;
  if (bytes.size() != expected) {
    throw FormatError(path.string() + ": size mismatch, expected " + std::to_string(expected) +
                      " bytes, found " + std::to_string(bytes.size()));
  }
  Matrix<float> m(rows, cols);
  std::vector<std::uint32_t> words(rows * cols);
  std::memcpy(words.data(), bytes.data(), expected);
  if constexpr (std::endian::native == std::endian::big) {
    for (auto& w : words) w = __builtin_bswap32(w);
  }
  std::memcpy(m.flat().data(), words.data(), expected);
  for (float v : m.flat()) {
    if (!std::isfinite(v)) throw FormatError(path.string() + ": non-finite value in data");
  }
  return m;
}

json config_to_json(const SensorConfig& c) {
  return {{"slant_resolution_m", c.slant_resolution_m},
          {"num_bins", c.num_bins},
          {"k_phi", c.k_phi},
          {"phi0_deg", c.phi0_deg},
          {"beam_exponent", c.beam_exponent},
          {"theta0_deg", c.theta0_deg},
          {"lambertian_k", c.lambertian_k},
          {"beam_model", std::string(to_string(c.beam_model))}};
}

SensorConfig config_from_json(const json& j, const fs::path& path) {
  SensorConfig c;
  c.slant_resolution_m = get<double>(j, "slant_resolution_m", path);
  c.num_bins = get<std::size_t>(j, "num_bins", path);
  c.k_phi = j.value("k_phi", c.k_phi);
  c.phi0_deg = j.value("phi0_deg", c.phi0_deg);
  c.beam_exponent = j.value("beam_exponent", c.beam_exponent);
  c.theta0_deg = j.value("theta0_deg", c.theta0_deg);
  c.lambertian_k = j.value("lambertian_k", c.lambertian_k);
  c.beam_model = beam_model_from_string(j.value("beam_model", std::string(to_string(c.beam_model))));
  return c;
}

json grid_to_json(const GroundGrid& g) {
  return {{"resolution_m", g.resolution_m}, {"start_m", g.start_m}, {"num_bins", g.num_bins}};
}

GroundGrid grid_from_json(const json& j, const fs::path& path) {
  GroundGrid g;
  g.resolution_m = get<double>(j, "resolution_m", path);
  g.start_m = get<double>(j, "start_m", path);
  g.num_bins = get<std::size_t>(j, "num_bins", path);
  return g;
}

}  // namespace

std::string sniff_format(const fs::path& path) {
  const json doc = load_json(path);
  return doc.is_object() ? doc.value("format", "") : "";
}

void write_waterfall(const Waterfall& wf, const fs::path& path) {
  wf.validate();
  const fs::path data = sibling(path, ".f32");
  json doc = {{"format", "sss-waterfall"},
              {"version", kFormatVersion},
              {"line_id", wf.line_id},
              {"side", std::string(to_string(wf.side))},
              {"num_pings", wf.num_pings()},
              {"num_bins", wf.config.num_bins},
              {"slant_resolution_m", wf.config.slant_resolution_m},
              {"altitudes_m", wf.altitudes_m},
              {"sensor", config_to_json(wf.config)},
              {"encoding", "float32-le-ping-major"},
              {"data_file", data.filename().string()}};
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  write_f32(wf.intensities, data);
  save_json(doc, path);
}

Waterfall read_waterfall(const fs::path& path) {
  const json doc = load_json(path);
  expect_format(doc, "sss-waterfall", path);
  if (doc.value("encoding", "") != "float32-le-ping-major") {
    throw FormatError(path.string() + ": unsupported encoding");
  }
  Waterfall wf;
  wf.line_id = get<std::string>(doc, "line_id", path);
  wf.side = side_from_string(get<std::string>(doc, "side", path));
  wf.altitudes_m = get<std::vector<double>>(doc, "altitudes_m", path);
  wf.config = config_from_json(doc.contains("sensor") ? doc["sensor"] : doc, path);
  const auto pings = get<std::size_t>(doc, "num_pings", path);
  const auto bins = get<std::size_t>(doc, "num_bins", path);
  if (bins != wf.config.num_bins || pings != wf.altitudes_m.size()) {
    throw FormatError(path.string() + ": header counts disagree with altitude list or sensor block");
  }
  if (get<double>(doc, "slant_resolution_m", path) != wf.config.slant_resolution_m) {
    throw FormatError(path.string() + ": slant resolution disagrees with sensor block");
  }
  const fs::path data = path.parent_path() / get<std::string>(doc, "data_file", path);
  wf.intensities = read_f32(data, pings, bins);
  try {
    wf.validate();
  } catch (const std::exception& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
  return wf;
}

void write_annotations(const std::vector<KeypointCorrespondence>& correspondences, const fs::path& path) {
  json list = json::array();
  for (const auto& c : correspondences) {
    if (c.kp_a.ping < 0 || c.kp_a.bin < 0 || c.kp_b.ping < 0 || c.kp_b.bin < 0) {
      throw FormatError("negative keypoint index in annotation");
    }
    list.push_back({{"line_a", c.line_a},
                    {"line_b", c.line_b},
                    {"side", std::string(to_string(c.side))},
                    {"ping_a", c.kp_a.ping},
                    {"bin_a", c.kp_a.bin},
                    {"ping_b", c.kp_b.ping},
                    {"bin_b", c.kp_b.bin}});
  }
  save_json({{"format", "sss-annotations"}, {"version", kFormatVersion}, {"correspondences", list}}, path);
}

std::vector<KeypointCorrespondence> read_annotations(const fs::path& path) {
  const json doc = load_json(path);
  expect_format(doc, "sss-annotations", path);
  std::vector<KeypointCorrespondence> out;
  for (const auto& r : get<json>(doc, "correspondences", path)) {
    KeypointCorrespondence c;
    c.line_a = get<std::string>(r, "line_a", path);
    c.line_b = get<std::string>(r, "line_b", path);
    c.side = side_from_string(get<std::string>(r, "side", path));
    c.kp_a = {get<long>(r, "ping_a", path), get<long>(r, "bin_a", path)};
    c.kp_b = {get<long>(r, "ping_b", path), get<long>(r, "bin_b", path)};
    if (c.kp_a.ping < 0 || c.kp_a.bin < 0 || c.kp_b.ping < 0 || c.kp_b.bin < 0) {
      throw FormatError(path.string() + ": negative keypoint index in record " + std::to_string(out.size()));
    }
    out.push_back(std::move(c));
  }
  return out;
}

void write_canonical(const CanonicalImage& image, const TransformMeta& meta, const fs::path& path) {
  if (image.validity.rows() != image.values.rows() || image.validity.cols() != image.values.cols()) {
    throw ShapeError("validity mask and image differ in shape");
  }
  const fs::path data = sibling(path, ".f32");
  const fs::path mask = sibling(path, ".mask");
  json doc = {{"format", "sss-canonical"},
              {"version", kFormatVersion},
              {"source_line_id", image.source_line_id},
              {"side", std::string(to_string(image.side))},
              {"law", std::string(to_string(image.law))},
              {"num_pings", image.values.rows()},
              {"num_bins", image.values.cols()},
              {"grid", grid_to_json(image.grid)},
              {"encoding", "float32-le-ping-major"},
              {"data_file", data.filename().string()},
              {"mask_file", mask.filename().string()},
              {"transform",
               {{"altitudes_m", meta.altitudes_m},
                {"grid", grid_to_json(meta.grid)},
                {"theta0_deg", meta.theta0_deg},
                {"slant_resolution_m", meta.slant_resolution_m},
                {"num_bins", meta.num_bins},
                {"law", std::string(to_string(meta.law))}}}};
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  write_f32(image.values, data);
  std::ofstream out(mask, std::ios::binary);
  out.write(reinterpret_cast<const char*>(image.validity.flat().data()),
            static_cast<std::streamsize>(image.validity.size()));
  if (!out) throw FormatError("write failed: " + mask.string());
  save_json(doc, path);
}

std::pair<CanonicalImage, TransformMeta> read_canonical(const fs::path& path) {
  const json doc = load_json(path);
  expect_format(doc, "sss-canonical", path);
  CanonicalImage image;
  image.source_line_id = get<std::string>(doc, "source_line_id", path);
  image.side = side_from_string(get<std::string>(doc, "side", path));
  image.law = law_from_string(get<std::string>(doc, "law", path));
  image.grid = grid_from_json(get<json>(doc, "grid", path), path);
  const auto rows = get<std::size_t>(doc, "num_pings", path);
  const auto cols = get<std::size_t>(doc, "num_bins", path);
  if (cols != image.grid.num_bins) throw FormatError(path.string() + ": grid size disagrees with num_bins");
  image.values = read_f32(path.parent_path() / get<std::string>(doc, "data_file", path), rows, cols);
  const auto mask = read_bytes(path.parent_path() / get<std::string>(doc, "mask_file", path));
  if (mask.size() != rows * cols) throw FormatError(path.string() + ": mask size mismatch");
  image.validity = Matrix<std::uint8_t>(rows, cols);
  std::memcpy(image.validity.flat().data(), mask.data(), mask.size());

  const json t = get<json>(doc, "transform", path);
  TransformMeta meta;
  meta.altitudes_m = get<std::vector<double>>(t, "altitudes_m", path);
  meta.grid = grid_from_json(get<json>(t, "grid", path), path);
  meta.theta0_deg = get<double>(t, "theta0_deg", path);
  meta.slant_resolution_m = get<double>(t, "slant_resolution_m", path);
  meta.num_bins = get<std::size_t>(t, "num_bins", path);
  meta.law = law_from_string(get<std::string>(t, "law", path));
  if (meta.altitudes_m.size() != rows) throw FormatError(path.string() + ": altitude count mismatch");
  return {std::move(image), std::move(meta)};
}

void write_report(const EvaluationReport& report, const fs::path& path) {
  json rows = json::array();
  for (const auto& r : report.rows) {
    json row = {{"metric", std::string(to_string(r.metric))},
                {"method", r.method},
                {"pairs", r.pairs},
                {"average_score", r.average_score}};
    row["proportion_improved"] = r.proportion_improved ? json(*r.proportion_improved) : json(nullptr);
    row["average_improvement"] = r.average_improvement ? json(*r.average_improvement) : json(nullptr);
    rows.push_back(row);
  }
  json metrics = json::array();
  for (Metric m : report.metrics) metrics.push_back(std::string(to_string(m)));
  json scores = json::object();
  for (std::size_t mi = 0; mi < report.metrics.size() && mi < report.scores.size(); ++mi) {
    json per_method = json::object();
    for (std::size_t k = 0; k < report.methods.size(); ++k) per_method[report.methods[k]] = report.scores[mi][k];
    scores[std::string(to_string(report.metrics[mi]))] = per_method;
  }
  save_json({{"format", "sss-evaluation"},
             {"version", kFormatVersion},
             {"histogram_bins", report.histogram_bins},
             {"kl_reference", "patch_a"},
             {"methods", report.methods},
             {"metrics", metrics},
             {"group_ids", report.group_ids},
             {"rows", rows},
             {"scores", scores}},
            path);
}

EvaluationReport read_report(const fs::path& path) {
  const json doc = load_json(path);
  expect_format(doc, "sss-evaluation", path);
  EvaluationReport report;
  report.histogram_bins = get<std::size_t>(doc, "histogram_bins", path);
  report.methods = get<std::vector<std::string>>(doc, "methods", path);
  for (const auto& m : get<std::vector<std::string>>(doc, "metrics", path)) {
    report.metrics.push_back(metric_from_string(m));
  }
  report.group_ids = doc.value("group_ids", std::vector<std::size_t>{});
  for (const auto& r : get<json>(doc, "rows", path)) {
    ReportRow row;
    row.metric = metric_from_string(get<std::string>(r, "metric", path));
    row.method = get<std::string>(r, "method", path);
    row.pairs = get<std::size_t>(r, "pairs", path);
    row.average_score = get<double>(r, "average_score", path);
    if (r.contains("proportion_improved") && !r["proportion_improved"].is_null()) {
      row.proportion_improved = r["proportion_improved"].get<double>();
    }
    if (r.contains("average_improvement") && !r["average_improvement"].is_null()) {
      row.average_improvement = r["average_improvement"].get<double>();
    }
    report.rows.push_back(std::move(row));
  }
  if (doc.contains("scores")) {
    const json& s = doc["scores"];
    for (Metric m : report.metrics) {
      std::vector<std::vector<double>> per_method;
      const std::string key(to_string(m));
      for (const auto& method : report.methods) {
        per_method.push_back(s.contains(key) && s[key].contains(method)
                                 ? s[key][method].get<std::vector<double>>()
                                 : std::vector<double>{});
      }
      report.scores.push_back(std::move(per_method));
    }
  }
  return report;
}

std::vector<MatchRecord> read_descriptor_report(const fs::path& path) {
  const json doc = load_json(path);
  if (!doc.is_object() || !doc.contains("records")) {
    throw FormatError(path.string() + ": descriptor report needs a 'records' list");
  }
  std::vector<MatchRecord> out;
  for (const auto& r : doc["records"]) {
    MatchRecord m;
    m.pair_id = r.contains("pair_id") && !r["pair_id"].is_null()
                    ? (r["pair_id"].is_string() ? r["pair_id"].get<std::string>() : r["pair_id"].dump())
                    : "";
    m.descriptor = get<std::string>(r, "descriptor", path);
    m.method = get<std::string>(r, "method", path);
    m.total_matches = get<std::size_t>(r, "total_matches", path);
    m.correct_matches = get<std::size_t>(r, "correct_matches", path);
    m.accuracy = r.value("accuracy", 0.0);
    if (m.correct_matches > m.total_matches) {
      throw FormatError(path.string() + ": correct_matches exceeds total_matches");
    }
    out.push_back(std::move(m));
  }
  return out;
}

std::vector<MatchRecord> summarize_matches(const std::vector<MatchRecord>& records) {
  std::vector<MatchRecord> out;
  for (const auto& r : records) {
    auto it = std::find_if(out.begin(), out.end(), [&](const MatchRecord& s) {
      return s.descriptor == r.descriptor && s.method == r.method;
    });
    if (it == out.end()) {
      out.push_back({"", r.descriptor, r.method, 0, 0, 0.0});
      it = out.end() - 1;
    }
    it->total_matches += r.total_matches;
    it->correct_matches += r.correct_matches;
  }
  for (auto& s : out) {
    s.accuracy = s.total_matches ? static_cast<double>(s.correct_matches) / static_cast<double>(s.total_matches)
                                 : 0.0;
  }
  return out;
}

void write_manifest(const RunManifest& m, const fs::path& dir) {
  save_json({{"format", "sss-manifest"},
             {"version", kFormatVersion},
             {"subcommand", m.subcommand},
             {"parameters", m.parameters},
             {"inputs", m.inputs},
             {"outputs", m.outputs},
             {"seed", m.seed},
             {"tool_version", m.version}},
            dir / "manifest.json");
}

RunManifest read_manifest(const fs::path& dir) {
  const fs::path path = dir / "manifest.json";
  const json doc = load_json(path);
  expect_format(doc, "sss-manifest", path);
  RunManifest m;
  m.subcommand = get<std::string>(doc, "subcommand", path);
  m.parameters = get<std::map<std::string, std::string>>(doc, "parameters", path);
  m.inputs = get<std::vector<std::string>>(doc, "inputs", path);
  m.outputs = get<std::vector<std::string>>(doc, "outputs", path);
  m.seed = doc.value("seed", "");
  m.version = doc.value("tool_version", "");
  return m;
}

}  // namespace sss::io
