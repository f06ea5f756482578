// Copyright 2026 The sss-canon Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "sss/core.hpp"
#include "sss/metrics.hpp"
#include "sss/patches.hpp"
#include "sss/pipeline.hpp"

namespace sss::io {

namespace fs = std::filesystem;

inline constexpr int kFormatVersion = 1;

/// Kind of document stored in a JSON header ("format" key), or "" if the
/// file is JSON without one. Throws FormatError for unreadable files.
std::string sniff_format(const fs::path& path);

/// `path` is the JSON header; intensities go to the same stem with a
/// ".f32" extension as little-endian float32, ping-major. Non-finite values
/// are rejected.
void write_waterfall(const Waterfall& wf, const fs::path& path);
Waterfall read_waterfall(const fs::path& path);

void write_annotations(const std::vector<KeypointCorrespondence>& correspondences, const fs::path& path);
std::vector<KeypointCorrespondence> read_annotations(const fs::path& path);

/// JSON header (image description plus TransformMeta), ".f32" values and a
/// ".mask" byte per pixel.
void write_canonical(const CanonicalImage& image, const TransformMeta& meta, const fs::path& path);
std::pair<CanonicalImage, TransformMeta> read_canonical(const fs::path& path);

inline constexpr double kPngLevels = 65535.0;

/// One patch as exported for descriptor work: the PNG holds round(v * 65535)
/// and the ".json" sidecar carries everything else.
struct PatchFile {
  Matrix<double> values;
  std::vector<PixelCoord> keypoints;
  std::string provenance = "raw";
  std::string line_id;
  Side side = Side::Starboard;
  std::size_t group_id = 0;
  Window window;
  bool clipped = false;
  double scale = 1.0 / kPngLevels;
  double offset = 0.0;
};

/// Values must lie in [0, 1].
void export_patch(const PatchFile& patch, const fs::path& png_path);
/// Values come back de-quantized as offset + scale * level.
PatchFile import_patch(const fs::path& png_path);

/// A directory of patch pairs: pair_<group>_{a,b}.png with sidecars plus a
/// "pairs.json" index.
struct PatchSetInfo {
  std::string provenance;
  std::string line_a;
  std::string line_b;
  Side side = Side::Starboard;
};
void write_patch_set(const fs::path& dir, const std::vector<PatchPair>& pairs, const PatchSetInfo& info);
std::pair<std::vector<PatchPair>, PatchSetInfo> read_patch_set(const fs::path& dir);

void write_report(const EvaluationReport& report, const fs::path& path);
EvaluationReport read_report(const fs::path& path);

/// Descriptor matching result for one pair (or an aggregate when pair_id is
/// empty).
struct MatchRecord {
  std::string pair_id;
  std::string descriptor;
  std::string method;
  std::size_t total_matches = 0;
  std::size_t correct_matches = 0;
  double accuracy = 0.0;
};

/// Reads {"records": [...]} as written by the descriptor harness; checks
/// correct <= total.
std::vector<MatchRecord> read_descriptor_report(const fs::path& path);

/// Sums per (descriptor, method), accuracy recomputed from the totals.
std::vector<MatchRecord> summarize_matches(const std::vector<MatchRecord>& records);

/// Everything needed to replay a command.
struct RunManifest {
  std::string subcommand;
  std::map<std::string, std::string> parameters;
  std::vector<std::string> inputs;
  std::vector<std::string> outputs;
  std::string seed;
  std::string version;
};
/// Written as <dir>/manifest.json.
void write_manifest(const RunManifest& manifest, const fs::path& dir);
RunManifest read_manifest(const fs::path& dir);

}  // namespace sss::io
