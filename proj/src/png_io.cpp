// Copyright 2026 The sss-canon Authors
// SPDX-License-Identifier: Apache-2.0

#include <png.h>

#include <cmath>
#include <csetjmp>
#include <cstdio>
#include <cstdlib>
#include <iomanip>
#include <memory>
#include <sstream>

#include "io_json.hpp"
#include "sss/io.hpp"

namespace sss::io {

using detail::json;

namespace {

struct FileCloser {
  void operator()(std::FILE* f) const { std::fclose(f); }
};
using File = std::unique_ptr<std::FILE, FileCloser>;

[[noreturn]] void png_fail(png_structp png, png_const_charp msg) {
  auto* what = static_cast<std::string*>(png_get_error_ptr(png));
  if (what) *what = msg;
  std::longjmp(png_jmpbuf(png), 1);
}

void png_quiet(png_structp, png_const_charp) {}

void write_png16(const std::vector<std::uint16_t>& levels, std::size_t rows, std::size_t cols,
                 const fs::path& path) {
  File file(std::fopen(path.string().c_str(), "wb"));
  if (!file) throw FormatError("cannot write " + path.string());
  std::string error;
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, &error, png_fail, png_quiet);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!png || !info) {
    png_destroy_write_struct(&png, nullptr);
    throw FormatError("libpng initialization failed");
  }
  // Big-endian sample rows, built before setjmp so nothing needs unwinding.
  std::vector<png_byte> buffer(rows * cols * 2);
  for (std::size_t i = 0; i < levels.size(); ++i) {
    buffer[2 * i] = static_cast<png_byte>(levels[i] >> 8);
    buffer[2 * i + 1] = static_cast<png_byte>(levels[i] & 0xff);
  }
  std::vector<png_bytep> row_ptrs(rows);
  for (std::size_t r = 0; r < rows; ++r) row_ptrs[r] = buffer.data() + r * cols * 2;
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw FormatError(path.string() + ": " + error);
  }
  png_init_io(png, file.get());
  png_set_IHDR(png, info, static_cast<png_uint_32>(cols), static_cast<png_uint_32>(rows), 16,
               PNG_COLOR_TYPE_GRAY, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  png_write_image(png, row_ptrs.data());
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
}

std::vector<std::uint16_t> read_png16(const fs::path& path, std::size_t& rows, std::size_t& cols) {
  File file(std::fopen(path.string().c_str(), "rb"));
  if (!file) throw FormatError("cannot open " + path.string());
  std::string error;
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, &error, png_fail, png_quiet);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!png || !info) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    throw FormatError("libpng initialization failed");
  }
  std::vector<png_byte> buffer;
  std::vector<png_bytep> row_ptrs;
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw FormatError(path.string() + ": " + (error.empty() ? "not a 16-bit grayscale PNG" : error));
  }
  png_init_io(png, file.get());
  png_read_info(png, info);
  if (png_get_bit_depth(png, info) != 16 || png_get_color_type(png, info) != PNG_COLOR_TYPE_GRAY) {
    error = "expected a 16-bit grayscale PNG";
    std::longjmp(png_jmpbuf(png), 1);
  }
  rows = png_get_image_height(png, info);
  cols = png_get_image_width(png, info);
  buffer.resize(rows * cols * 2);
  row_ptrs.resize(rows);
  for (std::size_t r = 0; r < rows; ++r) row_ptrs[r] = buffer.data() + r * cols * 2;
  png_read_image(png, row_ptrs.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);

  std::vector<std::uint16_t> levels(rows * cols);
  for (std::size_t i = 0; i < levels.size(); ++i) {
    levels[i] = static_cast<std::uint16_t>((buffer[2 * i] << 8) | buffer[2 * i + 1]);
  }
  return levels;
}

fs::path sidecar(const fs::path& png_path) {
  fs::path p = png_path;
  p.replace_extension(".json");
  return p;
}

json window_to_json(const Window& w) {
  return {{"row", w.row}, {"col", w.col}, {"height", w.height}, {"width", w.width}};
}

Window window_from_json(const json& j) {
  return {j.at("row").get<long>(), j.at("col").get<long>(), j.at("height").get<long>(),
          j.at("width").get<long>()};
}

std::string pair_stem(std::size_t group_id) {
  std::ostringstream s;
  s << "pair_" << std::setw(4) << std::setfill('0') << group_id;
  return s.str();
}

}  // namespace

void export_patch(const PatchFile& patch, const fs::path& png_path) {
  if (patch.values.empty()) throw ShapeError("cannot export an empty patch");
  std::vector<std::uint16_t> levels(patch.values.size());
  const auto flat = patch.values.flat();
  for (std::size_t i = 0; i < flat.size(); ++i) {
    if (!(flat[i] >= 0.0 && flat[i] <= 1.0)) {
      throw DomainError("patch values must lie in [0, 1] for PNG export");
    }
    levels[i] = static_cast<std::uint16_t>(std::lround(flat[i] * kPngLevels));
  }
  if (png_path.has_parent_path()) fs::create_directories(png_path.parent_path());
  write_png16(levels, patch.values.rows(), patch.values.cols(), png_path);

  json kps = json::array();
  for (const auto& kp : patch.keypoints) kps.push_back({kp.ping, kp.bin});
  detail::save_json({{"format", "sss-patch"},
                     {"version", kFormatVersion},
                     {"image", png_path.filename().string()},
                     {"rows", patch.values.rows()},
                     {"cols", patch.values.cols()},
                     {"scale", 1.0 / kPngLevels},
                     {"offset", 0.0},
                     {"keypoints", kps},
                     {"keypoint_order", "row,col"},
                     {"provenance", patch.provenance},
                     {"line_id", patch.line_id},
                     {"side", std::string(to_string(patch.side))},
                     {"group_id", patch.group_id},
                     {"window", window_to_json(patch.window)},
                     {"clipped", patch.clipped}},
                    sidecar(png_path));
}

PatchFile import_patch(const fs::path& png_path) {
  const fs::path meta_path = sidecar(png_path);
  const json meta = detail::load_json(meta_path);
  detail::expect_format(meta, "sss-patch", meta_path);
  std::size_t rows = 0, cols = 0;
  const auto levels = read_png16(png_path, rows, cols);
  PatchFile p;
  try {
    if (meta.at("rows").get<std::size_t>() != rows || meta.at("cols").get<std::size_t>() != cols) {
      throw FormatError(meta_path.string() + ": size disagrees with the PNG");
    }
    p.scale = meta.at("scale").get<double>();
    p.offset = meta.at("offset").get<double>();
    for (const auto& kp : meta.at("keypoints")) p.keypoints.push_back({kp.at(0).get<long>(), kp.at(1).get<long>()});
    p.provenance = meta.at("provenance").get<std::string>();
    p.line_id = meta.value("line_id", "");
    p.side = side_from_string(meta.value("side", "starboard"));
    p.group_id = meta.value("group_id", std::size_t{0});
    if (meta.contains("window")) p.window = window_from_json(meta["window"]);
    p.clipped = meta.value("clipped", false);
  } catch (const json::exception& e) {
    throw FormatError(meta_path.string() + ": " + e.what());
  }
  p.values = Matrix<double>(rows, cols);
  auto out = p.values.flat();
  for (std::size_t i = 0; i < levels.size(); ++i) out[i] = p.offset + p.scale * levels[i];
  return p;
}

void write_patch_set(const fs::path& dir, const std::vector<PatchPair>& pairs, const PatchSetInfo& info) {
  fs::create_directories(dir);
  json entries = json::array();
  for (const auto& pair : pairs) {
    const std::string stem = pair_stem(pair.group_id);
    PatchFile a{pair.patch_a, pair.keypoints_a, pair.provenance, info.line_a, info.side, pair.group_id,
                pair.window_a, pair.clipped_a};
    PatchFile b{pair.patch_b, pair.keypoints_b, pair.provenance, info.line_b, info.side, pair.group_id,
                pair.window_b, pair.clipped_b};
    export_patch(a, dir / (stem + "_a.png"));
    export_patch(b, dir / (stem + "_b.png"));
    entries.push_back({{"pair_id", stem}, {"group_id", pair.group_id}, {"a", stem + "_a.png"},
                       {"b", stem + "_b.png"}, {"keypoints", pair.keypoints_a.size()}});
  }
  detail::save_json({{"format", "sss-patch-set"},
                     {"version", kFormatVersion},
                     {"provenance", info.provenance},
                     {"line_a", info.line_a},
                     {"line_b", info.line_b},
                     {"side", std::string(to_string(info.side))},
                     {"pairs", entries}},
                    dir / "pairs.json");
}

std::pair<std::vector<PatchPair>, PatchSetInfo> read_patch_set(const fs::path& dir) {
  const fs::path index = dir / "pairs.json";
  const json doc = detail::load_json(index);
  detail::expect_format(doc, "sss-patch-set", index);
  PatchSetInfo info;
  std::vector<PatchPair> pairs;
  try {
    info.provenance = doc.at("provenance").get<std::string>();
    info.line_a = doc.at("line_a").get<std::string>();
    info.line_b = doc.at("line_b").get<std::string>();
    info.side = side_from_string(doc.at("side").get<std::string>());
    for (const auto& e : doc.at("pairs")) {
      const PatchFile a = import_patch(dir / e.at("a").get<std::string>());
      const PatchFile b = import_patch(dir / e.at("b").get<std::string>());
      PatchPair pair;
      pair.group_id = e.at("group_id").get<std::size_t>();
      pair.patch_a = a.values;
      pair.patch_b = b.values;
      pair.keypoints_a = a.keypoints;
      pair.keypoints_b = b.keypoints;
      pair.window_a = a.window;
      pair.window_b = b.window;
      pair.clipped_a = a.clipped;
      pair.clipped_b = b.clipped;
      pair.provenance = a.provenance;
      pairs.push_back(std::move(pair));
    }
  } catch (const json::exception& e) {
    throw FormatError(index.string() + ": " + e.what());
  }
  return {std::move(pairs), std::move(info)};
}

}  // namespace sss::io
