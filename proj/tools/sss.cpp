// Copyright 2026 The sss-canon Authors
// SPDX-License-Identifier: Apache-2.0
//
// sss: command-line front end for simulation, canonical transforms, patch
// extraction and similarity evaluation.

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "sss/io.hpp"
#include "sss/log.hpp"
#include "sss/metrics.hpp"
#include "sss/patches.hpp"
#include "sss/pipeline.hpp"
#include "sss/simulator.hpp"

namespace fs = std::filesystem;
using namespace sss;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

/// Bad flag values discovered after parsing.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

io::RunManifest manifest_for(const CLI::App& cmd) {
  io::RunManifest m;
  m.subcommand = cmd.get_name();
  m.version = SSS_VERSION;
  for (const CLI::Option* opt : cmd.get_options()) {
    if (opt->get_name() == "--help" || opt->get_name().empty()) continue;
    std::string value;
    if (opt->count() > 0) {
      for (const auto& r : opt->results()) value += (value.empty() ? "" : ",") + r;
    } else {
      value = opt->get_default_str();
    }
    m.parameters[opt->get_name()] = value;
  }
  return m;
}

// ---- simulate ---------------------------------------------------------------

struct SimulateArgs {
  std::uint64_t seed = 1;
  std::vector<std::string> lines{"15:0", "25:20"};
  double map_size_m = 200.0;
  double noise = 0.05;
  std::string law = "cos2";
  std::size_t features = 20;
  double ping_spacing_m = 0.2;
  double slant_resolution_m = 0.1;
  std::size_t bins = 600;
  double theta0_deg = 30.0;
  double beam_exponent = 4.0;
  double k_phi = 2.78;
  std::string beam_model = "as-printed";
  NoiseTexture texture;
  std::string out_dir;
};

SurveyLineSpec parse_line(const std::string& text, std::size_t pings, double noise, LambertianLaw law) {
  SurveyLineSpec line;
  line.ping_count = pings;
  line.noise_sigma = noise;
  line.law = law;
  std::istringstream in(text);
  std::string alt, offset;
  std::getline(in, alt, ':');
  std::getline(in, offset);
  try {
    std::size_t used = 0;
    line.altitude_m = std::stod(alt, &used);
    if (used != alt.size()) throw std::invalid_argument(alt);
    if (!offset.empty()) {
      line.lateral_offset_m = std::stod(offset, &used);
      if (used != offset.size()) throw std::invalid_argument(offset);
    }
  } catch (const std::logic_error&) {
    throw UsageError("--lines: cannot parse '" + text + "' (expected altitude[:lateral_offset])");
  }
  if (!(line.altitude_m > 0.0)) throw UsageError("--lines: altitude must be positive in '" + text + "'");
  return line;
}

int cmd_simulate(const SimulateArgs& a, const CLI::App& cmd) {
  SurveyPlan plan;
  plan.config.slant_resolution_m = a.slant_resolution_m;
  plan.config.num_bins = a.bins;
  plan.config.theta0_deg = a.theta0_deg;
  plan.config.beam_exponent = a.beam_exponent;
  plan.config.k_phi = a.k_phi;
  plan.config.beam_model = beam_model_from_string(a.beam_model);
  plan.track.ping_spacing_m = a.ping_spacing_m;
  plan.features_per_side = a.features;
  plan.texture = a.texture;
  if (!(a.map_size_m > 0.0) || !(a.ping_spacing_m > 0.0)) {
    throw UsageError("--map-size and --ping-spacing must be positive");
  }
  const auto pings = static_cast<std::size_t>(a.map_size_m / a.ping_spacing_m);
  const LambertianLaw law = law_from_string(a.law);
  for (const auto& text : a.lines) plan.lines.push_back(parse_line(text, pings, a.noise, law));

  const SimulatedSurvey sim = run_survey_plan(plan, a.seed);
  const fs::path out(a.out_dir);
  io::RunManifest manifest = manifest_for(cmd);
  manifest.seed = std::to_string(a.seed);
  for (const auto& sides : sim.survey.waterfalls) {
    for (const auto& wf : sides) {
      const std::string name = wf.line_id + "_" + std::string(to_string(wf.side)) + ".json";
      io::write_waterfall(wf, out / name);
      manifest.outputs.push_back(name);
    }
  }
  io::write_annotations(sim.survey.correspondences, out / "annotations.json");
  manifest.outputs.push_back("annotations.json");
  io::write_manifest(manifest, out);
  std::cout << "wrote " << sim.survey.waterfalls.size() << " line(s), "
            << sim.survey.correspondences.size() << " correspondence(s) to " << out.string() << '\n';
  return kExitOk;
}

// ---- canonify ---------------------------------------------------------------

struct CanonifyArgs {
  std::string in;
  std::string law = "cos2";
  double delta_g_m = 0.0;
  std::optional<double> theta0_deg;
  std::optional<double> beam_exponent;
  std::optional<double> k_phi;
  std::string out;
};

int cmd_canonify(const CanonifyArgs& a, const CLI::App& cmd) {
  Waterfall wf = io::read_waterfall(a.in);
  if (a.theta0_deg) wf.config.theta0_deg = *a.theta0_deg;
  if (a.beam_exponent) wf.config.beam_exponent = *a.beam_exponent;
  if (a.k_phi) wf.config.k_phi = *a.k_phi;
  const auto [image, meta] = canonify(wf, law_from_string(a.law), a.delta_g_m);
  const fs::path out(a.out);
  io::write_canonical(image, meta, out / "canonical.json");
  io::RunManifest manifest = manifest_for(cmd);
  manifest.inputs.push_back(a.in);
  manifest.outputs = {"canonical.json", "canonical.f32", "canonical.mask"};
  io::write_manifest(manifest, out);
  std::cout << "canonical image " << image.values.rows() << " x " << image.values.cols() << " (delta_g "
            << image.grid.resolution_m << " m, law " << to_string(image.law) << ") in " << out.string()
            << '\n';
  return kExitOk;
}

// ---- extract-patches --------------------------------------------------------

struct ExtractArgs {
  std::vector<std::string> images;
  std::string annotations;
  std::size_t pings_per_group = 50;
  long margin = kDefaultMargin;
  std::string out_dir;
};

struct LoadedImage {
  Matrix<double> values;
  std::optional<TransformMeta> meta;
  std::optional<LambertianLaw> law;
  std::string line_id;
  Side side = Side::Starboard;
};

LoadedImage load_image(const fs::path& path) {
  LoadedImage img;
  const std::string format = io::sniff_format(path);
  if (format == "sss-waterfall") {
    const Waterfall wf = io::read_waterfall(path);
    img.values = normalized_raw(wf);
    img.line_id = wf.line_id;
    img.side = wf.side;
  } else if (format == "sss-canonical") {
    auto [image, meta] = io::read_canonical(path);
    img.values = to_double(image.values);
    img.line_id = image.source_line_id;
    img.side = image.side;
    img.law = image.law;
    img.meta = std::move(meta);
  } else {
    throw FormatError(path.string() + ": neither a waterfall nor a canonical image header");
  }
  return img;
}

int cmd_extract(const ExtractArgs& a, const CLI::App& cmd) {
  if (a.images.size() != 2) throw UsageError("--images needs exactly two paths (a,b)");
  const LoadedImage img_a = load_image(a.images[0]);
  const LoadedImage img_b = load_image(a.images[1]);
  if (img_a.law != img_b.law) throw UsageError("--images: both images must share provenance (raw or one law)");
  if (img_a.side != img_b.side) throw UsageError("--images: images come from different sides");
  if (img_a.meta && img_a.meta->grid.resolution_m != img_b.meta->grid.resolution_m) {
    throw ShapeError("canonical images differ in ground resolution; canonify both with the same --delta-g");
  }
  const auto all = io::read_annotations(a.annotations);
  const auto selected = select_correspondences(all, img_a.line_id, img_b.line_id, img_a.side);
  const std::string provenance = provenance_label(img_a.law);
  const auto pairs = build_patch_pairs(img_a.values, img_b.values, selected,
                                       img_a.meta ? &*img_a.meta : nullptr, img_b.meta ? &*img_b.meta : nullptr,
                                       a.pings_per_group, a.margin, provenance);
  const fs::path out(a.out_dir);
  io::write_patch_set(out, pairs, {provenance, img_a.line_id, img_b.line_id, img_a.side});
  io::RunManifest manifest = manifest_for(cmd);
  manifest.inputs = {a.images[0], a.images[1], a.annotations};
  manifest.outputs = {"pairs.json"};
  io::write_manifest(manifest, out);
  std::cout << pairs.size() << " patch pair(s) (" << provenance << ") from " << selected.size()
            << " correspondence(s) in " << out.string() << '\n';
  return kExitOk;
}

// ---- evaluate ---------------------------------------------------------------

struct EvaluateArgs {
  std::string raw_dir;
  std::vector<std::string> canonical_dirs;
  std::vector<std::string> metrics{"corr", "kl", "chi2"};
  std::size_t bins = kDefaultHistogramBins;
  std::string out;
};

std::vector<PatchPair> keep_groups(const std::vector<PatchPair>& pairs, const std::vector<std::size_t>& ids) {
  std::vector<PatchPair> out;
  for (const auto& p : pairs) {
    if (std::find(ids.begin(), ids.end(), p.group_id) != ids.end()) out.push_back(p);
  }
  return out;
}

int cmd_evaluate(const EvaluateArgs& a, const CLI::App& cmd) {
  std::vector<Metric> metrics;
  for (const auto& m : a.metrics) {
    try {
      metrics.push_back(metric_from_string(m));
    } catch (const FormatError& e) {
      throw UsageError(std::string("--metrics: ") + e.what());
    }
  }
  auto [raw, raw_info] = io::read_patch_set(a.raw_dir);
  if (raw_info.provenance != "raw") throw UsageError("--raw-dir holds '" + raw_info.provenance + "' patches");
  std::vector<MethodPairs> methods;
  for (const auto& dir : a.canonical_dirs) {
    auto [pairs, info] = io::read_patch_set(dir);
    const std::string prefix = "canonical:";
    if (info.provenance.rfind(prefix, 0) != 0) {
      throw UsageError("--canonical-dirs: " + dir + " holds '" + info.provenance + "' patches");
    }
    if (info.line_a != raw_info.line_a || info.line_b != raw_info.line_b || info.side != raw_info.side) {
      throw ShapeError(dir + " was cut from different lines or side than the raw patches");
    }
    methods.push_back({info.provenance.substr(prefix.size()), std::move(pairs)});
  }

  // Restrict every method to the groups present everywhere.
  std::vector<std::size_t> common;
  for (const auto& p : raw) common.push_back(p.group_id);
  for (const auto& m : methods) {
    std::vector<std::size_t> ids;
    for (const auto& p : m.pairs) ids.push_back(p.group_id);
    std::erase_if(common, [&](std::size_t id) { return std::find(ids.begin(), ids.end(), id) == ids.end(); });
  }
  if (common.size() < raw.size()) {
    warn(std::to_string(raw.size() - common.size()) + " group(s) missing from some method; evaluated on " +
         std::to_string(common.size()));
  }
  raw = keep_groups(raw, common);
  for (auto& m : methods) m.pairs = keep_groups(m.pairs, common);

  const EvaluationReport report = evaluate_dataset(raw, methods, metrics, a.bins);
  const fs::path out(a.out);
  io::write_report(report, out / "report.json");
  const std::string text = format_report_text(report);
  {
    std::ofstream txt(out / "report.txt");
    txt << text;
  }
  io::RunManifest manifest = manifest_for(cmd);
  manifest.inputs.push_back(a.raw_dir);
  manifest.inputs.insert(manifest.inputs.end(), a.canonical_dirs.begin(), a.canonical_dirs.end());
  manifest.outputs = {"report.json", "report.txt"};
  io::write_manifest(manifest, out);
  std::cout << text;
  return kExitOk;
}

// ---- report -----------------------------------------------------------------

struct ReportArgs {
  std::vector<std::string> reports;
  std::string format = "text";
  std::string out;
};

std::string match_table_text(const std::vector<io::MatchRecord>& rows) {
  std::ostringstream s;
  s << std::left << std::setw(12) << "descriptor" << std::setw(10) << "method" << std::right << std::setw(8)
    << "total" << std::setw(10) << "correct" << std::setw(11) << "accuracy" << '\n';
  s << std::string(51, '-') << '\n';
  for (const auto& r : rows) {
    std::ostringstream acc;
    acc << std::fixed << std::setprecision(2) << 100.0 * r.accuracy << '%';
    s << std::left << std::setw(12) << r.descriptor << std::setw(10) << r.method << std::right << std::setw(8)
      << r.total_matches << std::setw(10) << r.correct_matches << std::setw(11) << acc.str() << '\n';
  }
  return s.str();
}

int cmd_report(const ReportArgs& a, const CLI::App&) {
  std::ostringstream text;
  nlohmann::json merged = {{"evaluations", nlohmann::json::array()}, {"descriptors", nlohmann::json::array()}};
  for (const auto& path : a.reports) {
    const std::string format = io::sniff_format(path);
    if (format == "sss-evaluation") {
      const EvaluationReport r = io::read_report(path);
      text << "== " << path << '\n' << format_report_text(r) << '\n';
      std::ifstream in(path);
      nlohmann::json doc = nlohmann::json::parse(in);
      doc["source"] = path;
      merged["evaluations"].push_back(doc);
    } else {
      const auto records = io::read_descriptor_report(path);
      const auto summary = io::summarize_matches(records);
      text << "== " << path << '\n' << match_table_text(summary) << '\n';
      nlohmann::json rows = nlohmann::json::array();
      for (const auto& r : summary) {
        rows.push_back({{"descriptor", r.descriptor},
                        {"method", r.method},
                        {"total_matches", r.total_matches},
                        {"correct_matches", r.correct_matches},
                        {"accuracy", r.accuracy}});
      }
      merged["descriptors"].push_back({{"source", path}, {"rows", rows}});
    }
  }
  const std::string body = a.format == "json" ? merged.dump(2) + "\n" : text.str();
  if (a.out.empty()) {
    std::cout << body;
  } else {
    const fs::path out(a.out);
    if (out.has_parent_path()) fs::create_directories(out.parent_path());
    std::ofstream(out) << body;
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sidescan sonar canonical transform toolkit", "sss"};
  app.set_version_flag("--version", SSS_VERSION);
  app.require_subcommand(1);

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "Simulate a flat-floor survey with ground-truth keypoints");
  simulate->add_option("--seed", sim.seed, "Random seed")->capture_default_str();
  simulate->add_option("--lines", sim.lines, "Survey lines as altitude[:lateral_offset] in metres")
      ->delimiter(',')
      ->capture_default_str();
  simulate->add_option("--map-size", sim.map_size_m, "Along-track survey length in metres")->capture_default_str();
  simulate->add_option("--noise", sim.noise, "Relative gaussian intensity noise")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  simulate->add_option("--law", sim.law, "Forward Lambertian law")
      ->check(CLI::IsMember({"cos", "cos2", "cot"}))
      ->capture_default_str();
  simulate->add_option("--features", sim.features, "Curve-pair features per side")->capture_default_str();
  simulate->add_option("--ping-spacing", sim.ping_spacing_m, "Along-track ping spacing in metres")
      ->capture_default_str();
  simulate->add_option("--slant-resolution", sim.slant_resolution_m, "Slant range bin size in metres")
      ->capture_default_str();
  simulate->add_option("--bins", sim.bins, "Bins per side")->capture_default_str();
  simulate->add_option("--theta0", sim.theta0_deg, "Nadir cut angle in degrees")->capture_default_str();
  simulate->add_option("--beam-exponent", sim.beam_exponent, "Beam pattern exponent")->capture_default_str();
  simulate->add_option("--k-phi", sim.k_phi, "Beam pattern width constant")->capture_default_str();
  simulate->add_option("--beam-model", sim.beam_model, "Beam gain model")
      ->check(CLI::IsMember({"as-printed", "reciprocal", "flat"}))
      ->capture_default_str();
  simulate->add_option("--background", sim.texture.background, "Mean seafloor reflectivity")
      ->capture_default_str();
  simulate->add_option("--texture-amplitude", sim.texture.amplitude, "Standard deviation of the texture")
      ->capture_default_str();
  simulate->add_option("--texture-correlation", sim.texture.correlation_m,
                       "Texture correlation length in metres")
      ->capture_default_str();
  simulate->add_option("--out-dir", sim.out_dir, "Output directory")->required();

  CanonifyArgs can;
  auto* canon = app.add_subcommand("canonify", "Apply the canonical transform to one waterfall");
  canon->add_option("--in", can.in, "Waterfall header (.json)")->required()->check(CLI::ExistingFile);
  canon->add_option("--law", can.law, "Lambertian law")
      ->check(CLI::IsMember({"cos", "cos2", "cot"}))
      ->capture_default_str();
  canon->add_option("--delta-g", can.delta_g_m, "Ground resolution in metres (0: mid-swath spacing)")
      ->capture_default_str();
  canon->add_option("--theta0", can.theta0_deg, "Override the nadir cut angle in degrees");
  canon->add_option("--beam-exponent", can.beam_exponent, "Override the beam pattern exponent");
  canon->add_option("--k-phi", can.k_phi, "Override the beam pattern width constant");
  canon->add_option("--out", can.out, "Output directory")->required();

  ExtractArgs ext;
  auto* extract = app.add_subcommand("extract-patches", "Cut patch pairs around annotated keypoints");
  extract->add_option("--images", ext.images, "Two image headers a,b (waterfalls or canonical images)")
      ->required()
      ->delimiter(',')
      ->check(CLI::ExistingFile);
  extract->add_option("--annotations", ext.annotations, "Annotation file")->required()->check(CLI::ExistingFile);
  extract->add_option("--pings-per-group", ext.pings_per_group, "Along-track window per patch pair")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  extract->add_option("--margin", ext.margin, "Margin around the keypoints in pixels")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  extract->add_option("--out-dir", ext.out_dir, "Output directory")->required();

  EvaluateArgs ev;
  auto* evaluate = app.add_subcommand("evaluate", "Score raw and canonical patch pairs");
  evaluate->add_option("--raw-dir", ev.raw_dir, "Raw patch directory")->required()->check(CLI::ExistingDirectory);
  evaluate->add_option("--canonical-dirs", ev.canonical_dirs, "Canonical patch directories")
      ->required()
      ->delimiter(',')
      ->check(CLI::ExistingDirectory);
  evaluate->add_option("--metrics", ev.metrics, "Metrics among corr, kl, chi2")
      ->delimiter(',')
      ->capture_default_str();
  evaluate->add_option("--bins", ev.bins, "Histogram bins")->check(CLI::PositiveNumber)->capture_default_str();
  evaluate->add_option("--out", ev.out, "Output directory")->required();

  ReportArgs rep;
  auto* report = app.add_subcommand("report", "Merge evaluation and descriptor reports");
  report->add_option("--reports", rep.reports, "Report files")->required()->check(CLI::ExistingFile);
  report->add_option("--format", rep.format, "text or json")
      ->check(CLI::IsMember({"text", "json"}))
      ->capture_default_str();
  report->add_option("--out", rep.out, "Write to this file instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*simulate) return cmd_simulate(sim, *simulate);
    if (*canon) return cmd_canonify(can, *canon);
    if (*extract) return cmd_extract(ext, *extract);
    if (*evaluate) return cmd_evaluate(ev, *evaluate);
    if (*report) return cmd_report(rep, *report);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const DomainError& e) {
    std::cerr << "domain error: " << e.what() << '\n';
    return kExitRuntime;
  } catch (const StageError& e) {
    std::cerr << "stage error: " << e.what() << '\n';
    return kExitRuntime;
  } catch (const FormatError& e) {
    std::cerr << "format error: " << e.what() << '\n';
    return kExitRuntime;
  } catch (const ShapeError& e) {
    std::cerr << "shape error: " << e.what() << '\n';
    return kExitRuntime;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitUsage;
}
