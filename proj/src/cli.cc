/**
 * Copyright 2026 The Shadowsmith Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#include "shadowsmith/cli.h"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>

#include "CLI11.hpp"
#include "shadowsmith/augment.h"
#include "shadowsmith/dcn_verify.h"
#include "shadowsmith/log.h"
#include "shadowsmith/synth.h"
#include "shadowsmith/tensor.h"

namespace shadowsmith::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string Trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

struct AugmentFlags {
  std::string input;
  std::string output;
  std::string method;
  std::string backgrounds;
  double rs_min = kDefaultAreaRatioRange.lo;
  double rs_max = kDefaultAreaRatioRange.hi;
  double ra_min = kDefaultAspectRatioRange.lo;
  double ra_max = kDefaultAspectRatioRange.hi;
  double prob = 1.0;
  int copies = 1;
  uint64_t seed = 0;
  int workers = 1;
  int max_retries = kDefaultMaxRetries;
  bool include_originals = false;
};

struct SynthFlags {
  std::string output;
  int images = 8;
  int backgrounds = 4;
  int background_size = 128;
  SceneConfig scene;
};

struct InspectFlags {
  std::string input;
};

struct DcnFlags {
  uint64_t seed = dcn::VerifyOptions{}.seed;
  int cases = 100;
  int grad_cases = 20;
  bool inject_fault = false;
  std::string dump;
};

bool IsWithin(const fs::path& child, const fs::path& parent) {
  auto c = fs::weakly_canonical(child);
  auto p = fs::weakly_canonical(parent);
  for (; !c.empty(); c = c.parent_path()) {
    if (c == p) return true;
    if (c == c.parent_path()) break;
  }
  return false;
}

// Appends config-file entries for options not already given on the command
// line, so flags take precedence over the file.
std::vector<std::string> MergeConfig(const std::vector<std::string>& args,
                                     CLI::App& sub) {
  std::string config_path;
  for (size_t i = 1; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      config_path = args[i + 1];
    } else if (args[i].rfind("--config=", 0) == 0) {
      config_path = args[i].substr(9);
    }
  }
  if (config_path.empty()) return args;
  if (!fs::exists(config_path)) {
    throw ConfigError("--config: file not found: " + config_path);
  }
  auto given = [&](const std::string& flag) {
    return std::any_of(args.begin(), args.end(), [&](const std::string& a) {
      return a == flag || a.rfind(flag + "=", 0) == 0;
    });
  };
  std::vector<std::string> merged = args;
  for (const auto& [key, value] : ReadKeyValueFile(config_path)) {
    const std::string flag = "--" + key;
    if (key == "config") throw ConfigError("config files cannot nest --config");
    CLI::Option* opt = sub.get_option_no_throw(flag);
    if (opt == nullptr) {
      throw ConfigError("config file " + config_path + ": unknown key '" + key +
                        "' for subcommand " + sub.get_name());
    }
    if (given(flag)) continue;
    if (opt->get_type_size() == 0) {
      std::string v = value;
      std::transform(v.begin(), v.end(), v.begin(), ::tolower);
      if (v == "true" || v == "1" || v == "yes" || v == "on") {
        merged.push_back(flag);
      } else if (!(v == "false" || v == "0" || v == "no" || v == "off")) {
        throw ConfigError("config key '" + key + "' expects a boolean, got '" +
                          value + "'");
      }
    } else {
      merged.push_back(flag);
      merged.push_back(value);
    }
  }
  return merged;
}

uint64_t SeedFromEnv(uint64_t fallback) {
  const char* env = std::getenv(kSeedEnvVar);
  if (env == nullptr || *env == '\0') return fallback;
  try {
    size_t used = 0;
    const unsigned long long v = std::stoull(env, &used, 0);
    if (used != std::string(env).size()) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::exception&) {
    throw ConfigError(std::string(kSeedEnvVar) + " is not an unsigned integer: " +
                      env);
  }
}

int CmdAugment(const AugmentFlags& f, std::ostream& out) {
  const fs::path input(f.input);
  const fs::path output(f.output);
  if (!fs::is_directory(input)) {
    throw ConfigError("--input: not a directory: " + f.input);
  }
  if (!fs::exists(input / "annotations.json")) {
    throw ConfigError("--input: no annotations.json in " + f.input);
  }
  if (IsWithin(output, input)) {
    throw ConfigError("--output must not be the input directory or inside it");
  }
  AugmentConfig cfg;
  cfg.method = ParseMethod(f.method);
  cfg.area_range = {f.rs_min, f.rs_max};
  cfg.aspect_range = {f.ra_min, f.ra_max};
  cfg.apply_prob = f.prob;
  cfg.copies = f.copies;
  cfg.seed = f.seed;
  cfg.workers = f.workers;
  cfg.include_originals = f.include_originals;
  cfg.max_retries = f.max_retries;
  cfg.Validate();

  const bool needs_pool = cfg.method == Method::kContextPreserving ||
                          cfg.method == Method::kDirectInsertion;
  if (needs_pool && f.backgrounds.empty()) {
    throw ConfigError(std::string("--backgrounds is required for --method ") +
                      MethodName(cfg.method));
  }
  if (!f.backgrounds.empty() && !fs::is_directory(f.backgrounds)) {
    throw ConfigError("--backgrounds: not a directory: " + f.backgrounds);
  }

  Dataset ds = LoadDataset(input / "annotations.json", input / "images");
  if (!f.backgrounds.empty()) ds.background_pool = LoadBackgroundPool(f.backgrounds);
  if (needs_pool && ds.background_pool.empty()) {
    throw ConfigError("--backgrounds: no PNG images in " + f.backgrounds);
  }

  const AugmentResult result = AugmentDataset(ds, cfg);
  WriteDatasetDir(result.dataset, output);
  {
    std::ofstream rep(output / "report.json", std::ios::binary);
    if (!rep) throw IoError("cannot write " + (output / "report.json").string());
    rep << result.report.ToJson(cfg).dump(1) << '\n';
  }
  out << json{{"output", output.string()},
              {"images_written", result.report.images_written},
              {"instances_seen", result.report.instances_seen},
              {"instances_augmented", result.report.records.size()},
              {"clamped", result.report.clamped},
              {"fallbacks", result.report.fallbacks}}
             .dump()
      << '\n';
  return kExitOk;
}

int CmdSynth(const SynthFlags& f, std::ostream& out) {
  SynthDatasetConfig cfg;
  cfg.scene = f.scene;
  cfg.images = f.images;
  cfg.backgrounds = f.backgrounds;
  cfg.background_size = f.background_size;
  cfg.scene.Validate();
  const Dataset ds = GenerateDataset(cfg);
  WriteDatasetDir(ds, f.output, /*write_backgrounds=*/true);
  out << json{{"output", f.output},
              {"images", ds.images.size()},
              {"annotations", ds.annotations.size()},
              {"backgrounds", ds.background_pool.size()},
              {"seed", cfg.scene.seed}}
             .dump()
      << '\n';
  return kExitOk;
}

int CmdInspect(const InspectFlags& f, std::ostream& out) {
  if (!fs::is_directory(f.input) || !fs::exists(fs::path(f.input) / "annotations.json")) {
    throw ConfigError("--input: no dataset at " + f.input);
  }
  const Dataset ds = LoadDatasetDir(f.input);
  out << InspectDataset(ds).dump(1) << '\n';
  return kExitOk;
}

int CmdDcnCheck(const DcnFlags& f, std::ostream& out) {
  dcn::VerifyOptions opts;
  opts.seed = f.seed;
  opts.zero_offset_cases = f.cases;
  opts.gradient_cases = f.grad_cases;
  opts.inject_gradient_fault = f.inject_fault;
  if (f.cases < 1 || f.grad_cases < 1) {
    throw ConfigError("--cases and --grad-cases must be >= 1");
  }
  const auto results = dcn::RunDcnVerification(opts);
  size_t width = 0;
  for (const auto& r : results) width = std::max(width, r.name.size());
  bool ok = true;
  for (const auto& r : results) {
    ok = ok && r.passed;
    out << (r.passed ? "PASS  " : "FAIL  ") << std::left
        << std::setw(static_cast<int>(width)) << r.name << "  " << r.detail
        << '\n';
  }
  const auto failed = std::count_if(results.begin(), results.end(),
                                    [](const auto& r) { return !r.passed; });
  if (ok) {
    out << "all " << results.size() << " checks passed\n";
  } else {
    out << "FAILED: " << failed << " of " << results.size() << " checks\n";
  }

  if (!f.dump.empty()) {
    fs::create_directories(f.dump);
    Tensor seq({1, 4, 4});
    for (size_t i = 0; i < 16; ++i) seq[i] = static_cast<double>(i);
    const auto pooled =
        dcn::DeformRoiPoolForward(seq, {0, 0, 4, 4, 2, 2}, Tensor({2, 2, 2}));
    WriteTensor(seq, fs::path(f.dump) / "roi_input.sstn");
    WriteTensor(pooled.output, fs::path(f.dump) / "roi_quadrants.sstn");
  }
  return ok ? kExitOk : kExitRuntime;
}

}  // namespace

std::map<std::string, std::string> ReadKeyValueFile(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file: " + path.string());
  std::map<std::string, std::string> kv;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find_first_of("#;");
    if (hash != std::string::npos) line.erase(hash);
    line = Trim(line);
    if (line.empty() || line.front() == '[') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(path.string() + ":" + std::to_string(lineno) +
                        ": expected key = value");
    }
    std::string key = Trim(line.substr(0, eq));
    std::string value = Trim(line.substr(eq + 1));
    if (key.rfind("--", 0) == 0) key = key.substr(2);
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"') {
      value = value.substr(1, value.size() - 2);
    }
    if (key.empty()) {
      throw ConfigError(path.string() + ":" + std::to_string(lineno) +
                        ": empty key");
    }
    kv[key] = value;
  }
  return kv;
}

json InspectDataset(const Dataset& dataset) {
  int64_t small = 0, medium = 0, large = 0, mask_pixels = 0;
  int64_t min_per = 0, max_per = 0;
  bool first = true;
  std::vector<int> depths;
  for (const auto& img : dataset.images) {
    const auto n = static_cast<int64_t>(dataset.AnnotationsOf(img.id).size());
    min_per = first ? n : std::min(min_per, n);
    max_per = first ? n : std::max(max_per, n);
    first = false;
    if (std::find(depths.begin(), depths.end(), img.raster.depth()) == depths.end()) {
      depths.push_back(img.raster.depth());
    }
  }
  for (const auto& ann : dataset.annotations) {
    switch (ClassifySize(ann.bbox)) {
      case SizeClass::kSmall:
        ++small;
        break;
      case SizeClass::kMedium:
        ++medium;
        break;
      case SizeClass::kLarge:
        ++large;
        break;
    }
    for (uint8_t v : ann.mask.data()) mask_pixels += v != 0;
  }
  std::sort(depths.begin(), depths.end());
  const double mean = dataset.images.empty()
                          ? 0.0
                          : static_cast<double>(dataset.annotations.size()) /
                                static_cast<double>(dataset.images.size());
  return json{{"images", dataset.images.size()},
              {"instances", dataset.annotations.size()},
              {"instances_per_image", {{"min", min_per}, {"max", max_per}, {"mean", mean}}},
              {"size_classes", {{"small", small}, {"medium", medium}, {"large", large}}},
              {"mask_pixels", mask_pixels},
              {"bit_depths", depths},
              {"backgrounds", dataset.background_pool.size()}};
}

int Run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"shadowsmith: instance-level SAR ship augmentation and DCN kernel checks",
               "shadowsmith"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", "shadowsmith 0.1.0");
  bool verbose = false;
  bool quiet = false;
  app.add_flag("-v,--verbose", verbose, "Log progress to stderr");
  app.add_flag("-q,--quiet", quiet, "Log errors only");

  std::string config_unused;

  AugmentFlags af;
  CLI::App* augment = app.add_subcommand("augment", "Augment a dataset");
  augment->add_option("--input", af.input, "Dataset root (annotations.json, images/)")->required();
  augment->add_option("--output", af.output, "Output dataset root")->required();
  augment->add_option("--method", af.method, "cpil | re | dbi | none")->required();
  augment->add_option("--backgrounds", af.backgrounds, "Directory of ship-free background PNGs");
  augment->add_option("--rs-min", af.rs_min, "Area ratio lower bound")->capture_default_str();
  augment->add_option("--rs-max", af.rs_max, "Area ratio upper bound")->capture_default_str();
  augment->add_option("--ra-min", af.ra_min, "Aspect ratio lower bound")->capture_default_str();
  augment->add_option("--ra-max", af.ra_max, "Aspect ratio upper bound")->capture_default_str();
  augment->add_option("--prob", af.prob, "Per-instance apply probability")->capture_default_str();
  augment->add_option("--copies", af.copies, "Augmented copies of the dataset")->capture_default_str();
  CLI::Option* augment_seed = augment->add_option("--seed", af.seed, "Random seed");
  augment->add_option("--workers", af.workers, "Worker threads")->capture_default_str();
  augment->add_option("--max-retries", af.max_retries, "Rect resampling attempts before clamping")
      ->capture_default_str();
  augment->add_flag("--include-originals", af.include_originals,
                    "Also emit the unmodified images as the first slot");
  augment->add_option("--config", config_unused, "Key-value config file");

  SynthFlags sf;
  CLI::App* synth = app.add_subcommand("synth", "Generate a synthetic dataset");
  synth->add_option("--output", sf.output, "Output dataset root")->required();
  synth->add_option("--images", sf.images, "Number of scenes")->capture_default_str();
  synth->add_option("--width", sf.scene.width, "Scene width")->capture_default_str();
  synth->add_option("--height", sf.scene.height, "Scene height")->capture_default_str();
  synth->add_option("--depth", sf.scene.depth, "Bits per sample (8 or 16)")->capture_default_str();
  synth->add_option("--ships-min", sf.scene.min_ships, "Minimum ships per scene")->capture_default_str();
  synth->add_option("--ships-max", sf.scene.max_ships, "Maximum ships per scene")->capture_default_str();
  synth->add_option("--length-min", sf.scene.min_ship_length, "Minimum ship length")->capture_default_str();
  synth->add_option("--length-max", sf.scene.max_ship_length, "Maximum ship length")->capture_default_str();
  synth->add_option("--background-level", sf.scene.background_level, "Mean sea level")->capture_default_str();
  synth->add_option("--contrast", sf.scene.ship_contrast, "Ship/sea intensity ratio")->capture_default_str();
  synth->add_option("--looks", sf.scene.looks, "Speckle looks")->capture_default_str();
  synth->add_flag("--shadow", sf.scene.shadow, "Render a radar shadow beside each ship");
  synth->add_option("--backgrounds", sf.backgrounds, "Ship-free background images")->capture_default_str();
  synth->add_option("--background-size", sf.background_size, "Background image size")->capture_default_str();
  CLI::Option* synth_seed = synth->add_option("--seed", sf.scene.seed, "Random seed");
  synth->add_option("--config", config_unused, "Key-value config file");

  InspectFlags inf;
  CLI::App* inspect = app.add_subcommand("inspect", "Print dataset statistics as JSON");
  inspect->add_option("--input", inf.input, "Dataset root")->required();
  inspect->add_option("--config", config_unused, "Key-value config file");

  DcnFlags df;
  CLI::App* dcn_check = app.add_subcommand("dcn-check", "Verify the deformable kernels");
  dcn_check->add_option("--seed", df.seed, "Seed for randomized cases")->capture_default_str();
  dcn_check->add_option("--cases", df.cases, "Zero-offset equivalence cases")->capture_default_str();
  dcn_check->add_option("--grad-cases", df.grad_cases, "Finite-difference cases")->capture_default_str();
  dcn_check->add_option("--dump", df.dump, "Write golden tensors to this directory");
  dcn_check->add_flag("--inject-fault", df.inject_fault, "Corrupt one gradient (self-test)")
      ->group("");
  dcn_check->add_option("--config", config_unused, "Key-value config file");

  try {
    std::vector<std::string> argv_strings = args;
    for (size_t i = 1; i < args.size(); ++i) {
      if (args[i].empty() || args[i][0] == '-') continue;
      if (CLI::App* sub = app.get_subcommand_no_throw(args[i])) {
        argv_strings = MergeConfig(args, *sub);
      }
      break;
    }
    std::vector<const char*> argv;
    for (const auto& a : argv_strings) argv.push_back(a.c_str());
    try {
      app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
      out << app.help();
      return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
      out << app.help("", CLI::AppFormatMode::All);
      return kExitOk;
    } catch (const CLI::CallForVersion&) {
      out << "shadowsmith 0.1.0\n";
      return kExitOk;
    } catch (const CLI::ParseError& e) {
      err << "error: " << e.what() << '\n';
      if (app.get_subcommands().empty()) err << app.help();
      return kExitConfig;
    }

    if (quiet) {
      SetLogLevel(LogLevel::kError);
    } else if (verbose) {
      SetLogLevel(LogLevel::kInfo);
    } else {
      SetLogLevel(LogLevel::kWarning);
    }

    if (augment->parsed()) {
      if (augment_seed->count() == 0) af.seed = SeedFromEnv(af.seed);
      return CmdAugment(af, out);
    }
    if (synth->parsed()) {
      if (synth_seed->count() == 0) sf.scene.seed = SeedFromEnv(sf.scene.seed);
      return CmdSynth(sf, out);
    }
    if (inspect->parsed()) return CmdInspect(inf, out);
    if (dcn_check->parsed()) return CmdDcnCheck(df, out);
    return kExitConfig;
  } catch (const ConfigError& e) {
    err << "configuration error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
}

int Run(int argc, const char* const* argv) {
  std::vector<std::string> args(argv, argv + argc);
  return Run(args, std::cout, std::cerr);
}

}  // namespace shadowsmith::cli
