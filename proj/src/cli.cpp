// Copyright 2026 The dualrope Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "dualrope/cli.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "dualrope/config.hpp"
#include "dualrope/errors.hpp"
#include "dualrope/io.hpp"
#include "json.hpp"

#ifndef DUALROPE_VERSION
#define DUALROPE_VERSION "0.0.0"
#endif

namespace dualrope {

namespace fs = std::filesystem;

const char* version() { return DUALROPE_VERSION; }

namespace {

struct Options {
  std::string config;
  std::string out;
  std::string frames;
  std::optional<std::uint64_t> seed;
  std::vector<double> weights{0.0, 1.0, 1.5};
  int runs = 20;
  int threads = 0;
  bool dump_frames = false;
  bool require_success = false;
  bool dry_run = false;
};

class Manifest {
 public:
  Manifest(std::string command, const Options& opt)
      : command_(std::move(command)), opt_(opt), start_(std::chrono::steady_clock::now()) {}

  void set_config(const std::string& bytes) {
    char buf[24];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(bytes)));
    hash_ = buf;
  }
  void add_seed(std::uint64_t s) { seeds_.push_back(s); }
  void add_output(const std::string& path) { outputs_.push_back(path); }

  void write() const {
    if (opt_.out.empty()) return;
    nlohmann::ordered_json j;
    j["tool"] = "dualrope";
    j["version"] = version();
    j["command"] = command_;
    j["config"] = opt_.config;
    j["config_fnv1a64"] = hash_;
    j["seeds"] = seeds_;
    j["outputs"] = outputs_;
    j["dry_run"] = opt_.dry_run;
    j["wall_time_s"] =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    io::write_text((fs::path(opt_.out) / "manifest.json").string(), j.dump(2) + "\n");
  }

 private:
  std::string command_;
  const Options& opt_;
  std::chrono::steady_clock::time_point start_;
  std::string hash_;
  std::vector<std::uint64_t> seeds_;
  std::vector<std::string> outputs_;
};

std::string out_path(const Options& opt, const std::string& name) {
  return (fs::path(opt.out) / name).string();
}

void ensure_out(const Options& opt) {
  if (opt.out.empty()) throw ConfigError("--out is required");
  std::error_code ec;
  fs::create_directories(opt.out, ec);
  if (ec) throw ConfigError("cannot create output directory '" + opt.out + "'");
}

ScenarioConfig load(const Options& opt, Manifest& manifest) {
  const std::string bytes = read_text_file(opt.config);
  manifest.set_config(bytes);
  ScenarioConfig cfg = parse_config(bytes);
  if (opt.seed) cfg.seed = *opt.seed;
  return cfg;
}

void emit(const Options& opt, Manifest& manifest, const std::string& name, const std::string& text) {
  const std::string path = out_path(opt, name);
  io::write_text(path, text);
  manifest.add_output(path);
}

int cmd_plan(const Options& opt) {
  Manifest manifest("plan", opt);
  const ScenarioConfig cfg = load(opt, manifest);
  ensure_out(opt);
  if (!opt.dry_run) {
    const PlannedTrajectory plan = plan_trajectory(build_trajectory(cfg), cfg.planner, cfg.rope);
    emit(opt, manifest, "plan.csv", io::plan_csv(plan));
    emit(opt, manifest, "plan_meta.json", io::plan_metadata_json(plan, cfg));
    std::cout << "planned " << plan.steps.size() << " steps, d_max " << plan.stats.bounds.d_max
              << " m\n";
  } else {
    std::cout << "config OK\n";
  }
  manifest.write();
  return kExitOk;
}

int cmd_simulate(const Options& opt) {
  Manifest manifest("simulate", opt);
  const ScenarioConfig cfg = load(opt, manifest);
  manifest.add_seed(cfg.seed);
  ensure_out(opt);
  if (opt.dry_run) {
    std::cout << "config OK\n";
    manifest.write();
    return kExitOk;
  }
  RunOptions run_opt;
  run_opt.record_frames = true;
  const ScenarioRunLog log = run_scenario(cfg, run_opt);
  emit(opt, manifest, "run_log.csv", io::log_csv(log));
  emit(opt, manifest, "summary.json", io::summary_json(log, cfg));
  emit(opt, manifest, "plan.csv", io::plan_csv(log.plan));
  std::string est = io::estimates_header();
  for (const auto& f : log.frames) est += io::estimate_row(f.index, f.t, f.estimate);
  emit(opt, manifest, "estimates.csv", est);
  if (opt.dump_frames) {
    const fs::path dir = fs::path(opt.out) / "frames";
    fs::create_directories(dir);
    for (const auto& f : log.frames) {
      io::write_text((dir / io::frame_file_name(f.index)).string(), io::frame_text(f.t, f.cloud));
    }
    manifest.add_output(dir.string());
  }
  manifest.write();

  const auto& g = log.summary.grasp;
  if (g.passed) {
    std::cout << "grasp " << (g.success ? "success" : "failure") << " margin " << g.margin
              << " m, hook height " << g.hook_height << " m\n";
  } else {
    std::cout << "grasp failure: " << log.summary.grasp_error << "\n";
  }
  std::cout << "hook RMSE (cruise) " << log.summary.hook_rmse_cruise << " m\n";
  if (opt.require_success && !g.success) return kExitTaskFailure;
  return kExitOk;
}

int cmd_estimate(const Options& opt) {
  Manifest manifest("estimate", opt);
  const ScenarioConfig cfg = load(opt, manifest);
  manifest.add_seed(cfg.seed);
  if (opt.frames.empty()) throw ConfigError("--frames is required");
  const auto files = io::list_frame_files(opt.frames);
  ensure_out(opt);
  if (opt.dry_run) {
    std::cout << "config OK, " << files.size() << " frames\n";
    manifest.write();
    return kExitOk;
  }
  EstimationConfig est_cfg = cfg.estimation;
  est_cfg.seed = cfg.seed;
  ShapeFilter filter;
  std::string text = io::estimates_header();
  for (const auto& file : files) {
    RecordedFrame frame;
    try {
      frame = io::parse_frame(read_text_file(file));
    } catch (const ConfigError& e) {
      throw ConfigError(file + ": " + e.what());
    }
    const std::string stem = fs::path(file).stem().string();
    frame.index = std::stoull(stem.substr(stem.find('_') + 1));
    const EstimatedShape est = estimate_shape(frame.cloud, est_cfg, cfg.rope, filter);
    text += io::estimate_row(frame.index, frame.t, est);
  }
  emit(opt, manifest, "estimates.csv", text);
  manifest.write();
  std::cout << "estimated " << files.size() << " frames\n";
  return kExitOk;
}

int cmd_ablate(const Options& opt) {
  Manifest manifest("ablate", opt);
  const ScenarioConfig cfg = load(opt, manifest);
  if (opt.runs < 1) throw ConfigError("--runs must be >= 1");
  if (opt.weights.empty()) throw ConfigError("--weights must list at least one weight");
  for (double w : opt.weights) {
    if (!(w >= 0.0)) throw ConfigError("--weights must be >= 0");
  }
  for (int i = 0; i < opt.runs; ++i) manifest.add_seed(cfg.seed + static_cast<std::uint64_t>(i));
  ensure_out(opt);
  if (opt.dry_run) {
    std::cout << "config OK\n";
    manifest.write();
    return kExitOk;
  }
  const AblationResult result = run_ablation(cfg, opt.weights, opt.runs, cfg.seed, opt.threads);
  emit(opt, manifest, "ablation.csv", io::ablation_csv(result));
  emit(opt, manifest, "ablation.txt", io::ablation_text(result));
  emit(opt, manifest, "runs.csv", io::ablation_runs_csv(result));
  manifest.write();
  std::cout << io::ablation_text(result);
  return kExitOk;
}

int cmd_report(const Options& opt) {
  if (opt.out.empty()) throw ConfigError("--out is required");
  bool any = false;
  for (const char* name : {"plan_meta.json", "summary.json", "ablation.txt"}) {
    const fs::path p = fs::path(opt.out) / name;
    if (!fs::exists(p)) continue;
    any = true;
    std::cout << "== " << name << " ==\n" << read_text_file(p.string());
  }
  if (!any) throw ConfigError("no run outputs found in '" + opt.out + "'");
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args) {
  CLI::App app{"Dual-robot rope manipulation: planning, estimation, servoing and simulation"};
  app.set_version_flag("--version", std::string(version()));
  app.require_subcommand(1);
  Options opt;

  auto add_config = [&](CLI::App* sub) {
    sub->add_option("--config", opt.config, "scenario YAML")->required();
  };
  auto add_seed = [&](CLI::App* sub) {
    sub->add_option("--seed", opt.seed, "override the scenario seed");
  };

  CLI::App* plan = app.add_subcommand("plan", "plan robot and shape references");
  add_config(plan);
  plan->add_option("--out", opt.out, "output directory")->required();
  plan->add_flag("--dry-run", opt.dry_run, "validate the config only");

  CLI::App* sim = app.add_subcommand("simulate", "run the closed-loop scenario");
  add_config(sim);
  add_seed(sim);
  sim->add_option("--out", opt.out, "output directory")->required();
  sim->add_flag("--dump-frames", opt.dump_frames, "write sensor frames for replay");
  sim->add_flag("--require-success", opt.require_success, "exit 3 unless the grasp succeeds");
  sim->add_flag("--dry-run", opt.dry_run, "validate the config only");

  CLI::App* est = app.add_subcommand("estimate", "replay shape estimation on dumped frames");
  add_config(est);
  add_seed(est);
  est->add_option("--frames", opt.frames, "directory of frame_NNNNNN.csv files")->required();
  est->add_option("--out", opt.out, "output directory")->required();
  est->add_flag("--dry-run", opt.dry_run, "validate inputs only");

  CLI::App* abl = app.add_subcommand("ablate", "seeded grasp-weight ablation");
  add_config(abl);
  add_seed(abl);
  abl->add_option("--out", opt.out, "output directory")->required();
  abl->add_option("--weights", opt.weights, "comma-separated weights")->delimiter(',');
  abl->add_option("--runs", opt.runs, "runs per weight");
  abl->add_option("--threads", opt.threads, "worker threads (0: all cores)");
  abl->add_flag("--dry-run", opt.dry_run, "validate the config only");

  CLI::App* rep = app.add_subcommand("report", "print the outputs of a previous run");
  rep->add_option("--out", opt.out, "run output directory")->required();

  std::vector<std::string> rev(args.rbegin(), args.rend() - (args.empty() ? 0 : 1));
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*plan) return cmd_plan(opt);
    if (*sim) return cmd_simulate(opt);
    if (*est) return cmd_estimate(opt);
    if (*abl) return cmd_ablate(opt);
    if (*rep) return cmd_report(opt);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const DomainError& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kExitConfig;
  } catch (const NumericError& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const NoPassError& e) {
    std::cerr << "task failure: " << e.what() << "\n";
    return kExitTaskFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return kExitConfig;
}

}  // namespace dualrope
