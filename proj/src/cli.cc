// Copyright 2026 The wbpose Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "wbpose/cli.h"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include <CLI11.hpp>

#include "json_util.h"
#include "wbpose/collision.h"
#include "wbpose/command_sampler.h"
#include "wbpose/curriculum.h"
#include "wbpose/dls_tracker.h"
#include "wbpose/io.h"
#include "wbpose/pose_repr.h"
#include "wbpose/repr_audit.h"
#include "wbpose/reward_engine.h"
#include "wbpose/robot_model.h"
#include "wbpose/svg_plot.h"
#include "wbpose/terrain.h"
#include "wbpose/workspace.h"

namespace wbpose {

namespace {

namespace fs = std::filesystem;
using json_util::json;

constexpr double kDefaultExtent = 8.0;
constexpr std::array<double, kNumBins> kReferenceBinPercent = {51, 21, 13, 6, 2};

fs::path ResolveOut(const std::string& out) {
  fs::path p(out);
  const char* dir = std::getenv(kOutDirEnv);
  if (p.is_relative() && dir != nullptr && *dir != '\0') p = fs::path(dir) / p;
  return p;
}

// Sibling path "<stem><suffix>" next to `primary`.
fs::path Sibling(const fs::path& primary, const std::string& suffix) {
  return primary.parent_path() / (primary.stem().string() + suffix);
}

std::string Timestamp() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// Tracks inputs and outputs of one invocation. Outputs are removed again
// unless Commit() runs.
class Run {
 public:
  Run(std::string command, fs::path primary)
      : command_(std::move(command)), primary_(std::move(primary)) {}
  ~Run() {
    if (committed_) return;
    for (const auto& p : written_) {
      std::error_code ec;
      fs::remove(p, ec);
    }
  }

  json config = json::object();
  std::uint64_t seed = 0;

  const fs::path& primary() const { return primary_; }

  std::string Read(const fs::path& path) {
    std::string text = ReadFile(path);
    inputs_[path.string()] = HashHex(Fnv1a64(text));
    return text;
  }

  void Write(const fs::path& path, const std::string& content) {
    written_.push_back(path);
    WriteFileAtomic(path, content);
  }

  // One manifest per output directory, keyed by the primary output name.
  void Commit() {
    std::map<fs::path, std::vector<std::string>> by_dir;
    for (const auto& p : written_) by_dir[p.parent_path()].push_back(p.filename().string());
    for (const auto& [dir, files] : by_dir) {
      const fs::path mpath = dir / "manifest.json";
      json m;
      if (fs::exists(mpath)) {
        try {
          m = json::parse(ReadFile(mpath));
        } catch (const json::exception&) {
          m = json();
        }
      }
      if (!m.is_object() || !m.contains("runs") || !m["runs"].is_object()) {
        m = {{"schema_version", kSchemaVersion}, {"kind", "manifest"}, {"runs", json::object()}};
      }
      m["runs"][primary_.filename().string()] = {
          {"command", command_},         {"config", config},
          {"inputs", inputs_},           {"seed", seed},
          {"tool_version", kToolVersion}, {"timestamp", Timestamp()},
          {"outputs", files}};
      WriteFileAtomic(mpath, m.dump(2) + "\n");
    }
    committed_ = true;
  }

 private:
  std::string command_;
  fs::path primary_;
  json inputs_ = json::object();
  std::vector<fs::path> written_;
  bool committed_ = false;
};

std::string Num(double v) { return FormatDouble(v); }

RobotModel ReadRobot(Run& run, const std::string& path) {
  const fs::path p = path.empty() ? DefaultRobotPath() : fs::path(path);
  run.config["robot"] = p.string();
  return ParseRobotDescription(run.Read(p));
}

TerrainField ReadTerrainOrFlat(Run& run, const std::string& path) {
  if (path.empty()) {
    run.config["terrain"] = {{"kind", "flat"}, {"extent", kDefaultExtent}};
    return GenerateTerrain(TerrainKind::kFlat, 0.0, 0, kDefaultExtent);
  }
  run.config["terrain"] = path;
  return ParseTerrain(run.Read(path));
}

double YawOf(const SE3Pose& pose) {
  const Eigen::Matrix3d r = pose.rotation();
  return std::atan2(r(1, 0), r(0, 0));
}

// First feasible stance on a square spiral of 0.15 m steps around the origin.
InitialConfiguration AutoStance(const RobotModel& model, const TerrainField& terrain) {
  constexpr double kStep = 0.15;
  constexpr int kRings = 10;
  for (int ring = 0; ring <= kRings; ++ring) {
    for (int iy = -ring; iy <= ring; ++iy) {
      for (int ix = -ring; ix <= ring; ++ix) {
        if (std::max(std::abs(ix), std::abs(iy)) != ring) continue;
        auto s = StanceAt(model, terrain, Eigen::Vector2d(ix * kStep, iy * kStep), 0.0);
        if (s) return *s;
      }
    }
  }
  throw NumericalError("no feasible stance found near the terrain center");
}

SE3Pose ParseBasePose(const std::string& text) {
  std::vector<double> v;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      size_t used = 0;
      v.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ValidationError("--base-pose: '" + item + "' is not a number");
    }
  }
  if (v.size() != 3 && v.size() != 4) {
    throw ValidationError("--base-pose expects 'auto' or x,y,z[,yaw]");
  }
  return SE3Pose::FromXyzRpy(Eigen::Vector3d(v[0], v[1], v[2]), 0.0, 0.0,
                             v.size() == 4 ? v[3] : 0.0);
}

std::vector<std::string> SplitCsvLine(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    while (!cell.empty() && (cell.back() == '\r' || cell.back() == ' ')) cell.pop_back();
    while (!cell.empty() && cell.front() == ' ') cell.erase(cell.begin());
    out.push_back(cell);
  }
  return out;
}

// Error trace CSV: a header naming position_error and rotation_error_deg,
// then one row per episode. '#' lines are skipped.
std::vector<EpisodeErrors> ParseErrorTrace(const std::string& text) {
  std::stringstream ss(text);
  std::string line;
  int pos_col = -1;
  int rot_col = -1;
  std::vector<EpisodeErrors> rows;
  int line_no = 0;
  while (std::getline(ss, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    const auto cells = SplitCsvLine(line);
    if (pos_col < 0) {
      for (size_t i = 0; i < cells.size(); ++i) {
        if (cells[i] == "position_error") pos_col = static_cast<int>(i);
        if (cells[i] == "rotation_error_deg") rot_col = static_cast<int>(i);
      }
      if (pos_col < 0 || rot_col < 0) {
        throw ValidationError(
            "error trace: header must name position_error and rotation_error_deg");
      }
      continue;
    }
    if (static_cast<int>(cells.size()) <= std::max(pos_col, rot_col)) {
      throw ValidationError("error trace: line " + std::to_string(line_no) + " is short");
    }
    EpisodeErrors e;
    try {
      e.position = std::stod(cells[pos_col]);
      e.rotation = std::stod(cells[rot_col]);
    } catch (const std::exception&) {
      throw ValidationError("error trace: line " + std::to_string(line_no) +
                            " has a non-numeric value");
    }
    if (!(e.position >= 0.0) || !(e.rotation >= 0.0)) {
      throw ValidationError("error trace: line " + std::to_string(line_no) +
                            " has a negative or non-finite error");
    }
    rows.push_back(e);
  }
  if (pos_col < 0) throw ValidationError("error trace: empty file");
  return rows;
}

// ---------------------------------------------------------------------------

struct GenTerrainArgs {
  std::string kind = "flat";
  double difficulty = 0.0;
  std::uint64_t seed = 0;
  double extent = kDefaultExtent;
  std::string out = "terrain.json";
};

void GenTerrain(const GenTerrainArgs& a) {
  Run run("gen-terrain", ResolveOut(a.out));
  run.seed = a.seed;
  run.config = {{"kind", a.kind}, {"difficulty", a.difficulty}, {"seed", a.seed},
                {"extent", a.extent}};
  const TerrainField field = GenerateTerrain(ParseTerrainKind(a.kind), a.difficulty, a.seed, a.extent);
  run.Write(run.primary(), SerializeTerrain(field));
  std::cerr << "terrain " << a.kind << ": " << field.cols() << "x" << field.rows()
            << " cells -> " << run.primary().string() << "\n";
  run.Commit();
}

struct SampleWorkspaceArgs {
  std::string robot;
  int steps = 7;
  int count = 10000;
  std::uint64_t seed = 0;
  int threads = 0;
  std::string out = "workspace.json";
};

void SampleWorkspaceCmd(const SampleWorkspaceArgs& a) {
  Run run("sample-workspace", ResolveOut(a.out));
  run.seed = a.seed;
  const RobotModel model = ReadRobot(run, a.robot);
  run.config.update({{"steps", a.steps}, {"count", a.count}, {"seed", a.seed}});
  PresampleOptions opt;
  opt.steps_per_joint = a.steps;
  opt.target_count = a.count;
  opt.seed = a.seed;
  opt.num_threads = a.threads;
  const WorkspaceDataset ds = PresampleWorkspace(model, opt);
  run.Write(run.primary(), SerializeWorkspace(ds));

  const auto frac = ds.BinFractions();
  std::vector<std::string> labels;
  std::vector<double> values;
  std::cerr << "bin fractions (measured vs reference %):";
  for (int b = 0; b < kNumBins; ++b) {
    std::cerr << " " << b << ":" << Num(std::round(1000.0 * frac[b]) / 10.0) << "/"
              << kReferenceBinPercent[b];
    labels.push_back("bin " + std::to_string(b));
    values.push_back(100.0 * frac[b]);
  }
  std::cerr << "\nr_max " << Num(ds.r_max) << " m, " << ds.poses.size() << " poses -> "
            << run.primary().string() << "\n";
  run.Write(Sibling(run.primary(), "_bins.svg"),
            BarChartSvg(labels, values, "Workspace poses per radial bin", "percent"));
  run.Commit();
}

struct SampleCommandsArgs {
  std::string workspace;
  std::string terrain;
  std::string robot;
  std::string base_pose = "auto";
  int n = 30;
  std::uint64_t seed = 0;
  bool no_expand = false;
  int max_attempts = 100;
  std::string out = "commands.json";
};

void SampleCommandsCmd(const SampleCommandsArgs& a) {
  Run run("sample-commands", ResolveOut(a.out));
  run.seed = a.seed;
  if (a.n < 1) throw ValidationError("--n must be >= 1");
  run.config = {{"workspace", a.workspace}, {"base_pose", a.base_pose}, {"n", a.n},
                {"seed", a.seed}, {"expand", !a.no_expand}, {"max_attempts", a.max_attempts}};
  const WorkspaceDataset ds = ParseWorkspace(run.Read(a.workspace));
  const TerrainField terrain = ReadTerrainOrFlat(run, a.terrain);
  const CoarseHeightMap coarse = BuildCoarseMap(terrain);

  SE3Pose base;
  if (a.base_pose == "auto") {
    const RobotModel model = ReadRobot(run, a.robot);
    base = AutoStance(model, terrain).base;
  } else {
    base = ParseBasePose(a.base_pose);
  }
  run.config["resolved_base_pose"] = json_util::PoseToJson(base);

  CommandSamplerOptions opt;
  opt.max_attempts = a.max_attempts;
  opt.expand = !a.no_expand;
  const EpisodeSchedule schedule;
  const Rng root = Rng(a.seed).Split("commands");
  std::vector<CommandSample> out;
  long rejected = 0;
  for (int ep = 0; static_cast<int>(out.size()) < a.n; ++ep) {
    Rng rng = root.Split(static_cast<std::uint64_t>(ep));
    for (CommandSample& c : CommandStream(schedule, ds, coarse, base, rng, opt)) {
      if (static_cast<int>(out.size()) == a.n) break;
      rejected += c.resample_attempts;
      out.push_back(std::move(c));
    }
  }
  run.Write(run.primary(), SerializeCommands(out) + "\n");
  std::cerr << out.size() << " commands, acceptance "
            << Num(static_cast<double>(out.size()) / (out.size() + rejected)) << " -> "
            << run.primary().string() << "\n";
  run.Commit();
}

json TrajectoryJson(const TrackingResult& r, const CommandSample& c, const JointVector& q_init,
                    double dt) {
  json steps = json::array();
  for (size_t i = 0; i < r.joint_trajectory.size(); ++i) {
    steps.push_back({{"base", json_util::PoseToJson(r.base_trajectory[i])},
                     {"q", json_util::VectorToJson(r.joint_trajectory[i])},
                     {"command", json_util::PoseToJson(c.target)}});
  }
  return {{"schema_version", kSchemaVersion}, {"kind", "trajectory"}, {"dt", dt},
          {"q_init", json_util::VectorToJson(q_init)}, {"steps", steps}};
}

struct EvalTrackingArgs {
  std::string robot;
  std::string terrain;
  std::string commands;
  std::string config;
  std::string out = "results.csv";
  std::string trajectories;
  int threads = 0;
};

void EvalTrackingCmd(const EvalTrackingArgs& a) {
  Run run("eval-tracking", ResolveOut(a.out));
  const RobotModel model = ReadRobot(run, a.robot);
  const TerrainField terrain = ReadTerrainOrFlat(run, a.terrain);
  run.config["commands"] = a.commands;
  const std::vector<CommandSample> commands = ParseCommands(run.Read(a.commands));
  TrackerConfig cfg;
  if (!a.config.empty()) cfg = ParseTrackerConfig(run.Read(a.config));
  run.config["tracker"] = {{"damping", cfg.damping}, {"step_scale", cfg.step_scale},
                           {"max_iterations", cfg.max_iterations}, {"tolerance", cfg.tolerance},
                           {"foot_weight", cfg.foot_weight}, {"posture_weight", cfg.posture_weight}};

  // Each command is solved from the stance at its base's xy and yaw.
  std::vector<InitialConfiguration> inits;
  std::vector<CommandSample> solvable;
  std::vector<int> slot(commands.size(), -1);
  std::vector<std::string> stance_failure(commands.size());
  for (size_t i = 0; i < commands.size(); ++i) {
    const SE3Pose& b = commands[i].base_pose;
    auto s = StanceAt(model, terrain, b.position().head<2>(), YawOf(b));
    if (!s) {
      stance_failure[i] = "no stable stance at the command's base";
      continue;
    }
    slot[i] = static_cast<int>(inits.size());
    inits.push_back(*s);
    solvable.push_back(commands[i]);
  }
  const std::vector<TrackingResult> solved = EvaluateBatch(model, inits, solvable, cfg, a.threads);
  std::vector<TrackingResult> results(commands.size());
  for (size_t i = 0; i < commands.size(); ++i) {
    if (slot[i] >= 0) {
      results[i] = solved[slot[i]];
    } else {
      results[i].failure = stance_failure[i];
    }
  }

  std::ostringstream csv;
  csv << "schema_version,index,converged,iterations,position_error,orientation_error_deg,"
         "initial_keypoint_error,final_keypoint_error,max_foot_displacement,self_collision,"
         "within_limits,failure\n";
  Series pos{"position error", {}, {}};
  Series rot{"orientation error", {}, {}};
  for (size_t i = 0; i < results.size(); ++i) {
    const TrackingResult& r = results[i];
    std::string failure = r.failure;
    for (char& ch : failure) {
      if (ch == ',' || ch == '\n') ch = ';';
    }
    csv << kSchemaVersion << "," << i << "," << (r.converged ? 1 : 0) << "," << r.iterations
        << "," << Num(r.final_errors.position) << "," << Num(r.final_errors.orientation) << ","
        << Num(r.initial_keypoint_error) << "," << Num(r.final_keypoint_error) << ","
        << Num(r.max_foot_displacement) << "," << (r.self_collision ? 1 : 0) << ","
        << (r.within_limits ? 1 : 0) << "," << failure << "\n";
    if (r.failure.empty()) {
      pos.y.push_back(100.0 * r.final_errors.position);
      rot.y.push_back(r.final_errors.orientation);
    }
  }
  run.Write(run.primary(), csv.str());

  const BatchSummary s = Summarize(results);
  const json summary = {{"schema_version", kSchemaVersion},
                        {"kind", "tracking_summary"},
                        {"count", s.count},
                        {"converged", s.converged},
                        {"convergence_rate", s.convergence_rate},
                        {"mean_position_error", s.mean_position_error},
                        {"median_position_error", s.median_position_error},
                        {"p95_position_error", s.p95_position_error},
                        {"mean_rotation_error_deg", s.mean_rotation_error},
                        {"median_rotation_error_deg", s.median_rotation_error},
                        {"p95_rotation_error_deg", s.p95_rotation_error},
                        {"mean_iterations", s.mean_iterations},
                        {"max_iterations", s.max_iterations},
                        {"failures", s.failures}};
  run.Write(Sibling(run.primary(), "_summary.json"), summary.dump(2) + "\n");
  run.Write(Sibling(run.primary(), "_position_error.svg"),
            HistogramSvg({pos}, 40, "Final position error", "cm"));
  run.Write(Sibling(run.primary(), "_orientation_error.svg"),
            HistogramSvg({rot}, 40, "Final orientation error", "deg"));

  if (!a.trajectories.empty()) {
    run.config["trajectories"] = a.trajectories;
    const fs::path dir = ResolveOut(a.trajectories);
    const double dt = EpisodeSchedule().control_dt();
    for (size_t i = 0; i < commands.size(); ++i) {
      if (slot[i] < 0 || !results[i].failure.empty()) continue;
      char name[48];
      std::snprintf(name, sizeof(name), "command_%04zu.json", i);
      run.Write(dir / name,
                TrajectoryJson(results[i], commands[i], inits[slot[i]].q, dt).dump() + "\n");
    }
  }
  std::cerr << "converged " << s.converged << "/" << s.count << ", mean error "
            << Num(100.0 * s.mean_position_error) << " cm / " << Num(s.mean_rotation_error)
            << " deg -> " << run.primary().string() << "\n";
  run.Commit();
}

struct CurriculumArgs {
  int episodes = 0;
  std::string error_trace;
  int max_level = 10;
  int start_level = 0;
  std::uint64_t seed = 0;
  std::string out = "curriculum.csv";
};

void CurriculumCmd(const CurriculumArgs& a) {
  Run run("curriculum-sim", ResolveOut(a.out));
  run.seed = a.seed;
  if (a.max_level < 0) throw ValidationError("--max-level must be >= 0");
  if (a.start_level < 0 || a.start_level > a.max_level) {
    throw ValidationError("--start-level must lie in [0, max-level]");
  }
  if (a.episodes < 0) throw ValidationError("--episodes must be >= 0");
  std::vector<EpisodeErrors> trace;
  int episodes = a.episodes;
  if (!a.error_trace.empty()) {
    trace = ParseErrorTrace(run.Read(a.error_trace));
    if (episodes == 0) episodes = static_cast<int>(trace.size());
    if (episodes > static_cast<int>(trace.size())) {
      throw ValidationError("--episodes exceeds the " + std::to_string(trace.size()) +
                            " rows of the error trace");
    }
  } else if (episodes == 0) {
    episodes = 200;
  }
  run.config = {{"episodes", episodes}, {"error_trace", a.error_trace}, {"max_level", a.max_level},
                {"start_level", a.start_level}, {"seed", a.seed},
                {"error_model", trace.empty() ? "synthetic" : "trace"}};

  const Rng root(a.seed);
  Rng level_rng = root.Split("curriculum");
  Rng error_rng = root.Split("curriculum_errors");
  CurriculumState state;
  state.level = a.start_level;
  state.max_level = a.max_level;

  std::ostringstream csv;
  csv << "schema_version,episode,position_error,rotation_error_deg,level_before,transition,level\n";
  Series levels{"level", {}, {}};
  for (int ep = 0; ep < episodes; ++ep) {
    EpisodeErrors e;
    if (!trace.empty()) {
      e = trace[ep];
    } else {
      // Synthetic policy whose error grows with terrain difficulty.
      const double d = LevelDifficulty(state.level, state.max_level);
      e.position = error_rng.Uniform(0.0, 0.25) + 0.9 * d * error_rng.Uniform();
      e.rotation = 100.0 * e.position + error_rng.Uniform(0.0, 30.0);
    }
    const int before = state.level;
    const CurriculumStep step = CurriculumUpdate(state, e.position, e.rotation, level_rng);
    state = step.state;
    csv << kSchemaVersion << "," << ep << "," << Num(e.position) << "," << Num(e.rotation) << ","
        << before << "," << TransitionName(step.transition) << "," << state.level << "\n";
    levels.x.push_back(ep);
    levels.y.push_back(state.level);
  }
  run.Write(run.primary(), csv.str());
  run.Write(Sibling(run.primary(), "_levels.svg"),
            LinePlotSvg({levels}, "Curriculum level", "episode", "level"));
  std::cerr << episodes << " episodes, final level " << state.level << " -> "
            << run.primary().string() << "\n";
  run.Commit();
}

struct ReprAuditArgs {
  int paths = 1000;
  std::uint64_t seed = 0;
  double ds = 1e-3;
  std::string out = "repr_audit.json";
};

void ReprAuditCmd(const ReprAuditArgs& a) {
  Run run("repr-audit", ResolveOut(a.out));
  run.seed = a.seed;
  AuditOptions opt;
  opt.num_paths = a.paths;
  opt.seed = a.seed;
  opt.ds = a.ds;
  run.config = {{"paths", a.paths}, {"seed", a.seed}, {"ds", a.ds},
                {"jump_threshold", opt.jump_threshold}};
  const AuditReport rep = RunContinuityAudit(opt);

  constexpr int kKinds = 4;
  json per_kind = json::object();
  std::vector<Series> hist;
  for (int k = 0; k < kKinds; ++k) {
    double max_step = 0.0;
    double max_ratio = 0.0;
    Series s{std::string(PoseReprKindName(static_cast<PoseReprKind>(k))), {}, {}};
    for (const PathStats& p : rep.paths) {
      max_step = std::max(max_step, p.max_step[k]);
      max_ratio = std::max(max_ratio, p.max_ratio[k]);
      s.y.push_back(p.max_step[k]);
    }
    per_kind[s.name] = {{"max_step", max_step}, {"max_ratio", max_ratio},
                        {"paths_with_jump", rep.paths_with_jump[k]}};
    hist.push_back(std::move(s));
  }
  double aligned = 0.0;
  for (const PathStats& p : rep.paths) aligned = std::max(aligned, p.aligned_quaternion_max_ratio);
  const json report = {{"schema_version", kSchemaVersion},
                       {"kind", "repr_audit"},
                       {"paths", static_cast<int>(rep.paths.size())},
                       {"crossing_paths", rep.crossing_paths},
                       {"crossing_with_euler_jump", rep.crossing_with_euler_jump},
                       {"fitted_keypoint", rep.fitted_keypoint},
                       {"fitted_six_d", rep.fitted_six_d},
                       {"fitted_c", rep.fitted_c},
                       {"crossing_ratio", rep.crossing_ratio},
                       {"bound_keypoint", rep.bound_keypoint},
                       {"bound_six_d", rep.bound_six_d},
                       {"aligned_quaternion_max_ratio", aligned},
                       {"representations", per_kind}};
  run.Write(run.primary(), report.dump(2) + "\n");

  std::ostringstream csv;
  csv << "schema_version,path,crossing,path_angle";
  for (int k = 0; k < kKinds; ++k) {
    const std::string n(PoseReprKindName(static_cast<PoseReprKind>(k)));
    csv << "," << n << "_max_step," << n << "_max_ratio," << n << "_jumps";
  }
  csv << ",aligned_quaternion_max_ratio\n";
  for (size_t i = 0; i < rep.paths.size(); ++i) {
    const PathStats& p = rep.paths[i];
    csv << kSchemaVersion << "," << i << "," << (p.crossing ? 1 : 0) << "," << Num(p.path_angle);
    for (int k = 0; k < kKinds; ++k) {
      csv << "," << Num(p.max_step[k]) << "," << Num(p.max_ratio[k]) << "," << p.jumps[k];
    }
    csv << "," << Num(p.aligned_quaternion_max_ratio) << "\n";
  }
  run.Write(Sibling(run.primary(), "_paths.csv"), csv.str());
  run.Write(Sibling(run.primary(), "_max_step.svg"),
            HistogramSvg(hist, 60, "Largest per-sample payload step on each path", "step norm"));
  std::cerr << rep.crossing_with_euler_jump << "/" << rep.crossing_paths
            << " crossing paths with an Euler jump; fitted C " << Num(rep.fitted_c) << " -> "
            << run.primary().string() << "\n";
  run.Commit();
}

struct TrajectoryStep {
  SE3Pose base;
  JointVector q;
  SE3Pose command;
  std::optional<JointVector> action;
  std::optional<std::array<double, kNumFeet>> foot_forces;
};

struct Trajectory {
  double dt = 0.02;
  JointVector q_init = JointVector::Zero();
  std::vector<TrajectoryStep> steps;
};

Trajectory ParseTrajectory(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("trajectory: malformed JSON: ") + e.what());
  }
  json_util::CheckSchema(j, "trajectory");
  if (!j.contains("kind") || j["kind"] != "trajectory") {
    throw ValidationError("trajectory: kind must be 'trajectory'");
  }
  Trajectory t;
  t.dt = json_util::NumberAt(json_util::Require(j, "dt", "trajectory"), "trajectory.dt");
  const json& steps = json_util::Require(j, "steps", "trajectory");
  if (!steps.is_array() || steps.empty()) {
    throw ValidationError("trajectory.steps: expected a non-empty array");
  }
  for (size_t i = 0; i < steps.size(); ++i) {
    const std::string ctx = "trajectory.steps[" + std::to_string(i) + "]";
    const json& s = steps[i];
    TrajectoryStep st;
    st.base = json_util::PoseFromJson(json_util::Require(s, "base", ctx), ctx + ".base");
    st.q = json_util::VectorFromJson<kNumJoints>(json_util::Require(s, "q", ctx), ctx + ".q");
    st.command =
        json_util::PoseFromJson(json_util::Require(s, "command", ctx), ctx + ".command");
    if (s.contains("action")) {
      st.action = json_util::VectorFromJson<kNumJoints>(s["action"], ctx + ".action");
    }
    if (s.contains("foot_forces")) {
      const auto f = json_util::VectorFromJson<kNumFeet>(s["foot_forces"], ctx + ".foot_forces");
      st.foot_forces = std::array<double, kNumFeet>{f[0], f[1], f[2], f[3]};
    }
    t.steps.push_back(std::move(st));
  }
  t.q_init = j.contains("q_init")
                 ? json_util::VectorFromJson<kNumJoints>(j["q_init"], "trajectory.q_init")
                 : t.steps.front().q;
  return t;
}

struct RewardTraceArgs {
  std::string trajectory;
  std::string weights;
  std::string terrain;
  std::string robot;
  std::string progress_mode = "componentwise";
  std::string out = "reward_trace.csv";
};

void RewardTraceCmd(const RewardTraceArgs& a) {
  Run run("reward-trace", ResolveOut(a.out));
  const RobotModel model = ReadRobot(run, a.robot);
  const TerrainField terrain = ReadTerrainOrFlat(run, a.terrain);
  run.config["trajectory"] = a.trajectory;
  const Trajectory traj = ParseTrajectory(run.Read(a.trajectory));
  RewardWeights w;
  if (!a.weights.empty()) w = ParseRewardWeights(run.Read(a.weights));
  ProgressMode mode;
  if (a.progress_mode == "componentwise") {
    mode = ProgressMode::kComponentwise;
  } else if (a.progress_mode == "sum") {
    mode = ProgressMode::kSum;
  } else {
    throw ValidationError("--progress-mode must be 'componentwise' or 'sum'");
  }
  run.config.update({{"weights", a.weights}, {"progress_mode", a.progress_mode}, {"dt", traj.dt}});
  const EpisodeSchedule schedule(12.0, 4.0, 2.0, traj.dt);

  std::ostringstream csv;
  csv << "schema_version,step,time,time_in_command,reward_active,tracking,progress,feet_contact,"
         "initial_joint,torque,acceleration,action_rate,limit,w_tracking,w_progress,"
         "w_feet_contact,w_initial_joint,w_penalty,total\n";
  Series total{"total", {}, {}};
  Series tracking{"tracking", {}, {}};
  JointVector prev_q = traj.steps.front().q;
  JointVector prev_qd = JointVector::Zero();
  JointVector prev_action = JointVector::Zero();
  Eigen::Vector3d best = Eigen::Vector3d::Zero();
  for (size_t k = 0; k < traj.steps.size(); ++k) {
    const TrajectoryStep& st = traj.steps[k];
    const int step = static_cast<int>(k);
    StepState s;
    s.time_in_command = schedule.TimeInCommand(step);
    const auto tf = LinkTransforms(model, st.base.ToIsometry(), st.q);
    s.measured = KeypointsOf(SE3Pose(tf[model.ee_link_id()]));
    s.command = KeypointsOf(st.command);
    // Best distances restart from the current distances at every new command.
    if (step % schedule.steps_per_command() == 0) best = KeypointDistances(s.measured, s.command);
    s.best_distances = best;
    s.q = st.q;
    s.qd = k == 0 ? JointVector::Zero() : JointVector((st.q - prev_q) / traj.dt);
    s.qdd = k == 0 ? JointVector::Zero() : JointVector((s.qd - prev_qd) / traj.dt);
    s.action = st.action ? *st.action : TargetsToAction(st.q, model);
    s.prev_action = k == 0 ? s.action : prev_action;
    s.tau = TorqueProxy(ActionToTargets(s.action, model), s.q, s.qd);
    s.q_init = traj.q_init;
    if (st.foot_forces) {
      s.foot_forces = *st.foot_forces;
    } else {
      std::array<Eigen::Vector3d, kNumFeet> feet;
      for (int f = 0; f < kNumFeet; ++f) feet[f] = tf[model.foot_link_ids()[f]].translation();
      s.foot_forces = FootContactProxy(feet, model, terrain);
    }
    const RewardBreakdown r = TotalReward(s, model, w, schedule, mode);
    best = r.best_distances;
    csv << kSchemaVersion << "," << step << "," << Num(schedule.StepTime(step)) << ","
        << Num(s.time_in_command) << "," << (schedule.RewardActive(step) ? 1 : 0) << ","
        << Num(r.tracking) << "," << Num(r.progress) << "," << Num(r.feet_contact) << ","
        << Num(r.initial_joint) << "," << Num(r.penalty.torque) << ","
        << Num(r.penalty.acceleration) << "," << Num(r.penalty.action_rate) << ","
        << Num(r.penalty.limit) << "," << Num(r.w_tracking) << "," << Num(r.w_progress) << ","
        << Num(r.w_feet_contact) << "," << Num(r.w_initial_joint) << ","
        << Num(r.penalty.weighted) << "," << Num(r.total) << "\n";
    total.x.push_back(schedule.StepTime(step));
    total.y.push_back(r.total);
    tracking.x.push_back(schedule.StepTime(step));
    tracking.y.push_back(r.w_tracking);
    prev_q = st.q;
    prev_qd = s.qd;
    prev_action = s.action;
  }
  run.Write(run.primary(), csv.str());
  run.Write(Sibling(run.primary(), ".svg"),
            LinePlotSvg({total, tracking}, "Reward per step", "time (s)", "reward"));
  std::cerr << traj.steps.size() << " steps -> " << run.primary().string() << "\n";
  run.Commit();
}

template <typename F>
int Guard(F&& body) {
  try {
    body();
    return kExitOk;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
}

}  // namespace

int RunCli(int argc, const char* const* argv) {
  CLI::App app{"Kinematic environment kit for whole-body end-effector pose tracking", "wbpose"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);
  std::function<void()> action;

  GenTerrainArgs gt;
  auto* c = app.add_subcommand("gen-terrain", "Generate a terrain height field");
  c->add_option("--kind", gt.kind, "flat | rough | discrete_obstacles | stairs")->capture_default_str();
  c->add_option("--difficulty", gt.difficulty, "Difficulty in [0, 1]")->capture_default_str();
  c->add_option("--seed", gt.seed)->capture_default_str();
  c->add_option("--extent", gt.extent, "Side length, m")->capture_default_str();
  c->add_option("--out", gt.out)->capture_default_str();
  c->callback([&] { action = [&] { GenTerrain(gt); }; });

  SampleWorkspaceArgs sw;
  c = app.add_subcommand("sample-workspace", "Pre-sample the fixed-base workspace");
  c->add_option("--robot", sw.robot, "Robot description (default: bundled model)");
  c->add_option("--steps", sw.steps, "Grid steps per arm joint")->capture_default_str();
  c->add_option("--count", sw.count, "Retained poses")->capture_default_str();
  c->add_option("--seed", sw.seed)->capture_default_str();
  c->add_option("--threads", sw.threads, "0 = hardware concurrency")->capture_default_str();
  c->add_option("--out", sw.out)->capture_default_str();
  c->callback([&] { action = [&] { SampleWorkspaceCmd(sw); }; });

  SampleCommandsArgs sc;
  c = app.add_subcommand("sample-commands", "Sample terrain-feasible pose commands");
  c->add_option("--workspace", sc.workspace, "Workspace dataset")->required();
  c->add_option("--terrain", sc.terrain, "Terrain file (default: flat)");
  c->add_option("--robot", sc.robot, "Robot description, used by --base-pose auto");
  c->add_option("--base-pose", sc.base_pose, "auto | x,y,z[,yaw]")->capture_default_str();
  c->add_option("--n", sc.n, "Number of commands")->capture_default_str();
  c->add_option("--seed", sc.seed)->capture_default_str();
  c->add_flag("--no-expand", sc.no_expand, "Skip the random body offset");
  c->add_option("--max-attempts", sc.max_attempts)->capture_default_str();
  c->add_option("--out", sc.out)->capture_default_str();
  c->callback([&] { action = [&] { SampleCommandsCmd(sc); }; });

  EvalTrackingArgs et;
  c = app.add_subcommand("eval-tracking", "Track commands with the whole-body DLS solver");
  c->add_option("--robot", et.robot);
  c->add_option("--terrain", et.terrain, "Terrain file (default: flat)");
  c->add_option("--commands", et.commands, "Command file")->required();
  c->add_option("--config", et.config, "Tracker configuration JSON");
  c->add_option("--out", et.out)->capture_default_str();
  c->add_option("--trajectories", et.trajectories, "Directory for per-command trajectories");
  c->add_option("--threads", et.threads, "0 = hardware concurrency")->capture_default_str();
  c->callback([&] { action = [&] { EvalTrackingCmd(et); }; });

  CurriculumArgs cu;
  c = app.add_subcommand("curriculum-sim", "Replay episode errors through the curriculum");
  c->add_option("--episodes", cu.episodes, "0 = whole trace, or 200 synthetic")->capture_default_str();
  c->add_option("--error-trace", cu.error_trace, "CSV with position_error, rotation_error_deg");
  c->add_option("--max-level", cu.max_level)->capture_default_str();
  c->add_option("--start-level", cu.start_level)->capture_default_str();
  c->add_option("--seed", cu.seed)->capture_default_str();
  c->add_option("--out", cu.out)->capture_default_str();
  c->callback([&] { action = [&] { CurriculumCmd(cu); }; });

  ReprAuditArgs ra;
  c = app.add_subcommand("repr-audit", "Continuity audit of the orientation encodings");
  c->add_option("--paths", ra.paths)->capture_default_str();
  c->add_option("--seed", ra.seed)->capture_default_str();
  c->add_option("--ds", ra.ds, "Path parameter step")->capture_default_str();
  c->add_option("--out", ra.out)->capture_default_str();
  c->callback([&] { action = [&] { ReprAuditCmd(ra); }; });

  RewardTraceArgs rt;
  c = app.add_subcommand("reward-trace", "Evaluate every reward term along a trajectory");
  c->add_option("--trajectory", rt.trajectory, "Trajectory JSON")->required();
  c->add_option("--weights", rt.weights, "Reward weight overrides");
  c->add_option("--terrain", rt.terrain, "Terrain for the contact proxy (default: flat)");
  c->add_option("--robot", rt.robot);
  c->add_option("--progress-mode", rt.progress_mode, "componentwise | sum")->capture_default_str();
  c->add_option("--out", rt.out)->capture_default_str();
  c->callback([&] { action = [&] { RewardTraceCmd(rt); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitValidation;
  }
  return Guard(action);
}

int RunCli(const std::vector<std::string>& args) {
  std::vector<const char*> argv{"wbpose"};
  for (const auto& a : args) argv.push_back(a.c_str());
  return RunCli(static_cast<int>(argv.size()), argv.data());
}

}  // namespace wbpose
