// Command-line toolchain for 3D-aware Gaussian occupancy labels. Talks to the
// core library exclusively through the C API in gol/gol.h.

#include <gol/gol.h>

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <string>
#include <thread>
#include <vector>

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitNumeric = 3;

struct CliError {
  int code;
  std::string message;
};

[[noreturn]] void die(int code, const std::string& message) {
  throw CliError{code, message};
}

void check(gol_status status, const std::string& context) {
  if (status == GOL_OK) return;
  const int code = (status == GOL_ERR_INVALID || status == GOL_ERR_IO) ? kExitInput : kExitNumeric;
  die(code, context + ": " + gol_last_error());
}

json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) die(kExitInput, "cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    die(kExitInput, path + ": " + e.what());
  }
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) die(kExitInput, "cannot write " + path);
  out << text;
}

struct Camera {
  gol_intrinsics k{};
  int width = 0;
  int height = 0;
};

Camera parse_camera(const json& j, const std::string& where) {
  Camera cam;
  if (j.contains("cameraMatrix")) {
    // SPEED+-style camera.json: 3x3 matrix plus Nu/Nv image size
    const auto& m = j.at("cameraMatrix");
    cam.k.fx = m.at(0).at(0).get<double>();
    cam.k.fy = m.at(1).at(1).get<double>();
    cam.k.cx = m.at(0).at(2).get<double>();
    cam.k.cy = m.at(1).at(2).get<double>();
    cam.width = j.at("Nu").get<int>();
    cam.height = j.at("Nv").get<int>();
  } else {
    cam.k.fx = j.at("fx").get<double>();
    cam.k.fy = j.at("fy").get<double>();
    cam.k.cx = j.at("cx").get<double>();
    cam.k.cy = j.at("cy").get<double>();
    cam.width = j.at("width").get<int>();
    cam.height = j.at("height").get<int>();
  }
  if (cam.k.fx <= 0 || cam.k.fy <= 0 || cam.width <= 0 || cam.height <= 0) {
    die(kExitInput, where + ": invalid camera parameters");
  }
  return cam;
}

struct ManifestRecord {
  std::string id;
  double quaternion[4];
  double translation[3];
  std::optional<Camera> camera_override;
};

struct Manifest {
  Camera camera;
  std::optional<std::array<double, 3>> full_dims;  // from "objects", if unique
  std::vector<ManifestRecord> records;
};

Manifest parse_manifest_native(const json& j, const std::string& path) {
  Manifest m;
  if (!j.contains("camera")) die(kExitInput, path + ": missing \"camera\"");
  m.camera = parse_camera(j.at("camera"), path);
  if (j.contains("objects")) {
    const auto& objects = j.at("objects");
    if (objects.size() == 1) {
      const auto& dims = objects.begin().value();
      m.full_dims = {dims.at(0).get<double>(), dims.at(1).get<double>(), dims.at(2).get<double>()};
    }
  }
  std::set<std::string> seen;
  for (const auto& rj : j.value("records", json::array())) {
    ManifestRecord rec;
    rec.id = rj.at("id").get<std::string>();
    if (!seen.insert(rec.id).second) {
      die(kExitInput, path + ": duplicate record id \"" + rec.id + "\"");
    }
    const auto& q = rj.at("quaternion");
    const auto& t = rj.at("translation");
    if (q.size() != 4 || t.size() != 3) {
      die(kExitInput, path + ": record \"" + rec.id + "\" has malformed pose fields");
    }
    for (int i = 0; i < 4; ++i) rec.quaternion[i] = q.at(i).get<double>();
    for (int i = 0; i < 3; ++i) rec.translation[i] = t.at(i).get<double>();
    if (rj.contains("camera")) rec.camera_override = parse_camera(rj.at("camera"), path);
    m.records.push_back(rec);
  }
  return m;
}

// SPEED/SPEED+ pose JSON: an array of records with filename plus
// q_vbs2tango[_true] / r_Vo2To_vbs[_true] fields; camera comes separately.
Manifest parse_manifest_speedplus(const json& j, const std::string& path,
                                  const std::string& camera_path) {
  if (camera_path.empty()) {
    die(kExitInput, "--format speedplus requires --camera <camera.json>");
  }
  Manifest m;
  m.camera = parse_camera(load_json(camera_path), camera_path);
  if (!j.is_array()) die(kExitInput, path + ": expected a JSON array of pose records");
  auto field = [&](const json& rj, const char* a, const char* b) -> const json& {
    if (rj.contains(a)) return rj.at(a);
    if (rj.contains(b)) return rj.at(b);
    die(kExitInput, path + ": record missing " + std::string(a) + " / " + b);
  };
  std::set<std::string> seen;
  for (const auto& rj : j) {
    ManifestRecord rec;
    rec.id = rj.at("filename").get<std::string>();
    if (!seen.insert(rec.id).second) {
      die(kExitInput, path + ": duplicate record id \"" + rec.id + "\"");
    }
    const json& q = field(rj, "q_vbs2tango_true", "q_vbs2tango");
    const json& t = field(rj, "r_Vo2To_vbs_true", "r_Vo2To_vbs");
    for (int i = 0; i < 4; ++i) rec.quaternion[i] = q.at(i).get<double>();
    for (int i = 0; i < 3; ++i) rec.translation[i] = t.at(i).get<double>();
    m.records.push_back(rec);
  }
  return m;
}

bool parse_size(const std::string& text, int& w, int& h) {
  const auto x = text.find('x');
  if (x == std::string::npos) return false;
  try {
    w = std::stoi(text.substr(0, x));
    h = std::stoi(text.substr(x + 1));
  } catch (...) {
    return false;
  }
  return w > 0 && h > 0;
}

bool parse_dims(const std::string& text, std::array<double, 3>& full) {
  if (std::sscanf(text.c_str(), "%lf,%lf,%lf", &full[0], &full[1], &full[2]) != 3) return false;
  return full[0] > 0 && full[1] > 0 && full[2] > 0;
}

json gaussian_json(const double g[5], const char* frame) {
  return json{{"mu", {g[0], g[1]}}, {"sigma", {g[2], g[3], g[4]}}, {"frame", frame}};
}

void gaussian_from_json(const json& j, double g[5]) {
  const auto& mu = j.at("mu");
  const auto& sigma = j.at("sigma");
  g[0] = mu.at(0).get<double>();
  g[1] = mu.at(1).get<double>();
  g[2] = sigma.at(0).get<double>();
  g[3] = sigma.at(1).get<double>();
  g[4] = sigma.at(2).get<double>();
}

json ellipse_json(const double e[5]) {
  return json{{"x0", e[0]}, {"y0", e[1]}, {"a", e[2]}, {"b", e[3]}, {"theta", e[4]}};
}

void ellipse_from_json(const json& j, double e[5]) {
  e[0] = j.at("x0").get<double>();
  e[1] = j.at("y0").get<double>();
  e[2] = j.at("a").get<double>();
  e[3] = j.at("b").get<double>();
  e[4] = j.at("theta").get<double>();
}

std::string format_mean_std(double mean, double std) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.2f±%.2f", mean, std);
  return buf;
}

// ---- gen-labels ----

struct GenOptions {
  std::string manifest_path;
  std::string camera_path;
  std::string format = "native";
  std::string dims_text;
  std::string size_text = "64x64";
  std::string out_dir;
  bool emit_heatmaps = false;
  int jobs = 1;
};

int cmd_gen_labels(const GenOptions& opt) {
  const json mj = load_json(opt.manifest_path);
  Manifest manifest;
  if (opt.format == "speedplus") {
    manifest = parse_manifest_speedplus(mj, opt.manifest_path, opt.camera_path);
  } else if (opt.format == "native") {
    manifest = parse_manifest_native(mj, opt.manifest_path);
  } else {
    die(kExitInput, "unknown --format " + opt.format);
  }

  std::array<double, 3> full_dims{};
  if (!opt.dims_text.empty()) {
    if (!parse_dims(opt.dims_text, full_dims)) {
      die(kExitInput, "--dims expects three positive comma-separated full dimensions in meters");
    }
  } else if (manifest.full_dims) {
    full_dims = *manifest.full_dims;
  } else {
    die(kExitInput, "no --dims given and the manifest does not name a unique object");
  }
  const double half_dims[3] = {full_dims[0] / 2, full_dims[1] / 2, full_dims[2] / 2};

  int hm_w = 0, hm_h = 0;
  if (!parse_size(opt.size_text, hm_w, hm_h)) {
    die(kExitInput, "--heatmap-size expects WxH");
  }

  fs::create_directories(opt.out_dir);

  struct Result {
    json label;
    std::string error;
  };
  std::vector<Result> results(manifest.records.size());
  std::atomic<size_t> next{0};

  auto worker = [&] {
    for (size_t idx = next.fetch_add(1); idx < manifest.records.size();
         idx = next.fetch_add(1)) {
      const ManifestRecord& rec = manifest.records[idx];
      const Camera& cam = rec.camera_override ? *rec.camera_override : manifest.camera;
      double gaussian[5], ellipse[5], truncation = 0.0;
      const gol_status st =
          gol_label_from_pose(&cam.k, rec.quaternion, rec.translation, half_dims, cam.width,
                              cam.height, hm_w, hm_h, gaussian, ellipse, &truncation);
      if (st != GOL_OK) {
        results[idx].error = gol_last_error();
        continue;
      }
      results[idx].label = json{
          {"id", rec.id},
          {"gaussian", gaussian_json(gaussian, "pixel")},
          {"ellipse", ellipse_json(ellipse)},
          {"truncation_fraction", truncation},
          {"provenance",
           {{"quaternion", {rec.quaternion[0], rec.quaternion[1], rec.quaternion[2],
                            rec.quaternion[3]}},
            {"translation", {rec.translation[0], rec.translation[1], rec.translation[2]}},
            {"intrinsics",
             {{"fx", cam.k.fx}, {"fy", cam.k.fy}, {"cx", cam.k.cx}, {"cy", cam.k.cy}}},
            {"half_dims", {half_dims[0], half_dims[1], half_dims[2]}},
            {"image_size", {cam.width, cam.height}},
            {"heatmap_size", {hm_w, hm_h}}}}};
      if (opt.emit_heatmaps) {
        std::vector<double> heatmap(static_cast<size_t>(hm_w) * hm_h);
        if (gol_render_heatmap(gaussian, hm_w, hm_h, heatmap.data()) != GOL_OK ||
            gol_gohm_write((fs::path(opt.out_dir) / (rec.id + ".gohm")).string().c_str(), hm_w,
                           hm_h, heatmap.data()) != GOL_OK) {
          results[idx].error = gol_last_error();
        }
      }
    }
  };

  const int jobs = std::max(1, opt.jobs);
  std::vector<std::thread> pool;
  for (int t = 1; t < jobs; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  // deterministic output ordering by id
  std::vector<size_t> order(results.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    return manifest.records[a].id < manifest.records[b].id;
  });

  json labels = json::array();
  json errors = json::array();
  for (size_t idx : order) {
    if (!results[idx].error.empty()) {
      errors.push_back(json{{"id", manifest.records[idx].id}, {"error", results[idx].error}});
      std::cerr << "record " << manifest.records[idx].id << ": " << results[idx].error << "\n";
    } else {
      labels.push_back(std::move(results[idx].label));
    }
  }
  json out{{"schema_version", 1}, {"labels", labels}};
  if (!errors.empty()) out["errors"] = errors;
  write_text((fs::path(opt.out_dir) / "labels.json").string(), out.dump(2) + "\n");
  return errors.empty() ? kExitOk : kExitNumeric;
}

// ---- extract ----

int cmd_extract(const std::vector<std::string>& paths) {
  json out{{"schema_version", 1}, {"extractions", json::array()}};
  for (const auto& path : paths) {
    int w = 0, h = 0;
    double* heatmap = nullptr;
    check(gol_gohm_read(path.c_str(), &w, &h, &heatmap), path);
    double g_norm[5], g_px[5], ellipse[5];
    const gol_status st = gol_edsnt_extract(heatmap, w, h, g_norm);
    gol_free(heatmap);
    check(st, path);
    check(gol_normalized_to_pixel(g_norm, w, h, g_px), path);
    json entry{{"file", path},
               {"width", w},
               {"height", h},
               {"gaussian_normalized", gaussian_json(g_norm, "normalized")},
               {"gaussian_pixel", gaussian_json(g_px, "pixel")}};
    // degenerate (point-mass) extractions carry no ellipse
    if (gol_gaussian_to_ellipse(g_px, ellipse) == GOL_OK) {
      entry["ellipse"] = ellipse_json(ellipse);
    }
    out["extractions"].push_back(entry);
  }
  std::cout << out.dump(2) << "\n";
  return kExitOk;
}

// ---- eval ----

std::vector<std::pair<std::string, std::array<double, 5>>> load_label_ellipses(
    const std::string& path) {
  const json j = load_json(path);
  std::vector<std::pair<std::string, std::array<double, 5>>> out;
  try {
    for (const auto& rec : j.at("labels")) {
      std::array<double, 5> e{};
      ellipse_from_json(rec.at("ellipse"), e.data());
      out.emplace_back(rec.at("id").get<std::string>(), e);
    }
  } catch (const json::exception& e) {
    die(kExitInput, path + ": " + e.what());
  }
  return out;
}

int cmd_eval(const std::string& pred_path, const std::string& gt_path, int supersample,
             int mhd_points) {
  const auto pred = load_label_ellipses(pred_path);
  const auto gt = load_label_ellipses(gt_path);

  std::vector<std::string> mismatched;
  json per_record = json::array();
  const char* names[5] = {"iou", "overlap", "dice", "rvd", "mhd"};
  double sums[5] = {0, 0, 0, 0, 0};
  std::vector<std::array<double, 5>> rows;

  for (const auto& [id, pe] : pred) {
    const auto it = std::find_if(gt.begin(), gt.end(), [&](const auto& g) { return g.first == id; });
    if (it == gt.end()) {
      mismatched.push_back(id);
      continue;
    }
    double metrics[5];
    int degenerate = 0;
    check(gol_evaluate_pair(pe.data(), it->second.data(), supersample, mhd_points, metrics,
                            &degenerate),
          "record " + id);
    json entry{{"id", id}};
    for (int k = 0; k < 5; ++k) {
      entry[names[k]] = metrics[k];
      sums[k] += metrics[k];
    }
    entry["degenerate"] = degenerate != 0;
    per_record.push_back(entry);
    rows.push_back({metrics[0], metrics[1], metrics[2], metrics[3], metrics[4]});
  }
  for (const auto& [id, ge] : gt) {
    if (std::none_of(pred.begin(), pred.end(), [&](const auto& p) { return p.first == id; })) {
      mismatched.push_back(id);
    }
  }
  if (!mismatched.empty()) {
    std::string msg = "unmatched record ids:";
    for (const auto& id : mismatched) msg += " " + id;
    die(kExitInput, msg);
  }

  const double n = static_cast<double>(rows.size());
  json aggregate;
  for (int k = 0; k < 5; ++k) {
    const double mean = n > 0 ? sums[k] / n : 0.0;
    double var = 0.0;
    for (const auto& row : rows) var += (row[k] - mean) * (row[k] - mean);
    const double std = n > 1 ? std::sqrt(var / (n - 1)) : 0.0;
    aggregate[names[k]] = {{"mean", mean}, {"std", std},
                           {"formatted", format_mean_std(mean, std)}};
  }
  json out{{"schema_version", 1},
           {"supersample", supersample},
           {"mhd_points", mhd_points},
           {"records", per_record},
           {"aggregate", aggregate}};
  std::cout << out.dump(2) << "\n";
  return kExitOk;
}

// ---- reconstruct ----

struct ViewsInput {
  std::vector<double> proj;    // 12 per view
  std::vector<double> conics;  // 6 per view
  std::optional<json> gt_ellipsoid;
};

void push_view_from_gaussian(ViewsInput& views, const double proj[12], const double g_px[5],
                             const std::string& where) {
  double conic[6];
  check(gol_gaussian_to_conic(g_px, conic), where);
  views.proj.insert(views.proj.end(), proj, proj + 12);
  views.conics.insert(views.conics.end(), conic, conic + 6);
}

ViewsInput load_views_file(const std::string& path) {
  const json j = load_json(path);
  ViewsInput views;
  try {
    for (const auto& vj : j.at("views")) {
      double proj[12];
      const auto& pj = vj.at("p");
      if (pj.size() != 12) die(kExitInput, path + ": view \"p\" must hold 12 entries");
      for (int i = 0; i < 12; ++i) proj[i] = pj.at(i).get<double>();
      double g[5];
      if (vj.contains("gaussian")) {
        gaussian_from_json(vj.at("gaussian"), g);
      } else {
        double e[5];
        ellipse_from_json(vj.at("ellipse"), e);
        check(gol_ellipse_to_gaussian(e, g), path);
      }
      push_view_from_gaussian(views, proj, g, path);
    }
    if (j.contains("gt_ellipsoid")) views.gt_ellipsoid = j.at("gt_ellipsoid");
  } catch (const json::exception& e) {
    die(kExitInput, path + ": " + e.what());
  }
  return views;
}

// Build views from a label file: the projection matrix comes from each
// record's provenance with intrinsics rescaled to heatmap resolution, the
// conic from the label Gaussian.
ViewsInput load_views_from_labels(const std::string& path) {
  const json j = load_json(path);
  ViewsInput views;
  try {
    for (const auto& rec : j.at("labels")) {
      const auto& prov = rec.at("provenance");
      double quat[4], translation[3];
      for (int i = 0; i < 4; ++i) quat[i] = prov.at("quaternion").at(i).get<double>();
      for (int i = 0; i < 3; ++i) translation[i] = prov.at("translation").at(i).get<double>();
      gol_intrinsics k{prov.at("intrinsics").at("fx").get<double>(),
                       prov.at("intrinsics").at("fy").get<double>(),
                       prov.at("intrinsics").at("cx").get<double>(),
                       prov.at("intrinsics").at("cy").get<double>()};
      const double sx = prov.at("heatmap_size").at(0).get<double>() /
                        prov.at("image_size").at(0).get<double>();
      const double sy = prov.at("heatmap_size").at(1).get<double>() /
                        prov.at("image_size").at(1).get<double>();
      k.fx *= sx;
      k.cx *= sx;
      k.fy *= sy;
      k.cy *= sy;
      double proj[12];
      check(gol_projection_matrix(&k, quat, translation, proj), path);
      double g[5];
      gaussian_from_json(rec.at("gaussian"), g);
      push_view_from_gaussian(views, proj, g, path);
    }
  } catch (const json::exception& e) {
    die(kExitInput, path + ": " + e.what());
  }
  return views;
}

int cmd_reconstruct(const std::string& views_path, const std::string& labels_path) {
  ViewsInput views;
  if (!views_path.empty()) {
    views = load_views_file(views_path);
  } else if (!labels_path.empty()) {
    views = load_views_from_labels(labels_path);
  } else {
    die(kExitInput, "reconstruct needs --views or --labels");
  }
  const int n = static_cast<int>(views.conics.size() / 6);
  double quadric[10];
  check(gol_triangulate_ellipsoid(n, views.proj.data(), views.conics.data(), quadric),
        "triangulation");
  double center[3], axes[3], rotation[9], residual = 0.0;
  check(gol_decompose_dual_quadric(quadric, center, axes, rotation), "decomposition");
  check(gol_reprojection_residual(quadric, n, views.proj.data(), views.conics.data(), &residual),
        "closure");

  json out{{"schema_version", 1},
           {"n_views", n},
           {"estimate",
            {{"center", {center[0], center[1], center[2]}},
             {"half_axes", {axes[0], axes[1], axes[2]}},
             {"rotation", std::vector<double>(rotation, rotation + 9)}}},
           {"closure_residual", residual}};

  if (views.gt_ellipsoid) {
    double gtc[3], gta[3], gtr[9];
    try {
      for (int i = 0; i < 3; ++i) gtc[i] = views.gt_ellipsoid->at("center").at(i).get<double>();
      for (int i = 0; i < 3; ++i) gta[i] = views.gt_ellipsoid->at("half_axes").at(i).get<double>();
      for (int i = 0; i < 9; ++i) gtr[i] = views.gt_ellipsoid->at("rotation").at(i).get<double>();
    } catch (const json::exception& e) {
      die(kExitInput, std::string("gt_ellipsoid: ") + e.what());
    }
    double pos = 0, ori = 0, size = 0;
    check(gol_reconstruction_errors(center, axes, rotation, gtc, gta, gtr, &pos, &ori, &size),
          "error computation");
    out["errors"] = {{"position_cm", pos}, {"orientation_deg", ori}, {"size_cm", size}};
  }
  std::cout << out.dump(2) << "\n";
  return kExitOk;
}

// ---- fit ----

int cmd_fit(const std::string& labels_path, const std::string& id, const gol_fit_config& cfg_in,
            const std::string& heatmap_out) {
  const json j = load_json(labels_path);
  const json* found = nullptr;
  for (const auto& rec : j.at("labels")) {
    if (rec.at("id").get<std::string>() == id) {
      found = &rec;
      break;
    }
  }
  if (found == nullptr) die(kExitInput, "no record with id \"" + id + "\" in " + labels_path);

  gol_fit_config cfg = cfg_in;
  const auto& prov = found->at("provenance");
  cfg.width = prov.at("heatmap_size").at(0).get<int>();
  cfg.height = prov.at("heatmap_size").at(1).get<int>();

  double target[5];
  gaussian_from_json(found->at("gaussian"), target);

  gol_fit_trace* trace = nullptr;
  check(gol_fit_run(target, &cfg, &trace), "fit");

  const int iters = gol_fit_trace_iterations(trace);
  std::vector<double> losses(iters);
  for (int i = 0; i < iters; ++i) losses[i] = gol_fit_trace_loss(trace, i);
  double g_norm[5], g_px[5], ellipse[5], metrics[5];
  gol_fit_trace_final_params(trace, g_norm, g_px, ellipse);
  gol_fit_trace_metrics(trace, metrics);

  json out{{"schema_version", 1},
           {"target_id", id},
           {"config",
            {{"width", cfg.width},
             {"height", cfg.height},
             {"iterations", cfg.iterations},
             {"learning_rate", cfg.learning_rate},
             {"lambda", cfg.lambda},
             {"seed", cfg.seed},
             {"loss",
              cfg.variant == GOL_LOSS_W ? "w" : cfg.variant == GOL_LOSS_JS ? "js" : "wjs"}}},
           {"losses", losses},
           {"final",
            {{"gaussian_normalized", gaussian_json(g_norm, "normalized")},
             {"gaussian_pixel", gaussian_json(g_px, "pixel")},
             {"ellipse", ellipse_json(ellipse)},
             {"gradient_norm", gol_fit_trace_gradient_norm(trace)}}},
           {"metrics",
            {{"iou", metrics[0]},
             {"overlap", metrics[1]},
             {"dice", metrics[2]},
             {"rvd", metrics[3]},
             {"mhd", metrics[4]}}}};

  if (!heatmap_out.empty()) {
    std::vector<double> heatmap(static_cast<size_t>(cfg.width) * cfg.height);
    gol_fit_trace_heatmap(trace, heatmap.data());
    const gol_status st = gol_gohm_write(heatmap_out.c_str(), cfg.width, cfg.height,
                                         heatmap.data());
    gol_fit_trace_free(trace);
    check(st, heatmap_out);
  } else {
    gol_fit_trace_free(trace);
  }
  std::cout << out.dump(2) << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"3D-aware Gaussian occupancy label toolchain"};
  app.require_subcommand(1);

  GenOptions gen;
  auto* gen_cmd = app.add_subcommand("gen-labels", "Generate labels from a pose manifest");
  gen_cmd->add_option("--manifest", gen.manifest_path, "Manifest JSON path")->required();
  gen_cmd->add_option("--format", gen.format, "Manifest format: native or speedplus");
  gen_cmd->add_option("--camera", gen.camera_path, "Camera JSON (speedplus format)");
  gen_cmd->add_option("--dims", gen.dims_text, "Full object dimensions in meters, e.g. 0.80,0.75,0.32");
  gen_cmd->add_option("--heatmap-size", gen.size_text, "Heatmap resolution WxH (default 64x64)");
  gen_cmd->add_option("--out", gen.out_dir, "Output directory")->required();
  gen_cmd->add_flag("--emit-heatmaps", gen.emit_heatmaps, "Write <id>.gohm heatmaps");
  gen_cmd->add_option("--jobs", gen.jobs, "Worker threads");

  std::vector<std::string> extract_paths;
  auto* extract_cmd = app.add_subcommand("extract", "Extract parameters from GOHM heatmaps");
  extract_cmd->add_option("paths", extract_paths, "GOHM files")->required();

  std::string eval_pred, eval_gt;
  int supersample = 4, mhd_points = 720;
  auto* eval_cmd = app.add_subcommand("eval", "Evaluate predicted vs ground-truth labels");
  eval_cmd->add_option("--pred", eval_pred, "Predicted label file")->required();
  eval_cmd->add_option("--gt", eval_gt, "Ground-truth label file")->required();
  eval_cmd->add_option("--supersample", supersample, "Rasterization supersampling factor");
  eval_cmd->add_option("--mhd-points", mhd_points, "Boundary points for MHD");

  std::string views_path, recon_labels_path;
  auto* recon_cmd = app.add_subcommand("reconstruct", "Triangulate an ellipsoid from views");
  recon_cmd->add_option("--views", views_path, "Views JSON file");
  recon_cmd->add_option("--labels", recon_labels_path, "Label file with provenance");

  std::string fit_labels, fit_id, fit_loss = "wjs", fit_heatmap_out;
  gol_fit_config fit_cfg;
  gol_fit_config_defaults(&fit_cfg);
  auto* fit_cmd = app.add_subcommand("fit", "Gradient-descend logits toward a target label");
  fit_cmd->add_option("--labels", fit_labels, "Label file")->required();
  fit_cmd->add_option("--id", fit_id, "Target record id")->required();
  fit_cmd->add_option("--iters", fit_cfg.iterations, "Iterations");
  fit_cmd->add_option("--lr", fit_cfg.learning_rate, "Learning rate");
  fit_cmd->add_option("--lambda", fit_cfg.lambda, "JS weight in the combined loss");
  fit_cmd->add_option("--seed", fit_cfg.seed, "RNG seed");
  fit_cmd->add_option("--loss", fit_loss, "Loss variant: w, js or wjs");
  fit_cmd->add_option("--emit-heatmaps", fit_heatmap_out, "Write the final heatmap as GOHM");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitInput;
  }

  try {
    if (gen_cmd->parsed()) return cmd_gen_labels(gen);
    if (extract_cmd->parsed()) return cmd_extract(extract_paths);
    if (eval_cmd->parsed()) return cmd_eval(eval_pred, eval_gt, supersample, mhd_points);
    if (recon_cmd->parsed()) return cmd_reconstruct(views_path, recon_labels_path);
    if (fit_cmd->parsed()) {
      if (fit_loss == "w") fit_cfg.variant = GOL_LOSS_W;
      else if (fit_loss == "js") fit_cfg.variant = GOL_LOSS_JS;
      else if (fit_loss == "wjs") fit_cfg.variant = GOL_LOSS_WJS;
      else die(kExitInput, "unknown --loss " + fit_loss);
      return cmd_fit(fit_labels, fit_id, fit_cfg, fit_heatmap_out);
    }
  } catch (const CliError& e) {
    std::cerr << "error: " << e.message << "\n";
    return e.code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumeric;
  }
  return kExitInput;
}
