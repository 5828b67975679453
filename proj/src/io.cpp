// SPDX-License-Identifier: Apache-2.0
//
// rf-locate: simulation workbench for indoor RF localization comparing
// LIS matched-filter radio maps with FMCW mmWave radar point clouds.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "rflocate/io.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace rflocate {

using nlohmann::json;

namespace {

constexpr const char* kManifestSchema = "rflocate.manifest.v1";
constexpr const char* kCloudSchema = "rflocate.clouds.v1";
constexpr const char* kPredictionSchema = "rflocate.predictions.v1";
constexpr const char* kReportSchema = "rflocate.report.v1";
constexpr const char* kCompareSchema = "rflocate.compare.v1";
constexpr const char* kHistorySchema = "rflocate.history.v1";
constexpr char kCheckpointMagic[8] = {'R', 'F', 'L', 'C', 'K', 'P', 'T', '1'};

void require_schema(const json& j, const char* expected, const std::string& path) {
    if (!j.contains("schema") || !j.at("schema").is_string() || j.at("schema") != expected)
        throw std::runtime_error(path + ": schema-version mismatch, expected " + expected);
}

json load_json_line(const std::string& line, const std::string& path) {
    json j = json::parse(line, nullptr, false);
    if (j.is_discarded()) throw std::runtime_error(path + ": malformed JSON line");
    return j;
}

std::ifstream open_input(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open: " + path);
    return in;
}

void reject_unknown_keys(const json& j, std::initializer_list<const char*> allowed,
                         const std::string& where) {
    for (const auto& [key, value] : j.items()) {
        bool ok = false;
        for (const char* a : allowed)
            if (key == a) ok = true;
        if (!ok) throw std::runtime_error("config: unknown key '" + key + "' in " + where);
    }
}

// ---- JSON round trips for the scene types ----------------------------------

json material_to_json(const Material& m) {
    return json{{"conductivity_s_m", m.conductivity_s_m},
                {"rel_permittivity", m.rel_permittivity},
                {"rel_permeability", m.rel_permeability}};
}

Material material_from_json(const json& j) {
    Material m;
    m.conductivity_s_m = j.at("conductivity_s_m").get<double>();
    m.rel_permittivity = j.at("rel_permittivity").get<double>();
    m.rel_permeability = j.at("rel_permeability").get<double>();
    return m;
}

json dataset_config_to_json(const DatasetConfig& c) {
    return json{{"pipeline", c.pipeline},
                {"size", c.size},
                {"room",
                 {{"width_m", c.room.width_m},
                  {"depth_m", c.room.depth_m},
                  {"height_m", c.room.height_m},
                  {"wall_material", material_to_json(c.room.wall)}}},
                {"target",
                 {{"extent_x", c.target_template.extent_x},
                  {"extent_y", c.target_template.extent_y},
                  {"height", c.target_template.height},
                  {"material", material_to_json(c.target_template.material)}}},
                {"disk_radius_m", c.disk_radius_m},
                {"device_count", c.device_count},
                {"device_margin_m", c.device_margin_m},
                {"label_length", c.label_length},
                {"label_width", c.label_width},
                {"frame_rate_hz", c.frame_rate_hz},
                {"walk_speed_mps", c.walk_speed_mps},
                {"frames_per_trajectory", c.frames_per_trajectory},
                {"time_window", c.time_window}};
}

DatasetConfig dataset_config_from_json(const json& j, const DatasetConfig& base) {
    DatasetConfig c = base;
    reject_unknown_keys(j,
                        {"pipeline", "size", "room", "target", "disk_radius_m", "device_count",
                         "device_margin_m", "label_length", "label_width", "frame_rate_hz",
                         "walk_speed_mps", "frames_per_trajectory", "time_window"},
                        "dataset");
    if (j.contains("pipeline")) c.pipeline = j.at("pipeline").get<std::string>();
    if (j.contains("size")) c.size = j.at("size").get<std::size_t>();
    if (j.contains("room")) {
        const json& r = j.at("room");
        reject_unknown_keys(r, {"width_m", "depth_m", "height_m", "wall_material"}, "dataset.room");
        if (r.contains("width_m")) c.room.width_m = r.at("width_m").get<double>();
        if (r.contains("depth_m")) c.room.depth_m = r.at("depth_m").get<double>();
        if (r.contains("height_m")) c.room.height_m = r.at("height_m").get<double>();
        if (r.contains("wall_material")) c.room.wall = material_from_json(r.at("wall_material"));
    }
    if (j.contains("target")) {
        const json& t = j.at("target");
        reject_unknown_keys(t, {"extent_x", "extent_y", "height", "material"}, "dataset.target");
        if (t.contains("extent_x")) c.target_template.extent_x = t.at("extent_x").get<double>();
        if (t.contains("extent_y")) c.target_template.extent_y = t.at("extent_y").get<double>();
        if (t.contains("height")) c.target_template.height = t.at("height").get<double>();
        if (t.contains("material")) c.target_template.material = material_from_json(t.at("material"));
    }
    if (j.contains("disk_radius_m")) c.disk_radius_m = j.at("disk_radius_m").get<double>();
    if (j.contains("device_count")) c.device_count = j.at("device_count").get<int>();
    if (j.contains("device_margin_m")) c.device_margin_m = j.at("device_margin_m").get<double>();
    if (j.contains("label_length")) c.label_length = j.at("label_length").get<double>();
    if (j.contains("label_width")) c.label_width = j.at("label_width").get<double>();
    if (j.contains("frame_rate_hz")) c.frame_rate_hz = j.at("frame_rate_hz").get<double>();
    if (j.contains("walk_speed_mps")) c.walk_speed_mps = j.at("walk_speed_mps").get<double>();
    if (j.contains("frames_per_trajectory"))
        c.frames_per_trajectory = j.at("frames_per_trajectory").get<std::size_t>();
    if (j.contains("time_window")) c.time_window = j.at("time_window").get<int>();
    return c;
}

json box_to_json(const BBox2D& b) { return json::array({b.x_min, b.y_min, b.x_max, b.y_max}); }

BBox2D box_from_json(const json& j) {
    if (!j.is_array() || j.size() != 4) throw std::runtime_error("expected a 4-element box array");
    return BBox2D{j[0].get<double>(), j[1].get<double>(), j[2].get<double>(), j[3].get<double>()};
}

} // namespace

// ---- hashing & atomic files --------------------------------------------------

std::uint64_t fnv1a64(const void* data, std::size_t n) {
    const auto* bytes = static_cast<const unsigned char*>(data);
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (std::size_t i = 0; i < n; ++i) {
        h ^= bytes[i];
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string file_hash_hex(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open: " + path);
    std::uint64_t h = 0xcbf29ce484222325ULL;
    char buf[1 << 16];
    while (in) {
        in.read(buf, sizeof(buf));
        const std::streamsize got = in.gcount();
        for (std::streamsize i = 0; i < got; ++i) {
            h ^= static_cast<unsigned char>(buf[i]);
            h *= 0x100000001b3ULL;
        }
    }
    char out[17];
    std::snprintf(out, sizeof(out), "%016llx", static_cast<unsigned long long>(h));
    return out;
}

void atomic_write_text(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open for writing: " + tmp);
        out << content;
        if (!out) throw std::runtime_error("write failed: " + tmp);
    }
    std::filesystem::rename(tmp, path);
}

// ---- manifest ------------------------------------------------------------------

void write_manifest(const std::string& path, const Manifest& manifest) {
    std::ostringstream out;
    json header{{"schema", kManifestSchema},
                {"master_seed", manifest.master_seed},
                {"config", dataset_config_to_json(manifest.config)}};
    out << header.dump() << "\n";
    for (const SampleRecord& r : manifest.records) {
        json line{{"id", r.id},        {"seed", r.seed},
                  {"pipeline", r.pipeline}, {"gt_box", box_to_json(r.gt_box)},
                  {"center", json::array({r.center_x, r.center_y})}};
        if (r.pipeline == "lis") {
            json devs = json::array();
            for (const Vec3& d : r.devices) devs.push_back(json::array({d.x, d.y, d.z}));
            line["devices"] = devs;
        } else {
            line["traj"] = r.trajectory;
            line["frame"] = r.frame;
        }
        out << line.dump() << "\n";
    }
    atomic_write_text(path, out.str());
}

Manifest read_manifest(const std::string& path) {
    std::ifstream in = open_input(path);
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error(path + ": empty manifest");
    json header = load_json_line(line, path);
    require_schema(header, kManifestSchema, path);

    Manifest m;
    m.master_seed = header.at("master_seed").get<std::uint64_t>();
    m.config = dataset_config_from_json(header.at("config"), DatasetConfig{});

    while (std::getline(in, line)) {
        if (line.empty()) continue;
        json j = load_json_line(line, path);
        SampleRecord r;
        r.id = j.at("id").get<std::uint64_t>();
        r.seed = j.at("seed").get<std::uint64_t>();
        r.pipeline = j.at("pipeline").get<std::string>();
        r.gt_box = box_from_json(j.at("gt_box"));
        r.center_x = j.at("center")[0].get<double>();
        r.center_y = j.at("center")[1].get<double>();
        if (r.pipeline == "lis") {
            for (const json& d : j.at("devices"))
                r.devices.push_back(Vec3{d[0].get<double>(), d[1].get<double>(), d[2].get<double>()});
        } else {
            r.trajectory = j.at("traj").get<std::uint64_t>();
            r.frame = j.at("frame").get<std::uint64_t>();
        }
        m.records.push_back(std::move(r));
    }
    return m;
}

// ---- point-cloud stream ----------------------------------------------------------

void write_cloud_stream(const std::string& path, const std::vector<FrameRecord>& frames) {
    std::ostringstream out;
    out << json{{"schema", kCloudSchema}, {"frames", frames.size()}}.dump() << "\n";
    for (const FrameRecord& f : frames) {
        json pts = json::array();
        for (const RadarPoint& p : f.cloud.points)
            pts.push_back(json::array({p.x, p.y, p.radial_velocity, p.intensity}));
        out << json{{"traj", f.trajectory}, {"frame", f.frame}, {"t", f.cloud.timestamp}, {"points", pts}}
                   .dump()
            << "\n";
    }
    atomic_write_text(path, out.str());
}

std::vector<FrameRecord> read_cloud_stream(const std::string& path) {
    std::ifstream in = open_input(path);
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error(path + ": empty cloud stream");
    require_schema(load_json_line(line, path), kCloudSchema, path);
    std::vector<FrameRecord> frames;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        json j = load_json_line(line, path);
        FrameRecord f;
        f.trajectory = j.at("traj").get<std::uint64_t>();
        f.frame = j.at("frame").get<std::uint64_t>();
        f.cloud.timestamp = j.at("t").get<double>();
        for (const json& p : j.at("points"))
            f.cloud.points.push_back(RadarPoint{p[0].get<double>(), p[1].get<double>(),
                                                p[2].get<double>(), p[3].get<double>()});
        frames.push_back(std::move(f));
    }
    return frames;
}

// ---- predictions & reports ---------------------------------------------------------

void write_predictions(const std::string& path, const std::string& pipeline,
                       const std::vector<Prediction>& predictions) {
    std::ostringstream out;
    out << json{{"schema", kPredictionSchema}, {"pipeline", pipeline}}.dump() << "\n";
    for (const Prediction& p : predictions)
        out << json{{"id", p.id}, {"box", box_to_json(p.box)}, {"near_border", p.near_border}}.dump()
            << "\n";
    atomic_write_text(path, out.str());
}

std::vector<Prediction> read_predictions(const std::string& path, std::string* pipeline) {
    std::ifstream in = open_input(path);
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error(path + ": empty predictions file");
    json header = load_json_line(line, path);
    require_schema(header, kPredictionSchema, path);
    if (pipeline) *pipeline = header.value("pipeline", "");
    std::vector<Prediction> out;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        json j = load_json_line(line, path);
        Prediction p;
        p.id = j.at("id").get<std::uint64_t>();
        p.box = box_from_json(j.at("box"));
        p.near_border = j.value("near_border", false);
        out.push_back(p);
    }
    return out;
}

namespace {

json report_to_json(const MetricReport& report) {
    json per = json::array();
    for (const SampleMetric& m : report.per_sample)
        per.push_back(json{{"id", m.id}, {"iou", m.iou}, {"center_distance_m", m.center_distance_m}});
    return json{{"schema", kReportSchema},
                {"pipeline", report.pipeline},
                {"dataset_hash", report.dataset_hash},
                {"count", report.count},
                {"mean_iou", report.mean_iou},
                {"mean_center_distance_m", report.mean_center_distance_m},
                {"per_sample", per}};
}

MetricReport report_from_json(const json& j) {
    MetricReport r;
    r.pipeline = j.at("pipeline").get<std::string>();
    r.dataset_hash = j.at("dataset_hash").get<std::string>();
    r.count = j.at("count").get<std::size_t>();
    r.mean_iou = j.at("mean_iou").get<double>();
    r.mean_center_distance_m = j.at("mean_center_distance_m").get<double>();
    for (const json& m : j.at("per_sample"))
        r.per_sample.push_back(SampleMetric{m.at("id").get<std::uint64_t>(), m.at("iou").get<double>(),
                                            m.at("center_distance_m").get<double>()});
    return r;
}

} // namespace

void write_report(const std::string& path, const MetricReport& report) {
    atomic_write_text(path, report_to_json(report).dump(2) + "\n");
}

MetricReport read_report(const std::string& path) {
    std::ifstream in = open_input(path);
    json j = json::parse(in, nullptr, false);
    if (j.is_discarded()) throw std::runtime_error(path + ": malformed report JSON");
    require_schema(j, kReportSchema, path);
    return report_from_json(j);
}

void write_metrics_csv(const std::string& path, const MetricReport& report) {
    std::ostringstream out;
    out << "id,iou,center_distance_m\n";
    char line[96];
    for (const SampleMetric& m : report.per_sample) {
        std::snprintf(line, sizeof(line), "%llu,%.17g,%.17g\n", static_cast<unsigned long long>(m.id),
                      m.iou, m.center_distance_m);
        out << line;
    }
    atomic_write_text(path, out.str());
}

void write_comparison(const std::string& json_path, const std::string& table_path,
                      const ComparisonReport& cmp) {
    json j{{"schema", kCompareSchema},
           {"lis", report_to_json(cmp.lis)},
           {"radar", report_to_json(cmp.radar)},
           {"iou_winner", cmp.iou_winner},
           {"distance_winner", cmp.distance_winner},
           {"reference",
            {{"lis", {{"iou", kReferenceLisIou}, {"center_distance_m", kReferenceLisDistanceM}}},
             {"radar", {{"iou", kReferenceRadarIou}, {"center_distance_m", kReferenceRadarDistanceM}}}}}};
    atomic_write_text(json_path, j.dump(2) + "\n");
    atomic_write_text(table_path, render_comparison_table(cmp));
}

// ---- training artifacts --------------------------------------------------------------

void write_history(const std::string& path, const std::vector<EpochStats>& history) {
    std::ostringstream out;
    out << json{{"schema", kHistorySchema}}.dump() << "\n";
    for (const EpochStats& e : history)
        out << json{{"epoch", e.epoch}, {"lr", e.lr}, {"train_mse", e.train_mse}, {"val_mse", e.val_mse}}
                   .dump()
            << "\n";
    atomic_write_text(path, out.str());
}

std::vector<EpochStats> read_history(const std::string& path) {
    std::ifstream in = open_input(path);
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error(path + ": empty history");
    require_schema(load_json_line(line, path), kHistorySchema, path);
    std::vector<EpochStats> out;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        json j = load_json_line(line, path);
        out.push_back(EpochStats{j.at("epoch").get<int>(), j.at("lr").get<double>(),
                                 j.at("train_mse").get<double>(), j.at("val_mse").get<double>()});
    }
    return out;
}

namespace {

void put_u32(std::string& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void put_u64(std::string& out, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

std::uint32_t get_u32(std::ifstream& in) {
    unsigned char b[4];
    in.read(reinterpret_cast<char*>(b), 4);
    if (!in) throw std::runtime_error("checkpoint: truncated");
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(b[i]) << (8 * i);
    return v;
}

std::uint64_t get_u64(std::ifstream& in) {
    unsigned char b[8];
    in.read(reinterpret_cast<char*>(b), 8);
    if (!in) throw std::runtime_error("checkpoint: truncated");
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
    return v;
}

} // namespace

void write_checkpoint(const std::string& path, const NetworkParams& params) {
    std::string blob;
    blob.append(kCheckpointMagic, sizeof(kCheckpointMagic));
    put_u32(blob, 1);  // format version
    const std::string arch = params.config.architecture_id();
    put_u64(blob, fnv1a64(arch.data(), arch.size()));
    put_u64(blob, params.config.feature_dim);
    put_u64(blob, params.config.ec1_width);
    put_u64(blob, params.config.ec2_width);
    put_u64(blob, params.config.embed_width);
    put_u64(blob, params.config.head1_width);
    put_u64(blob, params.config.head2_width);
    put_u64(blob, params.config.output_dim);
    put_u32(blob, static_cast<std::uint32_t>(params.tensors.size()));
    for (const Tensor& t : params.tensors) {
        put_u32(blob, static_cast<std::uint32_t>(t.name.size()));
        blob.append(t.name);
        put_u64(blob, t.rows);
        put_u64(blob, t.cols);
        blob.append(reinterpret_cast<const char*>(t.data.data()), t.data.size() * sizeof(double));
    }
    atomic_write_text(path, blob);
}

NetworkParams read_checkpoint(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open: " + path);
    char magic[8];
    in.read(magic, 8);
    if (!in || std::memcmp(magic, kCheckpointMagic, 8) != 0)
        throw std::runtime_error(path + ": not a checkpoint file");
    const std::uint32_t version = get_u32(in);
    if (version != 1) throw std::runtime_error(path + ": schema-version mismatch for checkpoint");
    const std::uint64_t arch_hash = get_u64(in);

    NetworkConfig cfg;
    cfg.feature_dim = get_u64(in);
    cfg.ec1_width = get_u64(in);
    cfg.ec2_width = get_u64(in);
    cfg.embed_width = get_u64(in);
    cfg.head1_width = get_u64(in);
    cfg.head2_width = get_u64(in);
    cfg.output_dim = get_u64(in);
    const std::string arch = cfg.architecture_id();
    if (fnv1a64(arch.data(), arch.size()) != arch_hash)
        throw std::runtime_error(path + ": architecture hash mismatch");

    NetworkParams params;
    params.config = cfg;
    const std::uint32_t count = get_u32(in);
    for (std::uint32_t i = 0; i < count; ++i) {
        const std::uint32_t name_len = get_u32(in);
        std::string name(name_len, '\0');
        in.read(name.data(), name_len);
        const std::uint64_t rows = get_u64(in);
        const std::uint64_t cols = get_u64(in);
        Tensor t(name, rows, cols);
        in.read(reinterpret_cast<char*>(t.data.data()),
                static_cast<std::streamsize>(t.data.size() * sizeof(double)));
        if (!in) throw std::runtime_error(path + ": truncated checkpoint");
        params.tensors.push_back(std::move(t));
    }
    return params;
}

// ---- workbench configuration ------------------------------------------------------------

WorkbenchConfig default_workbench_config() {
    WorkbenchConfig cfg;
    cfg.radar.mount.x = cfg.dataset.room.center_x();
    cfg.radar.mount.y = cfg.dataset.room.center_y();
    cfg.radar.mount.height_m = 3.0;
    cfg.radar.mount.scatter_ref_height_m = 0.88;  // calibrated to torso-weighted scatter heights
    return cfg;
}

namespace {

void apply_lis(const json& j, LisSettings& lis) {
    reject_unknown_keys(j,
                        {"rows", "cols", "kernel_rows", "kernel_cols", "kernel_distance_m",
                         "kernel_distance_sweep", "snr_db", "diffuse_amplitude", "scatter_z"},
                        "lis");
    if (j.contains("rows")) lis.rows = j.at("rows").get<std::size_t>();
    if (j.contains("cols")) lis.cols = j.at("cols").get<std::size_t>();
    if (j.contains("kernel_rows")) lis.kernel_rows = j.at("kernel_rows").get<std::size_t>();
    if (j.contains("kernel_cols")) lis.kernel_cols = j.at("kernel_cols").get<std::size_t>();
    if (j.contains("kernel_distance_m")) lis.kernel_distance_m = j.at("kernel_distance_m").get<double>();
    if (j.contains("kernel_distance_sweep"))
        lis.kernel_distance_sweep = j.at("kernel_distance_sweep").get<std::vector<double>>();
    if (j.contains("snr_db")) lis.snr_db = j.at("snr_db").get<double>();
    if (j.contains("diffuse_amplitude")) lis.diffuse_amplitude = j.at("diffuse_amplitude").get<double>();
    if (j.contains("scatter_z")) lis.scatter_z = j.at("scatter_z").get<std::vector<double>>();
}

void apply_radar(const json& j, RadarSettings& radar) {
    reject_unknown_keys(j, {"chirp", "cfar", "mount"}, "radar");
    if (j.contains("chirp")) {
        const json& c = j.at("chirp");
        reject_unknown_keys(c,
                            {"carrier_f_hz", "bandwidth_hz", "chirp_duration_s", "samples_per_chirp",
                             "chirps_per_frame", "rx_count", "frame_rate_hz", "fov_deg",
                             "noise_variance", "angle_fft_size"},
                            "radar.chirp");
        if (c.contains("carrier_f_hz")) radar.chirp.carrier_f_hz = c.at("carrier_f_hz").get<double>();
        if (c.contains("bandwidth_hz")) radar.chirp.bandwidth_hz = c.at("bandwidth_hz").get<double>();
        if (c.contains("chirp_duration_s"))
            radar.chirp.chirp_duration_s = c.at("chirp_duration_s").get<double>();
        if (c.contains("samples_per_chirp"))
            radar.chirp.samples_per_chirp = c.at("samples_per_chirp").get<std::size_t>();
        if (c.contains("chirps_per_frame"))
            radar.chirp.chirps_per_frame = c.at("chirps_per_frame").get<std::size_t>();
        if (c.contains("rx_count")) radar.chirp.rx_count = c.at("rx_count").get<std::size_t>();
        if (c.contains("frame_rate_hz")) radar.chirp.frame_rate_hz = c.at("frame_rate_hz").get<double>();
        if (c.contains("fov_deg")) radar.chirp.fov_deg = c.at("fov_deg").get<double>();
        if (c.contains("noise_variance")) radar.chirp.noise_variance = c.at("noise_variance").get<double>();
        if (c.contains("angle_fft_size"))
            radar.chirp.angle_fft_size = c.at("angle_fft_size").get<std::size_t>();
    }
    if (j.contains("cfar")) {
        const json& c = j.at("cfar");
        reject_unknown_keys(c, {"guard", "train", "pfa", "peak_grouping"}, "radar.cfar");
        if (c.contains("guard")) radar.cfar.guard = c.at("guard").get<int>();
        if (c.contains("train")) radar.cfar.train = c.at("train").get<int>();
        if (c.contains("pfa")) radar.cfar.pfa = c.at("pfa").get<double>();
        if (c.contains("peak_grouping")) radar.cfar.peak_grouping = c.at("peak_grouping").get<bool>();
    }
    if (j.contains("mount")) {
        const json& m = j.at("mount");
        reject_unknown_keys(m, {"x", "y", "height_m", "scatter_ref_height_m"}, "radar.mount");
        if (m.contains("x")) radar.mount.x = m.at("x").get<double>();
        if (m.contains("y")) radar.mount.y = m.at("y").get<double>();
        if (m.contains("height_m")) radar.mount.height_m = m.at("height_m").get<double>();
        if (m.contains("scatter_ref_height_m"))
            radar.mount.scatter_ref_height_m = m.at("scatter_ref_height_m").get<double>();
    }
}

void apply_train(const json& j, TrainSettings& t) {
    reject_unknown_keys(j,
                        {"initial_lr", "drop_rate", "drop_every", "patience", "batch_size",
                         "max_epochs", "seed", "k_neighbors", "ec1_width", "ec2_width", "embed_width",
                         "head1_width", "head2_width"},
                        "train");
    if (j.contains("initial_lr")) t.train.initial_lr = j.at("initial_lr").get<double>();
    if (j.contains("drop_rate")) t.train.drop_rate = j.at("drop_rate").get<double>();
    if (j.contains("drop_every")) t.train.drop_every = j.at("drop_every").get<int>();
    if (j.contains("patience")) t.train.patience = j.at("patience").get<int>();
    if (j.contains("batch_size")) t.train.batch_size = j.at("batch_size").get<int>();
    if (j.contains("max_epochs")) t.train.max_epochs = j.at("max_epochs").get<int>();
    if (j.contains("seed")) t.train.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("k_neighbors")) t.k_neighbors = j.at("k_neighbors").get<int>();
    if (j.contains("ec1_width")) t.net.ec1_width = j.at("ec1_width").get<std::size_t>();
    if (j.contains("ec2_width")) t.net.ec2_width = j.at("ec2_width").get<std::size_t>();
    if (j.contains("embed_width")) t.net.embed_width = j.at("embed_width").get<std::size_t>();
    if (j.contains("head1_width")) t.net.head1_width = j.at("head1_width").get<std::size_t>();
    if (j.contains("head2_width")) t.net.head2_width = j.at("head2_width").get<std::size_t>();
}

} // namespace

WorkbenchConfig load_workbench_config(const std::string& path) {
    std::ifstream in = open_input(path);
    json j = json::parse(in, nullptr, false);
    if (j.is_discarded()) throw std::runtime_error(path + ": malformed config JSON");
    reject_unknown_keys(j, {"dataset", "lis", "radar", "train", "split"}, "config root");

    WorkbenchConfig cfg;  // defaults, then dataset, then mount follows the room
    if (j.contains("dataset")) cfg.dataset = dataset_config_from_json(j.at("dataset"), cfg.dataset);
    cfg.radar.mount.x = cfg.dataset.room.center_x();
    cfg.radar.mount.y = cfg.dataset.room.center_y();
    cfg.radar.mount.scatter_ref_height_m = 0.88;
    if (j.contains("lis")) apply_lis(j.at("lis"), cfg.lis);
    if (j.contains("radar")) apply_radar(j.at("radar"), cfg.radar);
    if (j.contains("train")) apply_train(j.at("train"), cfg.train);
    if (j.contains("split")) {
        const json& s = j.at("split");
        reject_unknown_keys(s, {"train", "val", "test"}, "split");
        if (s.contains("train")) cfg.split_train = s.at("train").get<double>();
        if (s.contains("val")) cfg.split_val = s.at("val").get<double>();
        if (s.contains("test")) cfg.split_test = s.at("test").get<double>();
    }
    cfg.dataset.validate();
    return cfg;
}

void save_workbench_config(const std::string& path, const WorkbenchConfig& cfg) {
    json j{{"dataset", dataset_config_to_json(cfg.dataset)},
           {"lis",
            {{"rows", cfg.lis.rows},
             {"cols", cfg.lis.cols},
             {"kernel_rows", cfg.lis.kernel_rows},
             {"kernel_cols", cfg.lis.kernel_cols},
             {"kernel_distance_m", cfg.lis.kernel_distance_m},
             {"kernel_distance_sweep", cfg.lis.kernel_distance_sweep},
             {"diffuse_amplitude", cfg.lis.diffuse_amplitude},
             {"scatter_z", cfg.lis.scatter_z}}},
           {"radar",
            {{"chirp",
              {{"carrier_f_hz", cfg.radar.chirp.carrier_f_hz},
               {"bandwidth_hz", cfg.radar.chirp.bandwidth_hz},
               {"chirp_duration_s", cfg.radar.chirp.chirp_duration_s},
               {"samples_per_chirp", cfg.radar.chirp.samples_per_chirp},
               {"chirps_per_frame", cfg.radar.chirp.chirps_per_frame},
               {"rx_count", cfg.radar.chirp.rx_count},
               {"frame_rate_hz", cfg.radar.chirp.frame_rate_hz},
               {"fov_deg", cfg.radar.chirp.fov_deg},
               {"noise_variance", cfg.radar.chirp.noise_variance},
               {"angle_fft_size", cfg.radar.chirp.angle_fft_size}}},
             {"cfar",
              {{"guard", cfg.radar.cfar.guard},
               {"train", cfg.radar.cfar.train},
               {"pfa", cfg.radar.cfar.pfa},
               {"peak_grouping", cfg.radar.cfar.peak_grouping}}},
             {"mount",
              {{"x", cfg.radar.mount.x},
               {"y", cfg.radar.mount.y},
               {"height_m", cfg.radar.mount.height_m},
               {"scatter_ref_height_m", cfg.radar.mount.scatter_ref_height_m}}}}},
           {"train",
            {{"initial_lr", cfg.train.train.initial_lr},
             {"drop_rate", cfg.train.train.drop_rate},
             {"drop_every", cfg.train.train.drop_every},
             {"patience", cfg.train.train.patience},
             {"batch_size", cfg.train.train.batch_size},
             {"max_epochs", cfg.train.train.max_epochs},
             {"seed", cfg.train.train.seed},
             {"k_neighbors", cfg.train.k_neighbors},
             {"ec1_width", cfg.train.net.ec1_width},
             {"ec2_width", cfg.train.net.ec2_width},
             {"embed_width", cfg.train.net.embed_width},
             {"head1_width", cfg.train.net.head1_width},
             {"head2_width", cfg.train.net.head2_width}}},
           {"split", {{"train", cfg.split_train}, {"val", cfg.split_val}, {"test", cfg.split_test}}}};
    if (!std::isnan(cfg.lis.snr_db)) j["lis"]["snr_db"] = cfg.lis.snr_db;
    atomic_write_text(path, j.dump(2) + "\n");
}

} // namespace rflocate
