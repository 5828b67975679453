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
//
// Batch front end: gen -> lis/radar -> train -> eval -> compare. Every stage
// reads files written by its predecessor and is reproducible bit-for-bit
// under a fixed seed.

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <map>
#include <unordered_map>
#include <unordered_set>

#include <json.hpp>

#include "rflocate/eval.hpp"
#include "rflocate/io.hpp"
#include "rflocate/lis_channel.hpp"
#include "rflocate/lis_radiomap.hpp"
#include "rflocate/pointnet.hpp"
#include "rflocate/radar_dsp.hpp"
#include "rflocate/scene.hpp"

namespace fs = std::filesystem;
using namespace rflocate;

namespace {

struct CommonOpts {
    std::string config_path;
    std::string out_dir = ".";
    std::uint64_t seed = 1;
    bool seed_given = false;
    int verbosity = 0;
};

WorkbenchConfig load_config_or_default(const CommonOpts& opts) {
    if (opts.config_path.empty()) return default_workbench_config();
    return load_workbench_config(opts.config_path);
}

void ensure_out_dir(const CommonOpts& opts) {
    if (!opts.out_dir.empty()) fs::create_directories(opts.out_dir);
}

std::string out_path(const CommonOpts& opts, const std::string& name) {
    return (fs::path(opts.out_dir) / name).string();
}

void report_file(const std::string& path) {
    std::cout << "wrote " << path << " (fnv64 " << file_hash_hex(path) << ")\n";
}

std::vector<std::uint64_t> manifest_ids(const Manifest& m) {
    std::vector<std::uint64_t> ids;
    ids.reserve(m.records.size());
    for (const SampleRecord& r : m.records) ids.push_back(r.id);
    return ids;
}

// Split seeded by the manifest's master seed so every stage sees the same
// train/val/test partition without extra coordination.
SplitIds manifest_split(const Manifest& m, const WorkbenchConfig& cfg) {
    return split_dataset(manifest_ids(m), cfg.split_train, cfg.split_val, cfg.split_test, m.master_seed);
}

std::unordered_set<std::uint64_t> pick_split(const Manifest& m, const WorkbenchConfig& cfg,
                                             const std::string& which) {
    std::unordered_set<std::uint64_t> out;
    if (which == "all") {
        for (const SampleRecord& r : m.records) out.insert(r.id);
        return out;
    }
    const SplitIds split = manifest_split(m, cfg);
    const std::vector<std::uint64_t>* sel = nullptr;
    if (which == "train") sel = &split.train;
    else if (which == "val") sel = &split.val;
    else if (which == "test") sel = &split.test;
    else throw std::invalid_argument("unknown split: " + which);
    out.insert(sel->begin(), sel->end());
    return out;
}

// ---- gen ---------------------------------------------------------------------

int cmd_gen(const CommonOpts& opts, std::size_t size_override, const std::string& pipeline_override) {
    WorkbenchConfig cfg = load_config_or_default(opts);
    if (size_override > 0) cfg.dataset.size = size_override;
    if (!pipeline_override.empty()) cfg.dataset.pipeline = pipeline_override;
    cfg.dataset.validate();
    ensure_out_dir(opts);

    Manifest manifest;
    manifest.config = cfg.dataset;
    manifest.master_seed = opts.seed;
    manifest.records = build_dataset(cfg.dataset, opts.seed);

    const std::string path = out_path(opts, "manifest.jsonl");
    write_manifest(path, manifest);
    std::cout << "generated " << manifest.records.size() << " " << cfg.dataset.pipeline << " samples\n";
    report_file(path);
    return 0;
}

// ---- lis ---------------------------------------------------------------------

int cmd_lis(const CommonOpts& opts, const std::string& manifest_path, double snr_db, bool snr_given,
            bool export_maps, const std::string& map_kind, const std::string& split) {
    WorkbenchConfig cfg = load_config_or_default(opts);
    if (snr_given) cfg.lis.snr_db = snr_db;
    const Manifest manifest = read_manifest(manifest_path);
    if (manifest.config.pipeline != "lis")
        throw std::runtime_error("cmd lis: manifest holds a " + manifest.config.pipeline + " dataset");
    ensure_out_dir(opts);

    const Room& room = manifest.config.room;
    const DeviceSet device_defaults;  // 20 dBm at 3.5 GHz
    const LisConfig lis = LisConfig::for_room(room, cfg.lis.rows, cfg.lis.cols, device_defaults.carrier_f_hz);

    std::vector<double> kernel_distances{cfg.lis.kernel_distance_m};
    for (double d : cfg.lis.kernel_distance_sweep) kernel_distances.push_back(d);
    std::vector<MatchedFilter> filters;
    for (double d : kernel_distances)
        filters.emplace_back(
            steering_kernel(lis.carrier_f_hz, d, cfg.lis.kernel_rows, cfg.lis.kernel_cols, lis.spacing_m),
            lis.rows, lis.cols);

    const auto selected = pick_split(manifest, cfg, split);
    const bool noiseless = std::isnan(cfg.lis.snr_db);

    std::vector<Prediction> predictions;
    std::vector<LabeledBox> gt;
    if (export_maps) fs::create_directories(out_path(opts, "maps"));

    for (const SampleRecord& rec : manifest.records) {
        if (!selected.count(rec.id)) continue;

        RayScene with_target;
        with_target.room = room;
        TargetBox box = manifest.config.target_template;
        box.center_x = rec.center_x;
        box.center_y = rec.center_y;
        with_target.target = box;
        with_target.target_diffuse_amplitude = cfg.lis.diffuse_amplitude;
        with_target.target_scatter_z = cfg.lis.scatter_z;
        RayScene empty = with_target;
        empty.target.reset();

        DeviceSet devices = device_defaults;
        devices.count = static_cast<int>(rec.devices.size());
        devices.positions = rec.devices;

        const FieldGrid field_with = field_at_elements(with_target, devices, lis);
        const FieldGrid field_empty = field_at_elements(empty, devices, lis);

        double sigma2 = 0.0;
        if (!noiseless) sigma2 = sigma_for_target_snr(field_with, db_to_linear(cfg.lis.snr_db), lis);
        Rng noise_rng(derive_seed(rec.seed, SeedStream::lis_noise));
        const ComplexGrid y = received_signal(field_with, sigma2, noise_rng, lis);
        // The reference map is the noiseless long-term average of the empty
        // room with the same deployment.
        const ComplexGrid y_ref = received_signal(field_empty, 0.0, noise_rng, lis);

        Peak best_peak;
        RadioMap best_map;
        double best_value = -1.0;
        for (const MatchedFilter& mf : filters) {
            const RadioMap map_with = radio_map(mf.apply(y));
            const RadioMap map_ref = radio_map(mf.apply(y_ref));
            const RadioMap sub = background_subtract(map_with, map_ref);
            const RadioMap& chosen = map_kind == "raw" ? map_with : sub;
            const Peak peak =
                peak_position(sub, lis.spacing_m, mf.kernel_half_rows(), mf.kernel_half_cols());
            if (peak.value > best_value) {
                best_value = peak.value;
                best_peak = peak;
                best_map = chosen;
            }
        }

        Prediction pred;
        pred.id = rec.id;
        pred.near_border = best_peak.near_border;
        const double cx = lis.origin_x + best_peak.x;
        const double cy = lis.origin_y + best_peak.y;
        pred.box = box_from_center(cx, cy, manifest.config.label_length, manifest.config.label_width);
        predictions.push_back(pred);
        gt.push_back({rec.id, rec.gt_box});

        if (export_maps) {
            const std::string stem = out_path(opts, "maps/sample_" + std::to_string(rec.id));
            write_real_grid(stem + ".bin", best_map);
            write_pgm(stem + ".pgm", best_map);
            nlohmann::json meta{{"rows", best_map.rows()},     {"cols", best_map.cols()},
                                {"spacing_m", lis.spacing_m},  {"f_hz", lis.carrier_f_hz},
                                {"kind", map_kind},            {"sample", rec.id},
                                {"origin_x", lis.origin_x},    {"origin_y", lis.origin_y}};
            atomic_write_text(stem + ".json", meta.dump(2) + "\n");
        }
    }

    MetricReport report = evaluate(
        [&] {
            std::vector<LabeledBox> pred_boxes;
            for (const Prediction& p : predictions) pred_boxes.push_back({p.id, p.box});
            return pred_boxes;
        }(),
        gt);
    report.pipeline = "lis";
    report.dataset_hash = file_hash_hex(manifest_path);

    const std::string pred_path = out_path(opts, "lis_predictions.jsonl");
    const std::string report_path = out_path(opts, "lis_report.json");
    const std::string csv_path = out_path(opts, "lis_report.csv");
    write_predictions(pred_path, "lis", predictions);
    write_report(report_path, report);
    write_metrics_csv(csv_path, report);
    std::cout << "lis samples: " << report.count << "  mean IoU: " << report.mean_iou
              << "  mean center error [m]: " << report.mean_center_distance_m << "\n";
    report_file(pred_path);
    report_file(report_path);
    report_file(csv_path);
    return 0;
}

// ---- radar --------------------------------------------------------------------

int cmd_radar(const CommonOpts& opts, const std::string& manifest_path) {
    WorkbenchConfig cfg = load_config_or_default(opts);
    const Manifest manifest = read_manifest(manifest_path);
    if (manifest.config.pipeline != "radar")
        throw std::runtime_error("cmd radar: manifest holds a " + manifest.config.pipeline + " dataset");
    ensure_out_dir(opts);

    cfg.radar.mount.x = manifest.config.room.center_x();
    cfg.radar.mount.y = manifest.config.room.center_y();

    // Frames needed per trajectory: everything up to the last labeled frame.
    std::map<std::uint64_t, std::pair<std::uint64_t, std::uint64_t>> traj_info;  // traj -> (seed, max frame)
    for (const SampleRecord& r : manifest.records) {
        auto [it, inserted] = traj_info.try_emplace(r.trajectory, std::make_pair(r.seed, r.frame));
        if (!inserted) it->second.second = std::max(it->second.second, r.frame);
    }

    std::vector<FrameRecord> frames;
    for (const auto& [traj, info] : traj_info) {
        const auto& [traj_seed, max_frame] = info;
        const auto poses = trajectory_for_record(manifest.config, traj_seed);
        if (max_frame >= poses.size()) throw std::runtime_error("cmd radar: manifest frame out of range");
        for (std::uint64_t f = 0; f <= max_frame; ++f) {
            const TrajectoryPose& pose = poses[f];
            TargetBox box = manifest.config.target_template;
            box.center_x = pose.x;
            box.center_y = pose.y;
            Rng scatter_rng(derive_seed(traj_seed, SeedStream::radar_scatterers, f));
            const auto scatterers =
                render_target_scatterers(box, pose.vx, pose.vy, cfg.radar.mount, scatter_rng);
            Rng noise_rng(derive_seed(traj_seed, SeedStream::radar_noise, f));
            const RadarCube cube = synthesize_frame(scatterers, cfg.radar.chirp, noise_rng, pose.t);
            FrameRecord fr;
            fr.trajectory = traj;
            fr.frame = f;
            fr.cloud = process_frame(cube, cfg.radar.chirp, cfg.radar.cfar, cfg.radar.mount);
            frames.push_back(std::move(fr));
        }
    }

    const std::string path = out_path(opts, "clouds.jsonl");
    write_cloud_stream(path, frames);
    std::size_t points = 0;
    for (const FrameRecord& f : frames) points += f.cloud.points.size();
    std::cout << "radar frames: " << frames.size() << "  points: " << points << "  ("
              << (frames.empty() ? 0.0 : static_cast<double>(points) / static_cast<double>(frames.size()))
              << " per frame)\n";
    report_file(path);
    return 0;
}

// ---- cloud assembly shared by train/eval ----------------------------------------

struct AssembledSample {
    std::uint64_t id = 0;
    Graph graph;
    std::array<double, 4> target{};
};

std::vector<AssembledSample> assemble_radar_samples(const Manifest& manifest,
                                                    const std::vector<FrameRecord>& frames, int window,
                                                    int k, std::size_t* skipped) {
    std::map<std::uint64_t, std::map<std::uint64_t, const PointCloud*>> by_traj;
    for (const FrameRecord& f : frames) by_traj[f.trajectory][f.frame] = &f.cloud;

    std::vector<AssembledSample> out;
    out.reserve(manifest.records.size());
    if (skipped) *skipped = 0;
    for (const SampleRecord& rec : manifest.records) {
        const auto traj_it = by_traj.find(rec.trajectory);
        if (traj_it == by_traj.end()) throw std::runtime_error("clouds missing trajectory");
        std::vector<PointCloud> history;
        const std::uint64_t first =
            rec.frame + 1 >= static_cast<std::uint64_t>(window) ? rec.frame + 1 - window : 0;
        for (std::uint64_t f = first; f <= rec.frame; ++f) {
            const auto fit = traj_it->second.find(f);
            if (fit == traj_it->second.end()) throw std::runtime_error("clouds missing frame");
            history.push_back(*fit->second);
        }
        const auto merged = time_decay(history, window);
        if (merged.empty()) {
            if (skipped) ++*skipped;
            continue;
        }
        AssembledSample s;
        s.id = rec.id;
        s.graph = cloud_to_graph(merged, k);
        s.target = {rec.gt_box.center_x(), rec.gt_box.center_y(), rec.gt_box.width(),
                    rec.gt_box.height()};
        out.push_back(std::move(s));
    }
    return out;
}

// ---- train --------------------------------------------------------------------

int cmd_train(const CommonOpts& opts, const std::string& manifest_path, const std::string& clouds_path,
              int window_override, int k_override) {
    WorkbenchConfig cfg = load_config_or_default(opts);
    if (opts.seed_given) cfg.train.train.seed = opts.seed;
    const Manifest manifest = read_manifest(manifest_path);
    const auto frames = read_cloud_stream(clouds_path);
    ensure_out_dir(opts);

    const int window = window_override > 0 ? window_override : manifest.config.time_window;
    const int k = k_override > 0 ? k_override : cfg.train.k_neighbors;

    std::size_t skipped = 0;
    const auto samples = assemble_radar_samples(manifest, frames, window, k, &skipped);
    if (skipped > 0) std::cout << "skipped " << skipped << " samples with empty clouds\n";

    std::unordered_map<std::uint64_t, const AssembledSample*> by_id;
    for (const AssembledSample& s : samples) by_id.emplace(s.id, &s);
    const SplitIds split = manifest_split(manifest, cfg);
    const auto collect = [&](const std::vector<std::uint64_t>& ids) {
        std::vector<TrainSample> set;
        set.reserve(ids.size());
        for (std::uint64_t id : ids) {
            const auto it = by_id.find(id);
            if (it != by_id.end()) set.push_back({it->second->graph, it->second->target});
        }
        return set;
    };
    const auto train_set = collect(split.train);
    const auto val_set = collect(split.val);
    std::cout << "training on " << train_set.size() << " samples, validating on " << val_set.size()
              << "\n";

    const TrainResult result = train(train_set, val_set, cfg.train.net, cfg.train.train);
    std::cout << "best epoch " << result.best_epoch << "  val MSE " << result.best_val_mse << "\n";

    const std::string ckpt_path = out_path(opts, "checkpoint.bin");
    const std::string hist_path = out_path(opts, "history.jsonl");
    write_checkpoint(ckpt_path, result.params);
    write_history(hist_path, result.history);
    report_file(ckpt_path);
    report_file(hist_path);
    return 0;
}

// ---- eval ---------------------------------------------------------------------

int cmd_eval(const CommonOpts& opts, const std::string& manifest_path, const std::string& pred_path,
             const std::string& ckpt_path, const std::string& clouds_path, const std::string& split,
             int window_override, int k_override) {
    WorkbenchConfig cfg = load_config_or_default(opts);
    const Manifest manifest = read_manifest(manifest_path);
    ensure_out_dir(opts);

    std::unordered_map<std::uint64_t, const SampleRecord*> by_id;
    for (const SampleRecord& r : manifest.records) by_id.emplace(r.id, &r);

    std::string pipeline = manifest.config.pipeline;
    std::vector<Prediction> predictions;
    if (!pred_path.empty()) {
        predictions = read_predictions(pred_path, &pipeline);
        if (pipeline.empty()) pipeline = manifest.config.pipeline;
    } else {
        if (ckpt_path.empty() || clouds_path.empty())
            throw std::runtime_error("cmd eval: need --pred, or --checkpoint with --clouds");
        const NetworkParams params = read_checkpoint(ckpt_path);
        const auto frames = read_cloud_stream(clouds_path);
        const int window = window_override > 0 ? window_override : manifest.config.time_window;
        const int k = k_override > 0 ? k_override : cfg.train.k_neighbors;
        const auto samples = assemble_radar_samples(manifest, frames, window, k, nullptr);
        const auto selected = pick_split(manifest, cfg, split);
        for (const AssembledSample& s : samples) {
            if (!selected.count(s.id)) continue;
            const auto out = network_forward(s.graph, params);
            Prediction p;
            p.id = s.id;
            // Predicted extents floored at 1 cm so the box stays valid.
            p.box = box_from_center(out[0], out[1], std::max(out[2], 0.01), std::max(out[3], 0.01));
            predictions.push_back(p);
        }
    }

    std::vector<LabeledBox> pred_boxes, gt_boxes;
    for (const Prediction& p : predictions) {
        const auto it = by_id.find(p.id);
        if (it == by_id.end())
            throw std::runtime_error("cmd eval: prediction id not in manifest: " + std::to_string(p.id));
        pred_boxes.push_back({p.id, p.box});
        gt_boxes.push_back({p.id, it->second->gt_box});
    }
    MetricReport report = evaluate(pred_boxes, gt_boxes);
    report.pipeline = pipeline;
    report.dataset_hash = file_hash_hex(manifest_path);

    const std::string out_pred = out_path(opts, pipeline + "_predictions.jsonl");
    const std::string out_report = out_path(opts, pipeline + "_report.json");
    const std::string out_csv = out_path(opts, pipeline + "_report.csv");
    if (pred_path.empty()) write_predictions(out_pred, pipeline, predictions);
    write_report(out_report, report);
    write_metrics_csv(out_csv, report);
    std::cout << pipeline << " samples: " << report.count << "  mean IoU: " << report.mean_iou
              << "  mean center error [m]: " << report.mean_center_distance_m << "\n";
    if (pred_path.empty()) report_file(out_pred);
    report_file(out_report);
    report_file(out_csv);
    return 0;
}

// ---- compare -------------------------------------------------------------------

int cmd_compare(const CommonOpts& opts, const std::string& lis_path, const std::string& radar_path) {
    ensure_out_dir(opts);
    const MetricReport lis = read_report(lis_path);
    const MetricReport radar = read_report(radar_path);
    const ComparisonReport cmp = compare_report(lis, radar);
    const std::string json_path = out_path(opts, "comparison.json");
    const std::string table_path = out_path(opts, "comparison.txt");
    write_comparison(json_path, table_path, cmp);
    std::cout << render_comparison_table(cmp);
    report_file(json_path);
    report_file(table_path);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"rf-locate: LIS radio-map and FMCW radar localization workbench"};
    app.require_subcommand(1);

    CommonOpts opts;
    std::string manifest_path, clouds_path, pred_path, ckpt_path, lis_report_path, radar_report_path;
    std::string pipeline_override, split = "test", map_kind = "sub";
    std::size_t size_override = 0;
    double snr_db = 0.0;
    bool export_maps = false;
    int window_override = 0, k_override = 0;

    const auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--config", opts.config_path, "workbench config JSON");
        cmd->add_option("--out", opts.out_dir, "output directory");
        cmd->add_option("--seed", opts.seed, "master seed")->each([&](const std::string&) {
            opts.seed_given = true;
        });
        cmd->add_flag("-v,--verbose", opts.verbosity, "more logging");
    };

    CLI::App* gen = app.add_subcommand("gen", "generate a dataset manifest");
    add_common(gen);
    gen->add_option("--size", size_override, "number of samples");
    gen->add_option("--pipeline", pipeline_override, "lis or radar")
        ->check(CLI::IsMember({"lis", "radar"}));

    CLI::App* lis = app.add_subcommand("lis", "radio maps, peak predictions and report");
    add_common(lis);
    lis->add_option("--manifest", manifest_path, "dataset manifest")->required();
    CLI::Option* snr_opt = lis->add_option("--snr-db", snr_db, "average SNR; omit for noiseless");
    lis->add_flag("--export-maps", export_maps, "write per-sample radio maps");
    lis->add_option("--map-kind", map_kind, "exported map kind")->check(CLI::IsMember({"raw", "sub"}));
    lis->add_option("--split", split, "train|val|test|all")
        ->check(CLI::IsMember({"train", "val", "test", "all"}));

    CLI::App* radar = app.add_subcommand("radar", "synthesize frames and emit point clouds");
    add_common(radar);
    radar->add_option("--manifest", manifest_path, "dataset manifest")->required();

    CLI::App* train_cmd = app.add_subcommand("train", "train the box regressor on point clouds");
    add_common(train_cmd);
    train_cmd->add_option("--manifest", manifest_path, "dataset manifest")->required();
    train_cmd->add_option("--clouds", clouds_path, "point-cloud stream")->required();
    train_cmd->add_option("--window", window_override, "time-decay window");
    train_cmd->add_option("--k", k_override, "kNN neighbor count");

    CLI::App* eval_cmd = app.add_subcommand("eval", "evaluate predictions or a checkpoint");
    add_common(eval_cmd);
    eval_cmd->add_option("--manifest", manifest_path, "dataset manifest")->required();
    eval_cmd->add_option("--pred", pred_path, "predictions file to score");
    eval_cmd->add_option("--checkpoint", ckpt_path, "trained checkpoint");
    eval_cmd->add_option("--clouds", clouds_path, "point-cloud stream");
    eval_cmd->add_option("--split", split, "train|val|test|all")
        ->check(CLI::IsMember({"train", "val", "test", "all"}));
    eval_cmd->add_option("--window", window_override, "time-decay window");
    eval_cmd->add_option("--k", k_override, "kNN neighbor count");

    CLI::App* compare = app.add_subcommand("compare", "side-by-side pipeline comparison");
    add_common(compare);
    compare->add_option("--lis", lis_report_path, "LIS report JSON")->required();
    compare->add_option("--radar", radar_report_path, "radar report JSON")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed()) return cmd_gen(opts, size_override, pipeline_override);
        if (lis->parsed())
            return cmd_lis(opts, manifest_path, snr_db, snr_opt->count() > 0, export_maps, map_kind, split);
        if (radar->parsed()) return cmd_radar(opts, manifest_path);
        if (train_cmd->parsed())
            return cmd_train(opts, manifest_path, clouds_path, window_override, k_override);
        if (eval_cmd->parsed())
            return cmd_eval(opts, manifest_path, pred_path, ckpt_path, clouds_path, split,
                            window_override, k_override);
        if (compare->parsed()) return cmd_compare(opts, lis_report_path, radar_report_path);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
