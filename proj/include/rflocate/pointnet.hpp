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

#ifndef RFLOCATE_POINTNET_HPP
#define RFLOCATE_POINTNET_HPP

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "rflocate/radar_dsp.hpp"

namespace rflocate {

// Point from a past frame; age counts frames back from the newest.
struct AgedPoint {
    RadarPoint point;
    int age = 0;
};

// Concatenation of the last `window` frames of the history, oldest first.
// An empty history yields an empty cloud.
std::vector<AgedPoint> time_decay(const std::vector<PointCloud>& history, int window = 5);

// Directed kNN graph over (x, y) positions. Each node gets min(k, n-1)
// out-neighbors, distance ties broken by point index; no self-loops.
struct Graph {
    std::size_t n = 0;
    std::size_t feature_dim = 4;
    std::vector<double> features;                       // n x feature_dim, row-major
    std::vector<std::vector<std::uint32_t>> neighbors;  // sorted by (distance, index)
};

Graph knn_graph(const std::vector<RadarPoint>& points, int k = 8);

// Features are (x, y, radial velocity, log10(1 + intensity)); the log keeps
// the power feature on the scale of the geometric ones.
Graph cloud_to_graph(const std::vector<AgedPoint>& merged, int k = 8);

struct Tensor {
    std::string name;
    std::size_t rows = 0;
    std::size_t cols = 1;
    std::vector<double> data;

    Tensor() = default;
    Tensor(std::string n, std::size_t r, std::size_t c)
        : name(std::move(n)), rows(r), cols(c), data(r * c, 0.0) {}
    std::size_t size() const { return data.size(); }
};

struct NetworkConfig {
    std::size_t feature_dim = 4;
    std::size_t ec1_width = 64;
    std::size_t ec2_width = 128;
    std::size_t embed_width = 1024;
    std::size_t head1_width = 512;
    std::size_t head2_width = 128;
    std::size_t output_dim = 4;

    std::string architecture_id() const;
};

// All learnable tensors in a fixed order:
//   two edge MLPs (each a two-layer perceptron), the per-node embedding
//   layer, and the three head layers.
struct NetworkParams {
    NetworkConfig config;
    std::vector<Tensor> tensors;

    static NetworkParams init(const NetworkConfig& cfg, std::uint64_t seed);
    static NetworkParams zeros_like(const NetworkParams& other);

    Tensor& get(const std::string& name);
    const Tensor& get(const std::string& name) const;
    std::size_t total_size() const;
    void fill(double v);
};

// Node update h_i = max over messages of mlp(concat(h_i, h_j - h_i)).
// The aggregation always includes a zero-difference self message, which
// doubles as the empty-neighborhood rule for isolated nodes and keeps the
// output invariant under point duplication.
// layer is 1 or 2; layer 2 consumes layer 1's output.
std::vector<double> edge_conv_forward(const Graph& graph, const NetworkParams& params, int layer);

// Full architecture: EdgeConv(F->64) -> EdgeConv(64->128) -> per-node
// concat(192) -> embedding MLP to 1024 -> channel max pool over nodes ->
// 1024 -> 512 -> 128 -> linear 4. Throws on an empty cloud.
struct ForwardTrace;  // opaque workspace reused across samples

std::array<double, 4> network_forward(const Graph& graph, const NetworkParams& params);

double mse_loss(const std::vector<double>& pred, const std::vector<double>& target);
double mse_loss(const std::array<double, 4>& pred, const std::array<double, 4>& target);

// Exact reverse-mode gradients of mse_loss(network_forward(graph), target)
// with respect to every tensor, accumulated into grads. Max-pool and max
// aggregation follow the argmax branch, ties to the lowest index. Returns
// the loss.
double loss_and_gradients(const Graph& graph, const NetworkParams& params,
                          const std::array<double, 4>& target, NetworkParams& grads);

// L_i * d_r^floor(epoch / e_r).
double step_decay_lr(double initial_lr, double drop_rate, int drop_every, int epoch);

struct AdamState {
    std::size_t step = 0;
    std::vector<Tensor> m;
    std::vector<Tensor> v;

    static AdamState for_params(const NetworkParams& params);
};

void adam_step(NetworkParams& params, const NetworkParams& grads, AdamState& state, double lr,
               double beta1 = 0.9, double beta2 = 0.999, double eps = 1e-8);

struct TrainSample {
    Graph graph;
    std::array<double, 4> target{};  // (x_c, y_c, L, W)
};

struct TrainConfig {
    double initial_lr = 0.001;
    double drop_rate = 0.5;
    int drop_every = 20;
    int patience = 100;
    int batch_size = 32;
    int max_epochs = 200;
    std::uint64_t seed = 1;
};

struct EpochStats {
    int epoch = 0;  // 0 is the pre-training evaluation
    double lr = 0.0;
    double train_mse = 0.0;
    double val_mse = 0.0;
};

struct TrainResult {
    NetworkParams params;  // best-validation checkpoint
    std::vector<EpochStats> history;
    int best_epoch = 0;
    double best_val_mse = 0.0;
};

// Mini-batch Adam with the step-decay schedule and early stopping: training
// halts once validation loss has not improved for `patience` epochs, and the
// minimum-validation checkpoint is returned. Per-sample gradients within a
// batch are averaged over fixed-size chunks so the reduction order (and the
// result) is independent of the worker count.
TrainResult train(const std::vector<TrainSample>& train_set, const std::vector<TrainSample>& val_set,
                  const NetworkConfig& net_cfg, const TrainConfig& cfg);

} // namespace rflocate

#endif
