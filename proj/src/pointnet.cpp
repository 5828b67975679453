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

#include "rflocate/pointnet.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "rflocate/parallel.hpp"
#include "rflocate/rng.hpp"

namespace rflocate {

std::vector<AgedPoint> time_decay(const std::vector<PointCloud>& history, int window) {
    if (window < 1) throw std::invalid_argument("time_decay: window must be >= 1");
    std::vector<AgedPoint> merged;
    if (history.empty()) return merged;
    const std::size_t take = std::min<std::size_t>(static_cast<std::size_t>(window), history.size());
    const std::size_t first = history.size() - take;
    for (std::size_t f = first; f < history.size(); ++f) {
        const int age = static_cast<int>(history.size() - 1 - f);
        for (const RadarPoint& p : history[f].points) merged.push_back({p, age});
    }
    return merged;
}

Graph knn_graph(const std::vector<RadarPoint>& points, int k) {
    if (points.empty()) throw std::invalid_argument("knn_graph: need at least one point");
    if (k < 1) throw std::invalid_argument("knn_graph: k must be >= 1");
    const std::size_t n = points.size();
    const std::size_t k_eff = std::min<std::size_t>(static_cast<std::size_t>(k), n - 1);

    Graph g;
    g.n = n;
    g.feature_dim = 4;
    g.features.resize(n * 4);
    for (std::size_t i = 0; i < n; ++i) {
        g.features[i * 4 + 0] = points[i].x;
        g.features[i * 4 + 1] = points[i].y;
        g.features[i * 4 + 2] = points[i].radial_velocity;
        g.features[i * 4 + 3] = points[i].intensity;
    }

    g.neighbors.assign(n, {});
    std::vector<std::pair<double, std::uint32_t>> cand;
    for (std::size_t i = 0; i < n; ++i) {
        cand.clear();
        cand.reserve(n - 1);
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            const double dx = points[i].x - points[j].x;
            const double dy = points[i].y - points[j].y;
            cand.emplace_back(dx * dx + dy * dy, static_cast<std::uint32_t>(j));
        }
        std::partial_sort(cand.begin(), cand.begin() + static_cast<std::ptrdiff_t>(k_eff), cand.end());
        g.neighbors[i].reserve(k_eff);
        for (std::size_t j = 0; j < k_eff; ++j) g.neighbors[i].push_back(cand[j].second);
    }
    return g;
}

Graph cloud_to_graph(const std::vector<AgedPoint>& merged, int k) {
    std::vector<RadarPoint> pts;
    pts.reserve(merged.size());
    for (const AgedPoint& a : merged) pts.push_back(a.point);
    Graph g = knn_graph(pts, k);
    for (std::size_t i = 0; i < g.n; ++i)
        g.features[i * 4 + 3] = std::log10(1.0 + std::max(0.0, g.features[i * 4 + 3]));
    return g;
}

std::string NetworkConfig::architecture_id() const {
    return "edgeconv:" + std::to_string(feature_dim) + "-" + std::to_string(ec1_width) + "-" +
           std::to_string(ec2_width) + ":embed" + std::to_string(embed_width) + ":head" +
           std::to_string(head1_width) + "-" + std::to_string(head2_width) + "-" +
           std::to_string(output_dim);
}

namespace {

// ---- dense layer kernels on flat row-major storage -------------------------

// Fixed-stride four-lane dot product. The lane split is part of the function
// contract: results are identical on every run and build, and the four
// independent chains keep the FPU pipeline full without -ffast-math.
double dot_striped(const double* a, const double* b, std::size_t n) {
    double acc[8] = {0, 0, 0, 0, 0, 0, 0, 0};
    std::size_t k = 0;
    for (; k + 8 <= n; k += 8)
        for (std::size_t l = 0; l < 8; ++l) acc[l] += a[k + l] * b[k + l];
    for (; k < n; ++k) acc[k % 8] += a[k] * b[k];
    return ((acc[0] + acc[1]) + (acc[2] + acc[3])) + ((acc[4] + acc[5]) + (acc[6] + acc[7]));
}

// Y[i,o] = sum_k X[i,k] W[o,k] + b[o]
void linear_forward(const double* x, std::size_t n, std::size_t in, const Tensor& w, const Tensor& b,
                    double* y) {
    const std::size_t out = w.rows;
    for (std::size_t i = 0; i < n; ++i) {
        const double* xi = x + i * in;
        double* yi = y + i * out;
        for (std::size_t o = 0; o < out; ++o)
            yi[o] = b.data[o] + dot_striped(xi, w.data.data() + o * in, in);
    }
}

// dX[i,k] = sum_o dY[i,o] W[o,k]; dX is overwritten.
void linear_backward_input(const double* dy, std::size_t n, const Tensor& w, double* dx) {
    const std::size_t out = w.rows;
    const std::size_t in = w.cols;
    for (std::size_t i = 0; i < n; ++i) {
        double* dxi = dx + i * in;
        std::fill(dxi, dxi + in, 0.0);
        const double* dyi = dy + i * out;
        for (std::size_t o = 0; o < out; ++o) {
            const double g = dyi[o];
            if (g == 0.0) continue;
            const double* wo = w.data.data() + o * in;
            for (std::size_t k = 0; k < in; ++k) dxi[k] += g * wo[k];
        }
    }
}

// dW[o,k] += sum_i dY[i,o] X[i,k]; db[o] += sum_i dY[i,o]
void linear_backward_params(const double* dy, const double* x, std::size_t n, std::size_t in,
                            std::size_t out, Tensor& dw, Tensor& db) {
    for (std::size_t i = 0; i < n; ++i) {
        const double* xi = x + i * in;
        const double* dyi = dy + i * out;
        for (std::size_t o = 0; o < out; ++o) {
            const double g = dyi[o];
            if (g == 0.0) continue;
            db.data[o] += g;
            double* dwo = dw.data.data() + o * in;
            for (std::size_t k = 0; k < in; ++k) dwo[k] += g * xi[k];
        }
    }
}

void relu_inplace(double* x, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) x[i] = x[i] > 0.0 ? x[i] : 0.0;
}

// grad *= (activated > 0); activations are post-relu so the mask is exact.
void relu_backward(const double* activated, double* grad, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i)
        if (!(activated[i] > 0.0)) grad[i] = 0.0;
}

// ---- EdgeConv --------------------------------------------------------------

struct EdgeConvTrace {
    std::size_t f_in = 0, f_out = 0, n_msgs = 0;
    std::vector<std::size_t> node_offset;   // n+1, messages of node i are [off[i], off[i+1])
    std::vector<std::uint32_t> msg_src;     // source node j per message (self first)
    std::vector<double> e;                  // n_msgs x 2 f_in
    std::vector<double> a1;                 // n_msgs x f_out, post relu
    std::vector<double> a2;                 // n_msgs x f_out, post relu
    std::vector<double> out;                // n x f_out
    std::vector<std::uint32_t> argmax;      // n x f_out, global message index
};

void edge_conv_run(const Graph& g, const std::vector<double>& h, std::size_t f_in, const Tensor& wa,
                   const Tensor& ba, const Tensor& wb, const Tensor& bb, EdgeConvTrace& t) {
    const std::size_t n = g.n;
    const std::size_t f_out = wa.rows;
    t.f_in = f_in;
    t.f_out = f_out;
    t.node_offset.assign(n + 1, 0);
    for (std::size_t i = 0; i < n; ++i) t.node_offset[i + 1] = t.node_offset[i] + 1 + g.neighbors[i].size();
    t.n_msgs = t.node_offset[n];

    t.msg_src.resize(t.n_msgs);
    t.e.assign(t.n_msgs * 2 * f_in, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t m = t.node_offset[i];
        const double* hi = h.data() + i * f_in;
        // self message: concat(h_i, 0)
        t.msg_src[m] = static_cast<std::uint32_t>(i);
        std::copy(hi, hi + f_in, t.e.begin() + static_cast<std::ptrdiff_t>(m * 2 * f_in));
        ++m;
        for (std::uint32_t j : g.neighbors[i]) {
            t.msg_src[m] = j;
            double* em = t.e.data() + m * 2 * f_in;
            const double* hj = h.data() + j * f_in;
            for (std::size_t c = 0; c < f_in; ++c) {
                em[c] = hi[c];
                em[f_in + c] = hj[c] - hi[c];
            }
            ++m;
        }
    }

    t.a1.resize(t.n_msgs * f_out);
    linear_forward(t.e.data(), t.n_msgs, 2 * f_in, wa, ba, t.a1.data());
    relu_inplace(t.a1.data(), t.a1.size());
    t.a2.resize(t.n_msgs * f_out);
    linear_forward(t.a1.data(), t.n_msgs, f_out, wb, bb, t.a2.data());
    relu_inplace(t.a2.data(), t.a2.size());

    t.out.assign(n * f_out, 0.0);
    t.argmax.assign(n * f_out, 0);
    for (std::size_t i = 0; i < n; ++i) {
        double* oi = t.out.data() + i * f_out;
        std::uint32_t* ai = t.argmax.data() + i * f_out;
        for (std::size_t m = t.node_offset[i]; m < t.node_offset[i + 1]; ++m) {
            const double* am = t.a2.data() + m * f_out;
            if (m == t.node_offset[i]) {
                std::copy(am, am + f_out, oi);
                std::fill(ai, ai + f_out, static_cast<std::uint32_t>(m));
            } else {
                for (std::size_t c = 0; c < f_out; ++c)
                    if (am[c] > oi[c]) {
                        oi[c] = am[c];
                        ai[c] = static_cast<std::uint32_t>(m);
                    }
            }
        }
    }
}

void edge_conv_backward(const Graph& g, std::size_t f_in, const Tensor& wa, const Tensor& wb,
                        const EdgeConvTrace& t, const std::vector<double>& d_out,
                        std::vector<double>& d_h, Tensor& d_wa, Tensor& d_ba, Tensor& d_wb,
                        Tensor& d_bb) {
    const std::size_t n = g.n;
    const std::size_t f_out = t.f_out;

    std::vector<double> d_a2(t.n_msgs * f_out, 0.0);
    for (std::size_t i = 0; i < n * f_out; ++i) {
        if (d_out[i] == 0.0) continue;
        const std::size_t c = i % f_out;
        d_a2[static_cast<std::size_t>(t.argmax[i]) * f_out + c] += d_out[i];
    }
    relu_backward(t.a2.data(), d_a2.data(), d_a2.size());

    linear_backward_params(d_a2.data(), t.a1.data(), t.n_msgs, f_out, f_out, d_wb, d_bb);
    std::vector<double> d_a1(t.n_msgs * f_out);
    linear_backward_input(d_a2.data(), t.n_msgs, wb, d_a1.data());
    relu_backward(t.a1.data(), d_a1.data(), d_a1.size());

    linear_backward_params(d_a1.data(), t.e.data(), t.n_msgs, 2 * f_in, f_out, d_wa, d_ba);
    std::vector<double> d_e(t.n_msgs * 2 * f_in);
    linear_backward_input(d_a1.data(), t.n_msgs, wa, d_e.data());

    for (std::size_t i = 0; i < n; ++i) {
        double* dhi = d_h.data() + i * f_in;
        for (std::size_t m = t.node_offset[i]; m < t.node_offset[i + 1]; ++m) {
            const double* dem = d_e.data() + m * 2 * f_in;
            const std::uint32_t j = t.msg_src[m];
            double* dhj = d_h.data() + static_cast<std::size_t>(j) * f_in;
            for (std::size_t c = 0; c < f_in; ++c) {
                dhi[c] += dem[c] - dem[f_in + c];
                dhj[c] += dem[f_in + c];
            }
        }
    }
}

} // namespace

// ---- parameter container ---------------------------------------------------

NetworkParams NetworkParams::init(const NetworkConfig& cfg, std::uint64_t seed) {
    NetworkParams p;
    p.config = cfg;
    const auto add = [&p](const std::string& name, std::size_t rows, std::size_t cols) {
        p.tensors.emplace_back(name, rows, cols);
    };
    add("ec1_a_w", cfg.ec1_width, 2 * cfg.feature_dim);
    add("ec1_a_b", cfg.ec1_width, 1);
    add("ec1_b_w", cfg.ec1_width, cfg.ec1_width);
    add("ec1_b_b", cfg.ec1_width, 1);
    add("ec2_a_w", cfg.ec2_width, 2 * cfg.ec1_width);
    add("ec2_a_b", cfg.ec2_width, 1);
    add("ec2_b_w", cfg.ec2_width, cfg.ec2_width);
    add("ec2_b_b", cfg.ec2_width, 1);
    add("embed_w", cfg.embed_width, cfg.ec1_width + cfg.ec2_width);
    add("embed_b", cfg.embed_width, 1);
    add("head1_w", cfg.head1_width, cfg.embed_width);
    add("head1_b", cfg.head1_width, 1);
    add("head2_w", cfg.head2_width, cfg.head1_width);
    add("head2_b", cfg.head2_width, 1);
    add("out_w", cfg.output_dim, cfg.head2_width);
    add("out_b", cfg.output_dim, 1);

    Rng rng(seed);
    double fan_in = 1.0;
    for (Tensor& t : p.tensors) {
        if (t.cols > 1) {
            fan_in = static_cast<double>(t.cols);
            const double bound = std::sqrt(6.0 / fan_in);
            for (double& v : t.data) v = rng.uniform(-bound, bound);
        } else {
            // bias of the preceding weight matrix
            const double bound = 1.0 / std::sqrt(fan_in);
            for (double& v : t.data) v = rng.uniform(-bound, bound);
        }
    }
    return p;
}

NetworkParams NetworkParams::zeros_like(const NetworkParams& other) {
    NetworkParams p;
    p.config = other.config;
    p.tensors.reserve(other.tensors.size());
    for (const Tensor& t : other.tensors) p.tensors.emplace_back(t.name, t.rows, t.cols);
    return p;
}

Tensor& NetworkParams::get(const std::string& name) {
    for (Tensor& t : tensors)
        if (t.name == name) return t;
    throw std::invalid_argument("NetworkParams: unknown tensor " + name);
}

const Tensor& NetworkParams::get(const std::string& name) const {
    for (const Tensor& t : tensors)
        if (t.name == name) return t;
    throw std::invalid_argument("NetworkParams: unknown tensor " + name);
}

std::size_t NetworkParams::total_size() const {
    std::size_t n = 0;
    for (const Tensor& t : tensors) n += t.size();
    return n;
}

void NetworkParams::fill(double v) {
    for (Tensor& t : tensors) std::fill(t.data.begin(), t.data.end(), v);
}

// ---- forward / backward ----------------------------------------------------

struct ForwardTrace {
    EdgeConvTrace ec1, ec2;
    std::vector<double> cat;
    std::vector<double> embed;
    std::vector<double> pooled;
    std::vector<std::uint32_t> pool_argmax;
    std::vector<double> h1, h2;
    std::array<double, 4> out{};
};

namespace {

void forward_impl(const Graph& g, const NetworkParams& p, ForwardTrace& t) {
    if (g.n == 0) throw std::invalid_argument("network_forward: empty cloud has no prediction");
    const NetworkConfig& cfg = p.config;
    if (g.feature_dim != cfg.feature_dim)
        throw std::invalid_argument("network_forward: feature width mismatch");

    edge_conv_run(g, g.features, cfg.feature_dim, p.get("ec1_a_w"), p.get("ec1_a_b"), p.get("ec1_b_w"),
                  p.get("ec1_b_b"), t.ec1);
    edge_conv_run(g, t.ec1.out, cfg.ec1_width, p.get("ec2_a_w"), p.get("ec2_a_b"), p.get("ec2_b_w"),
                  p.get("ec2_b_b"), t.ec2);

    const std::size_t n = g.n;
    const std::size_t cat_w = cfg.ec1_width + cfg.ec2_width;
    t.cat.resize(n * cat_w);
    for (std::size_t i = 0; i < n; ++i) {
        std::copy(t.ec1.out.begin() + static_cast<std::ptrdiff_t>(i * cfg.ec1_width),
                  t.ec1.out.begin() + static_cast<std::ptrdiff_t>((i + 1) * cfg.ec1_width),
                  t.cat.begin() + static_cast<std::ptrdiff_t>(i * cat_w));
        std::copy(t.ec2.out.begin() + static_cast<std::ptrdiff_t>(i * cfg.ec2_width),
                  t.ec2.out.begin() + static_cast<std::ptrdiff_t>((i + 1) * cfg.ec2_width),
                  t.cat.begin() + static_cast<std::ptrdiff_t>(i * cat_w + cfg.ec1_width));
    }

    t.embed.resize(n * cfg.embed_width);
    linear_forward(t.cat.data(), n, cat_w, p.get("embed_w"), p.get("embed_b"), t.embed.data());
    relu_inplace(t.embed.data(), t.embed.size());

    t.pooled.assign(cfg.embed_width, 0.0);
    t.pool_argmax.assign(cfg.embed_width, 0);
    for (std::size_t c = 0; c < cfg.embed_width; ++c) {
        double best = t.embed[c];
        std::uint32_t arg = 0;
        for (std::size_t i = 1; i < n; ++i) {
            const double v = t.embed[i * cfg.embed_width + c];
            if (v > best) {
                best = v;
                arg = static_cast<std::uint32_t>(i);
            }
        }
        t.pooled[c] = best;
        t.pool_argmax[c] = arg;
    }

    t.h1.resize(cfg.head1_width);
    linear_forward(t.pooled.data(), 1, cfg.embed_width, p.get("head1_w"), p.get("head1_b"), t.h1.data());
    relu_inplace(t.h1.data(), t.h1.size());
    t.h2.resize(cfg.head2_width);
    linear_forward(t.h1.data(), 1, cfg.head1_width, p.get("head2_w"), p.get("head2_b"), t.h2.data());
    relu_inplace(t.h2.data(), t.h2.size());
    std::vector<double> out(cfg.output_dim);
    linear_forward(t.h2.data(), 1, cfg.head2_width, p.get("out_w"), p.get("out_b"), out.data());
    for (std::size_t c = 0; c < 4; ++c) t.out[c] = out[c];
}

} // namespace

std::vector<double> edge_conv_forward(const Graph& graph, const NetworkParams& params, int layer) {
    if (layer != 1 && layer != 2) throw std::invalid_argument("edge_conv_forward: layer must be 1 or 2");
    EdgeConvTrace t;
    if (graph.feature_dim != params.config.feature_dim)
        throw std::invalid_argument("edge_conv_forward: feature width mismatch");
    edge_conv_run(graph, graph.features, params.config.feature_dim, params.get("ec1_a_w"),
                  params.get("ec1_a_b"), params.get("ec1_b_w"), params.get("ec1_b_b"), t);
    if (layer == 1) return t.out;
    EdgeConvTrace t2;
    edge_conv_run(graph, t.out, params.config.ec1_width, params.get("ec2_a_w"), params.get("ec2_a_b"),
                  params.get("ec2_b_w"), params.get("ec2_b_b"), t2);
    return t2.out;
}

std::array<double, 4> network_forward(const Graph& graph, const NetworkParams& params) {
    ForwardTrace t;
    forward_impl(graph, params, t);
    return t.out;
}

double mse_loss(const std::vector<double>& pred, const std::vector<double>& target) {
    if (pred.size() != target.size()) throw std::invalid_argument("mse_loss: length mismatch");
    if (pred.empty()) throw std::invalid_argument("mse_loss: empty vectors");
    double acc = 0.0;
    for (std::size_t i = 0; i < pred.size(); ++i) {
        const double d = pred[i] - target[i];
        acc += d * d;
    }
    return acc / static_cast<double>(pred.size());
}

double mse_loss(const std::array<double, 4>& pred, const std::array<double, 4>& target) {
    double acc = 0.0;
    for (std::size_t i = 0; i < 4; ++i) {
        const double d = pred[i] - target[i];
        acc += d * d;
    }
    return acc / 4.0;
}

double loss_and_gradients(const Graph& graph, const NetworkParams& params,
                          const std::array<double, 4>& target, NetworkParams& grads) {
    ForwardTrace t;
    forward_impl(graph, params, t);
    const NetworkConfig& cfg = params.config;
    const std::size_t n = graph.n;

    const double loss = mse_loss(t.out, target);
    std::vector<double> d_out(cfg.output_dim);
    for (std::size_t c = 0; c < cfg.output_dim; ++c) d_out[c] = (t.out[c] - target[c]) / 2.0;

    // head
    linear_backward_params(d_out.data(), t.h2.data(), 1, cfg.head2_width, cfg.output_dim,
                           grads.get("out_w"), grads.get("out_b"));
    std::vector<double> d_h2(cfg.head2_width);
    linear_backward_input(d_out.data(), 1, params.get("out_w"), d_h2.data());
    relu_backward(t.h2.data(), d_h2.data(), d_h2.size());

    linear_backward_params(d_h2.data(), t.h1.data(), 1, cfg.head1_width, cfg.head2_width,
                           grads.get("head2_w"), grads.get("head2_b"));
    std::vector<double> d_h1(cfg.head1_width);
    linear_backward_input(d_h2.data(), 1, params.get("head2_w"), d_h1.data());
    relu_backward(t.h1.data(), d_h1.data(), d_h1.size());

    linear_backward_params(d_h1.data(), t.pooled.data(), 1, cfg.embed_width, cfg.head1_width,
                           grads.get("head1_w"), grads.get("head1_b"));
    std::vector<double> d_pooled(cfg.embed_width);
    linear_backward_input(d_h1.data(), 1, params.get("head1_w"), d_pooled.data());

    // unpool through the argmax nodes
    std::vector<double> d_embed(n * cfg.embed_width, 0.0);
    for (std::size_t c = 0; c < cfg.embed_width; ++c)
        if (d_pooled[c] != 0.0)
            d_embed[static_cast<std::size_t>(t.pool_argmax[c]) * cfg.embed_width + c] = d_pooled[c];
    relu_backward(t.embed.data(), d_embed.data(), d_embed.size());

    const std::size_t cat_w = cfg.ec1_width + cfg.ec2_width;
    linear_backward_params(d_embed.data(), t.cat.data(), n, cat_w, cfg.embed_width,
                           grads.get("embed_w"), grads.get("embed_b"));
    std::vector<double> d_cat(n * cat_w);
    linear_backward_input(d_embed.data(), n, params.get("embed_w"), d_cat.data());

    std::vector<double> d_h1_nodes(n * cfg.ec1_width, 0.0);
    std::vector<double> d_h2_nodes(n * cfg.ec2_width, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t c = 0; c < cfg.ec1_width; ++c)
            d_h1_nodes[i * cfg.ec1_width + c] = d_cat[i * cat_w + c];
        for (std::size_t c = 0; c < cfg.ec2_width; ++c)
            d_h2_nodes[i * cfg.ec2_width + c] = d_cat[i * cat_w + cfg.ec1_width + c];
    }

    edge_conv_backward(graph, cfg.ec1_width, params.get("ec2_a_w"), params.get("ec2_b_w"), t.ec2,
                       d_h2_nodes, d_h1_nodes, grads.get("ec2_a_w"), grads.get("ec2_a_b"),
                       grads.get("ec2_b_w"), grads.get("ec2_b_b"));

    std::vector<double> d_features(n * cfg.feature_dim, 0.0);  // unused sink
    edge_conv_backward(graph, cfg.feature_dim, params.get("ec1_a_w"), params.get("ec1_b_w"), t.ec1,
                       d_h1_nodes, d_features, grads.get("ec1_a_w"), grads.get("ec1_a_b"),
                       grads.get("ec1_b_w"), grads.get("ec1_b_b"));

    return loss;
}

double step_decay_lr(double initial_lr, double drop_rate, int drop_every, int epoch) {
    if (initial_lr <= 0.0) throw std::invalid_argument("step_decay_lr: initial rate must be > 0");
    if (drop_rate <= 0.0 || drop_rate > 1.0) throw std::invalid_argument("step_decay_lr: drop rate in (0,1]");
    if (drop_every < 1) throw std::invalid_argument("step_decay_lr: drop interval must be >= 1");
    if (epoch < 0) throw std::invalid_argument("step_decay_lr: epoch must be >= 0");
    return initial_lr * std::pow(drop_rate, static_cast<double>(epoch / drop_every));
}

AdamState AdamState::for_params(const NetworkParams& params) {
    AdamState s;
    s.m.reserve(params.tensors.size());
    s.v.reserve(params.tensors.size());
    for (const Tensor& t : params.tensors) {
        s.m.emplace_back(t.name, t.rows, t.cols);
        s.v.emplace_back(t.name, t.rows, t.cols);
    }
    return s;
}

void adam_step(NetworkParams& params, const NetworkParams& grads, AdamState& state, double lr,
               double beta1, double beta2, double eps) {
    if (params.tensors.size() != grads.tensors.size() || params.tensors.size() != state.m.size())
        throw std::invalid_argument("adam_step: shape mismatch");
    ++state.step;
    const double bc1 = 1.0 - std::pow(beta1, static_cast<double>(state.step));
    const double bc2 = 1.0 - std::pow(beta2, static_cast<double>(state.step));
    for (std::size_t ti = 0; ti < params.tensors.size(); ++ti) {
        Tensor& p = params.tensors[ti];
        const Tensor& g = grads.tensors[ti];
        if (p.size() != g.size()) throw std::invalid_argument("adam_step: tensor size mismatch");
        Tensor& m = state.m[ti];
        Tensor& v = state.v[ti];
        for (std::size_t i = 0; i < p.size(); ++i) {
            m.data[i] = beta1 * m.data[i] + (1.0 - beta1) * g.data[i];
            v.data[i] = beta2 * v.data[i] + (1.0 - beta2) * g.data[i] * g.data[i];
            const double m_hat = m.data[i] / bc1;
            const double v_hat = v.data[i] / bc2;
            p.data[i] -= lr * m_hat / (std::sqrt(v_hat) + eps);
        }
    }
}

namespace {

double mean_loss(const std::vector<TrainSample>& set, const NetworkParams& params) {
    if (set.empty()) return 0.0;
    std::vector<double> losses(set.size(), 0.0);
    parallel_for(0, static_cast<std::int64_t>(set.size()), [&](std::int64_t i) {
        losses[static_cast<std::size_t>(i)] =
            mse_loss(network_forward(set[static_cast<std::size_t>(i)].graph, params),
                     set[static_cast<std::size_t>(i)].target);
    });
    double acc = 0.0;
    for (double l : losses) acc += l;
    return acc / static_cast<double>(set.size());
}

void accumulate(NetworkParams& into, const NetworkParams& from) {
    for (std::size_t t = 0; t < into.tensors.size(); ++t)
        for (std::size_t i = 0; i < into.tensors[t].size(); ++i)
            into.tensors[t].data[i] += from.tensors[t].data[i];
}

void scale_params(NetworkParams& p, double s) {
    for (Tensor& t : p.tensors)
        for (double& v : t.data) v *= s;
}

} // namespace

TrainResult train(const std::vector<TrainSample>& train_set, const std::vector<TrainSample>& val_set,
                  const NetworkConfig& net_cfg, const TrainConfig& cfg) {
    if (train_set.empty() || val_set.empty()) throw std::invalid_argument("train: empty split");
    if (cfg.batch_size < 1 || cfg.max_epochs < 1 || cfg.patience < 0)
        throw std::invalid_argument("train: bad config");

    NetworkParams params = NetworkParams::init(net_cfg, derive_seed(cfg.seed, SeedStream::net_init));
    AdamState adam = AdamState::for_params(params);

    TrainResult result;
    result.params = params;
    result.best_epoch = 0;
    result.best_val_mse = mean_loss(val_set, params);
    result.history.push_back(
        {0, step_decay_lr(cfg.initial_lr, cfg.drop_rate, cfg.drop_every, 0),
         mean_loss(train_set, params), result.best_val_mse});

    // Gradients are averaged over fixed-size chunks and the chunk sums are
    // combined in index order: the batch gradient does not depend on how
    // many workers ran.
    constexpr std::size_t kChunk = 8;
    const std::size_t max_chunks = (static_cast<std::size_t>(cfg.batch_size) + kChunk - 1) / kChunk;
    std::vector<NetworkParams> chunk_grads;
    chunk_grads.reserve(max_chunks);
    for (std::size_t i = 0; i < max_chunks; ++i) chunk_grads.push_back(NetworkParams::zeros_like(params));
    NetworkParams batch_grad = NetworkParams::zeros_like(params);

    std::vector<std::size_t> order(train_set.size());
    std::iota(order.begin(), order.end(), std::size_t{0});

    int stale = 0;
    for (int epoch = 1; epoch <= cfg.max_epochs; ++epoch) {
        const double lr = step_decay_lr(cfg.initial_lr, cfg.drop_rate, cfg.drop_every, epoch - 1);

        Rng shuffle_rng(derive_seed(cfg.seed, SeedStream::batch_shuffle, static_cast<std::uint64_t>(epoch)));
        for (std::size_t i = order.size(); i > 1; --i)
            std::swap(order[i - 1], order[shuffle_rng.uniform_index(i)]);

        double epoch_loss = 0.0;
        for (std::size_t start = 0; start < order.size(); start += static_cast<std::size_t>(cfg.batch_size)) {
            const std::size_t stop = std::min(order.size(), start + static_cast<std::size_t>(cfg.batch_size));
            const std::size_t batch_n = stop - start;
            const std::size_t n_chunks = (batch_n + kChunk - 1) / kChunk;
            std::vector<double> chunk_loss(n_chunks, 0.0);

            parallel_for(0, static_cast<std::int64_t>(n_chunks), [&](std::int64_t ci) {
                NetworkParams& g = chunk_grads[static_cast<std::size_t>(ci)];
                g.fill(0.0);
                double acc = 0.0;
                const std::size_t lo = start + static_cast<std::size_t>(ci) * kChunk;
                const std::size_t hi = std::min(stop, lo + kChunk);
                for (std::size_t s = lo; s < hi; ++s) {
                    const TrainSample& sample = train_set[order[s]];
                    acc += loss_and_gradients(sample.graph, params, sample.target, g);
                }
                chunk_loss[static_cast<std::size_t>(ci)] = acc;
            });

            batch_grad.fill(0.0);
            for (std::size_t ci = 0; ci < n_chunks; ++ci) {
                accumulate(batch_grad, chunk_grads[ci]);
                epoch_loss += chunk_loss[ci];
            }
            scale_params(batch_grad, 1.0 / static_cast<double>(batch_n));
            adam_step(params, batch_grad, adam, lr);
        }

        const double train_mse = epoch_loss / static_cast<double>(train_set.size());
        const double val_mse = mean_loss(val_set, params);
        result.history.push_back({epoch, lr, train_mse, val_mse});

        if (val_mse < result.best_val_mse) {
            result.best_val_mse = val_mse;
            result.best_epoch = epoch;
            result.params = params;
            stale = 0;
        } else {
            ++stale;
        }
        if (stale >= std::max(cfg.patience, 1)) break;
    }
    return result;
}

} // namespace rflocate
