#include "romflux/closure.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace romflux {

void StandardScaler::fit(const DenseMatrix& samples) {
    require(samples.rows >= 1, "StandardScaler::fit: need at least one sample");
    const int n = samples.rows, f = samples.cols;
    mean.assign(f, 0.0);
    stdev.assign(f, 0.0);
    for (int j = 0; j < f; ++j) {
        double s = 0.0;
        for (int i = 0; i < n; ++i) s += samples(i, j);
        mean[j] = s / n;
        double v = 0.0;
        for (int i = 0; i < n; ++i) {
            const double d = samples(i, j) - mean[j];
            v += d * d;
        }
        const double sd = std::sqrt(v / n);
        stdev[j] = sd > 1e-12 ? sd : 1.0;
    }
}

std::vector<double> StandardScaler::transform(const std::vector<double>& x) const {
    require(x.size() == mean.size(), "StandardScaler::transform: feature count mismatch");
    std::vector<double> y(x.size());
    for (size_t j = 0; j < x.size(); ++j) y[j] = (x[j] - mean[j]) / stdev[j];
    return y;
}

std::vector<double> StandardScaler::inverse(const std::vector<double>& y) const {
    require(y.size() == mean.size(), "StandardScaler::inverse: feature count mismatch");
    std::vector<double> x(y.size());
    for (size_t j = 0; j < y.size(); ++j) x[j] = y[j] * stdev[j] + mean[j];
    return x;
}

DenseMatrix StandardScaler::transform_all(const DenseMatrix& samples) const {
    require(samples.cols == static_cast<int>(mean.size()),
            "StandardScaler::transform_all: feature count mismatch");
    DenseMatrix out(samples.rows, samples.cols);
    for (int i = 0; i < samples.rows; ++i)
        for (int j = 0; j < samples.cols; ++j)
            out(i, j) = (samples(i, j) - mean[j]) / stdev[j];
    return out;
}

WindowDataset build_windows(const DenseMatrix& features, const DenseMatrix& targets,
                            int lookback) {
    require(lookback >= 1, "build_windows: lookback must be >= 1");
    require(features.rows == targets.rows, "build_windows: feature/target row mismatch");
    require(features.rows >= lookback, "build_windows: fewer rows than the lookback");
    WindowDataset ds;
    ds.lookback = lookback;
    const int n = features.rows - lookback + 1;
    ds.targets = DenseMatrix(n, targets.cols);
    for (int s = 0; s < n; ++s) {
        DenseMatrix w(lookback, features.cols);
        for (int t = 0; t < lookback; ++t)
            for (int j = 0; j < features.cols; ++j) w(t, j) = features(s + t, j);
        ds.windows.push_back(std::move(w));
        for (int j = 0; j < targets.cols; ++j)
            ds.targets(s, j) = targets(s + lookback - 1, j);
    }
    return ds;
}

namespace {

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

/// Offset view into the flat parameter vector.
struct Block {
    int off = 0, rows = 0, cols = 0;
    int size() const { return rows * cols; }
};

double get(const std::vector<double>& p, const Block& b, int r, int c) {
    return p[b.off + r * b.cols + c];
}

void glorot_fill(std::vector<double>& p, const Block& b, Rng& rng) {
    const double limit = std::sqrt(6.0 / (b.rows + b.cols));
    for (int k = 0; k < b.size(); ++k) p[b.off + k] = rng.uniform(-limit, limit);
}

void scaled_fill(std::vector<double>& p, const Block& b, Rng& rng) {
    const double limit = 1.0 / std::sqrt(static_cast<double>(b.cols));
    for (int k = 0; k < b.size(); ++k) p[b.off + k] = rng.uniform(-limit, limit);
}

// ---------------------------------------------------------------------------
// Feed-forward model

class MlpClosure final : public ClosureModel {
  public:
    MlpClosure(int in, int out, std::uint64_t seed, double dropout)
        : in_(in), out_(out), dropout_(dropout) {
        require(in >= 1 && out >= 1, "MlpClosure: invalid dimensions");
        require(dropout >= 0.0 && dropout < 1.0, "MlpClosure: invalid dropout rate");
        int off = 0;
        auto block = [&off](int r, int c) {
            Block b{off, r, c};
            off += r * c;
            return b;
        };
        w1_ = block(kH1, in_);
        b1_ = block(kH1, 1);
        w2_ = block(kH2, kH1);
        b2_ = block(kH2, 1);
        w3_ = block(out_, kH2);
        b3_ = block(out_, 1);
        params_.assign(off, 0.0);
        Rng rng(seed);
        glorot_fill(params_, w1_, rng);
        glorot_fill(params_, w2_, rng);
        glorot_fill(params_, w3_, rng);
    }

    std::string kind() const override { return "mlp"; }
    int input_dim() const override { return in_; }
    int output_dim() const override { return out_; }
    int lookback() const override { return 1; }
    std::vector<double>& parameters() override { return params_; }
    const std::vector<double>& parameters() const override { return params_; }

    std::vector<double> predict(const DenseMatrix& window) const override {
        require(window.cols == in_ && window.rows >= 1, "MlpClosure::predict: bad window");
        Cache c;
        std::vector<double> x(in_);
        for (int j = 0; j < in_; ++j) x[j] = window(window.rows - 1, j);
        forward(x, c, nullptr);
        return c.y;
    }

    double loss_and_gradient(const WindowDataset& data, const std::vector<int>& batch,
                             std::vector<double>& grad, Rng* dropout_rng) const override {
        grad.assign(params_.size(), 0.0);
        require(!batch.empty(), "loss_and_gradient: empty batch");
        const double scale = 1.0 / (static_cast<double>(batch.size()) * out_);
        double loss = 0.0;
        Cache c;
        std::vector<double> x(in_), dy(out_), da2(kH2), dz2(kH2), da1(kH1), dz1(kH1);
        for (int s : batch) {
            const DenseMatrix& w = data.windows[s];
            for (int j = 0; j < in_; ++j) x[j] = w(w.rows - 1, j);
            forward(x, c, dropout_rng);
            for (int o = 0; o < out_; ++o) {
                const double e = c.y[o] - data.targets(s, o);
                loss += e * e * scale;
                dy[o] = 2.0 * e * scale;
            }
            // Output layer.
            for (int o = 0; o < out_; ++o) {
                for (int j = 0; j < kH2; ++j)
                    grad[w3_.off + o * kH2 + j] += dy[o] * c.a2[j];
                grad[b3_.off + o] += dy[o];
            }
            for (int j = 0; j < kH2; ++j) {
                double s2 = 0.0;
                for (int o = 0; o < out_; ++o) s2 += get(params_, w3_, o, j) * dy[o];
                da2[j] = s2;
                dz2[j] = c.z2[j] > 0.0 ? s2 : 0.0;
            }
            for (int i = 0; i < kH2; ++i) {
                for (int j = 0; j < kH1; ++j)
                    grad[w2_.off + i * kH1 + j] += dz2[i] * c.a1[j];
                grad[b2_.off + i] += dz2[i];
            }
            for (int j = 0; j < kH1; ++j) {
                double s1 = 0.0;
                for (int i = 0; i < kH2; ++i) s1 += get(params_, w2_, i, j) * dz2[i];
                da1[j] = s1 * c.mask[j];
                dz1[j] = c.z1[j] > 0.0 ? da1[j] : 0.0;
            }
            for (int i = 0; i < kH1; ++i) {
                for (int j = 0; j < in_; ++j)
                    grad[w1_.off + i * in_ + j] += dz1[i] * x[j];
                grad[b1_.off + i] += dz1[i];
            }
        }
        return loss;
    }

  private:
    static constexpr int kH1 = 128, kH2 = 64;

    struct Cache {
        std::vector<double> z1, a1, mask, z2, a2, y;
    };

    /// a1 holds the post-dropout activation (inverted dropout, so evaluation
    /// needs no rescaling).
    void forward(const std::vector<double>& x, Cache& c, Rng* drop) const {
        c.z1.assign(kH1, 0.0);
        c.a1.assign(kH1, 0.0);
        c.mask.assign(kH1, 1.0);
        c.z2.assign(kH2, 0.0);
        c.a2.assign(kH2, 0.0);
        c.y.assign(out_, 0.0);
        for (int i = 0; i < kH1; ++i) {
            double s = params_[b1_.off + i];
            for (int j = 0; j < in_; ++j) s += get(params_, w1_, i, j) * x[j];
            c.z1[i] = s;
            double a = s > 0.0 ? s : 0.0;
            if (drop && dropout_ > 0.0) {
                c.mask[i] = drop->uniform() >= dropout_ ? 1.0 / (1.0 - dropout_) : 0.0;
                a *= c.mask[i];
            }
            c.a1[i] = a;
        }
        for (int i = 0; i < kH2; ++i) {
            double s = params_[b2_.off + i];
            for (int j = 0; j < kH1; ++j) s += get(params_, w2_, i, j) * c.a1[j];
            c.z2[i] = s;
            c.a2[i] = s > 0.0 ? s : 0.0;
        }
        for (int o = 0; o < out_; ++o) {
            double s = params_[b3_.off + o];
            for (int j = 0; j < kH2; ++j) s += get(params_, w3_, o, j) * c.a2[j];
            c.y[o] = s;
        }
    }

    int in_, out_;
    double dropout_;
    Block w1_, b1_, w2_, b2_, w3_, b3_;
    std::vector<double> params_;
};

// ---------------------------------------------------------------------------
// Recurrent model

/// Per-sequence activations of one recurrent layer, gate order i, f, g, o.
struct LayerCache {
    std::vector<std::vector<double>> gi, gf, gg, go, c, tc, h;
};

class LstmClosure final : public ClosureModel {
  public:
    LstmClosure(int in, int out, int lookback, std::uint64_t seed)
        : in_(in), out_(out), lookback_(lookback) {
        require(in >= 1 && out >= 1 && lookback >= 1, "LstmClosure: invalid dimensions");
        int off = 0;
        auto block = [&off](int r, int c) {
            Block b{off, r, c};
            off += r * c;
            return b;
        };
        w1_ = block(4 * kH1, in_);
        u1_ = block(4 * kH1, kH1);
        b1_ = block(4 * kH1, 1);
        w2_ = block(4 * kH2, kH1);
        u2_ = block(4 * kH2, kH2);
        b2_ = block(4 * kH2, 1);
        wd_ = block(kD, kH2);
        bd_ = block(kD, 1);
        wo_ = block(out_, kD);
        bo_ = block(out_, 1);
        params_.assign(off, 0.0);
        Rng rng(seed);
        glorot_fill(params_, w1_, rng);
        scaled_fill(params_, u1_, rng);
        glorot_fill(params_, w2_, rng);
        scaled_fill(params_, u2_, rng);
        glorot_fill(params_, wd_, rng);
        glorot_fill(params_, wo_, rng);
        // Forget-gate bias of one eases gradient flow early in training.
        for (int i = kH1; i < 2 * kH1; ++i) params_[b1_.off + i] = 1.0;
        for (int i = kH2; i < 2 * kH2; ++i) params_[b2_.off + i] = 1.0;
    }

    std::string kind() const override { return "lstm"; }
    int input_dim() const override { return in_; }
    int output_dim() const override { return out_; }
    int lookback() const override { return lookback_; }
    std::vector<double>& parameters() override { return params_; }
    const std::vector<double>& parameters() const override { return params_; }

    std::vector<double> predict(const DenseMatrix& window) const override {
        require(window.cols == in_ && window.rows == lookback_,
                "LstmClosure::predict: bad window");
        LayerCache c1, c2;
        std::vector<double> zd, ad, y;
        forward(window, c1, c2, zd, ad, y);
        return y;
    }

    double loss_and_gradient(const WindowDataset& data, const std::vector<int>& batch,
                             std::vector<double>& grad, Rng* /*dropout_rng*/) const override {
        grad.assign(params_.size(), 0.0);
        require(!batch.empty(), "loss_and_gradient: empty batch");
        require(data.lookback == lookback_, "loss_and_gradient: lookback mismatch");
        const double scale = 1.0 / (static_cast<double>(batch.size()) * out_);
        double loss = 0.0;
        for (int s : batch) {
            const DenseMatrix& w = data.windows[s];
            LayerCache c1, c2;
            std::vector<double> zd, ad, y;
            forward(w, c1, c2, zd, ad, y);

            std::vector<double> dy(out_);
            for (int o = 0; o < out_; ++o) {
                const double e = y[o] - data.targets(s, o);
                loss += e * e * scale;
                dy[o] = 2.0 * e * scale;
            }
            // Dense head backward.
            std::vector<double> dad(kD, 0.0), dzd(kD, 0.0);
            for (int o = 0; o < out_; ++o) {
                for (int j = 0; j < kD; ++j) grad[wo_.off + o * kD + j] += dy[o] * ad[j];
                grad[bo_.off + o] += dy[o];
            }
            for (int j = 0; j < kD; ++j) {
                double sum = 0.0;
                for (int o = 0; o < out_; ++o) sum += get(params_, wo_, o, j) * dy[o];
                dad[j] = sum;
                dzd[j] = zd[j] > 0.0 ? sum : 0.0;
            }
            std::vector<double> dh2_last(kH2, 0.0);
            for (int i = 0; i < kD; ++i) {
                for (int j = 0; j < kH2; ++j)
                    grad[wd_.off + i * kH2 + j] += dzd[i] * c2.h.back()[j];
                grad[bd_.off + i] += dzd[i];
            }
            for (int j = 0; j < kH2; ++j) {
                double sum = 0.0;
                for (int i = 0; i < kD; ++i) sum += get(params_, wd_, i, j) * dzd[i];
                dh2_last[j] = sum;
            }

            // Only the last output of layer 2 feeds the head.
            DenseMatrix dh2(lookback_, kH2);
            for (int j = 0; j < kH2; ++j) dh2(lookback_ - 1, j) = dh2_last[j];
            DenseMatrix h1(lookback_, kH1);
            for (int t = 0; t < lookback_; ++t)
                for (int j = 0; j < kH1; ++j) h1(t, j) = c1.h[t][j];
            DenseMatrix dh1(lookback_, kH1);
            backward_layer(w2_, u2_, b2_, kH2, h1, c2, dh2, grad, &dh1);
            backward_layer(w1_, u1_, b1_, kH1, w, c1, dh1, grad, nullptr);
        }
        return loss;
    }

  private:
    static constexpr int kH1 = 64, kH2 = 32, kD = 32;

    void forward_layer(const Block& wb, const Block& ub, const Block& bb, int H,
                       const DenseMatrix& x, LayerCache& cache) const {
        const int T = x.rows;
        cache.gi.assign(T, {});
        cache.gf.assign(T, {});
        cache.gg.assign(T, {});
        cache.go.assign(T, {});
        cache.c.assign(T, {});
        cache.tc.assign(T, {});
        cache.h.assign(T, {});
        std::vector<double> h_prev(H, 0.0), c_prev(H, 0.0), v(4 * H);
        for (int t = 0; t < T; ++t) {
            for (int k = 0; k < 4 * H; ++k) {
                double s = params_[bb.off + k];
                for (int j = 0; j < x.cols; ++j) s += get(params_, wb, k, j) * x(t, j);
                for (int j = 0; j < H; ++j) s += get(params_, ub, k, j) * h_prev[j];
                v[k] = s;
            }
            auto& gi = cache.gi[t];
            auto& gf = cache.gf[t];
            auto& gg = cache.gg[t];
            auto& go = cache.go[t];
            auto& cc = cache.c[t];
            auto& tc = cache.tc[t];
            auto& hh = cache.h[t];
            gi.resize(H);
            gf.resize(H);
            gg.resize(H);
            go.resize(H);
            cc.resize(H);
            tc.resize(H);
            hh.resize(H);
            for (int j = 0; j < H; ++j) {
                gi[j] = sigmoid(v[j]);
                gf[j] = sigmoid(v[H + j]);
                gg[j] = std::tanh(v[2 * H + j]);
                go[j] = sigmoid(v[3 * H + j]);
                cc[j] = gf[j] * c_prev[j] + gi[j] * gg[j];
                tc[j] = std::tanh(cc[j]);
                hh[j] = go[j] * tc[j];
            }
            h_prev = hh;
            c_prev = cc;
        }
    }

    /// Backpropagation through time. `dh` carries the loss gradient on each
    /// hidden output; `dx` (optional) receives the gradient on the inputs.
    void backward_layer(const Block& wb, const Block& ub, const Block& bb, int H,
                        const DenseMatrix& x, const LayerCache& cache, const DenseMatrix& dh,
                        std::vector<double>& grad, DenseMatrix* dx) const {
        const int T = x.rows;
        const std::vector<double> zeros(H, 0.0);
        std::vector<double> dh_next(H, 0.0), dc_next(H, 0.0), dv(4 * H);
        for (int t = T - 1; t >= 0; --t) {
            const std::vector<double>& c_prev = t > 0 ? cache.c[t - 1] : zeros;
            const std::vector<double>& h_prev = t > 0 ? cache.h[t - 1] : zeros;
            for (int j = 0; j < H; ++j) {
                const double dht = dh(t, j) + dh_next[j];
                const double go = cache.go[t][j], tc = cache.tc[t][j];
                const double dct = dc_next[j] + dht * go * (1.0 - tc * tc);
                const double gi = cache.gi[t][j], gf = cache.gf[t][j], gg = cache.gg[t][j];
                dv[j] = dct * gg * gi * (1.0 - gi);
                dv[H + j] = dct * c_prev[j] * gf * (1.0 - gf);
                dv[2 * H + j] = dct * gi * (1.0 - gg * gg);
                dv[3 * H + j] = dht * tc * go * (1.0 - go);
                dc_next[j] = dct * gf;
            }
            for (int k = 0; k < 4 * H; ++k) {
                for (int j = 0; j < x.cols; ++j)
                    grad[wb.off + k * x.cols + j] += dv[k] * x(t, j);
                for (int j = 0; j < H; ++j) grad[ub.off + k * H + j] += dv[k] * h_prev[j];
                grad[bb.off + k] += dv[k];
            }
            std::fill(dh_next.begin(), dh_next.end(), 0.0);
            for (int k = 0; k < 4 * H; ++k)
                for (int j = 0; j < H; ++j) dh_next[j] += get(params_, ub, k, j) * dv[k];
            if (dx)
                for (int j = 0; j < x.cols; ++j) {
                    double s = 0.0;
                    for (int k = 0; k < 4 * H; ++k) s += get(params_, wb, k, j) * dv[k];
                    (*dx)(t, j) = s;
                }
        }
    }

    void forward(const DenseMatrix& window, LayerCache& c1, LayerCache& c2,
                 std::vector<double>& zd, std::vector<double>& ad,
                 std::vector<double>& y) const {
        forward_layer(w1_, u1_, b1_, kH1, window, c1);
        DenseMatrix h1(window.rows, kH1);
        for (int t = 0; t < window.rows; ++t)
            for (int j = 0; j < kH1; ++j) h1(t, j) = c1.h[t][j];
        forward_layer(w2_, u2_, b2_, kH2, h1, c2);
        const std::vector<double>& h_last = c2.h.back();
        zd.assign(kD, 0.0);
        ad.assign(kD, 0.0);
        for (int i = 0; i < kD; ++i) {
            double s = params_[bd_.off + i];
            for (int j = 0; j < kH2; ++j) s += get(params_, wd_, i, j) * h_last[j];
            zd[i] = s;
            ad[i] = s > 0.0 ? s : 0.0;
        }
        y.assign(out_, 0.0);
        for (int o = 0; o < out_; ++o) {
            double s = params_[bo_.off + o];
            for (int j = 0; j < kD; ++j) s += get(params_, wo_, o, j) * ad[j];
            y[o] = s;
        }
    }

    int in_, out_, lookback_;
    Block w1_, u1_, b1_, w2_, u2_, b2_, wd_, bd_, wo_, bo_;
    std::vector<double> params_;
};

}  // namespace

std::unique_ptr<ClosureModel> make_mlp(int input_dim, int output_dim, std::uint64_t seed,
                                       double dropout) {
    return std::make_unique<MlpClosure>(input_dim, output_dim, seed, dropout);
}

std::unique_ptr<ClosureModel> make_lstm(int input_dim, int output_dim, int lookback,
                                        std::uint64_t seed) {
    return std::make_unique<LstmClosure>(input_dim, output_dim, lookback, seed);
}

double evaluate_loss(const ClosureModel& model, const WindowDataset& data,
                     const std::vector<int>& indices) {
    if (indices.empty()) return 0.0;
    double loss = 0.0;
    for (int s : indices) {
        const std::vector<double> y = model.predict(data.windows[s]);
        for (int o = 0; o < model.output_dim(); ++o) {
            const double e = y[o] - data.targets(s, o);
            loss += e * e;
        }
    }
    return loss / (static_cast<double>(indices.size()) * model.output_dim());
}

std::vector<EpochStats> train_closure(ClosureModel& model, const WindowDataset& data,
                                      const TrainConfig& config) {
    require(config.epochs >= 1 && config.batch_size >= 1,
            "train_closure: invalid schedule");
    require(config.learning_rate > 0.0, "train_closure: invalid learning rate");
    require(config.val_fraction >= 0.0 && config.val_fraction < 1.0,
            "train_closure: invalid validation fraction");
    const int n = data.n_samples();
    require(n >= 2, "train_closure: need at least two samples");

    int n_val = static_cast<int>(std::lround(config.val_fraction * n));
    if (config.val_fraction > 0.0 && n_val < 1) n_val = 1;
    if (n_val > n - 1) n_val = n - 1;
    std::vector<int> train_idx, val_idx;
    for (int i = 0; i < n - n_val; ++i) train_idx.push_back(i);
    for (int i = n - n_val; i < n; ++i) val_idx.push_back(i);

    std::vector<double>& p = model.parameters();
    std::vector<double> m(p.size(), 0.0), v(p.size(), 0.0), grad;
    Rng shuffle_rng(config.seed);
    Rng dropout_rng(config.seed ^ 0xA3C59AC2F1B0D5E7ULL);

    std::vector<EpochStats> history;
    long step = 0;
    for (int epoch = 0; epoch < config.epochs; ++epoch) {
        shuffle_rng.shuffle(train_idx);
        double epoch_loss = 0.0;
        for (size_t start = 0; start < train_idx.size(); start += config.batch_size) {
            const size_t stop = std::min(train_idx.size(),
                                         start + static_cast<size_t>(config.batch_size));
            const std::vector<int> batch(train_idx.begin() + start, train_idx.begin() + stop);
            const double loss = model.loss_and_gradient(data, batch, grad, &dropout_rng);
            epoch_loss += loss * static_cast<double>(batch.size());
            ++step;
            const double bc1 = 1.0 - std::pow(config.beta1, static_cast<double>(step));
            const double bc2 = 1.0 - std::pow(config.beta2, static_cast<double>(step));
            for (size_t k = 0; k < p.size(); ++k) {
                m[k] = config.beta1 * m[k] + (1.0 - config.beta1) * grad[k];
                v[k] = config.beta2 * v[k] + (1.0 - config.beta2) * grad[k] * grad[k];
                p[k] -= config.learning_rate * (m[k] / bc1) /
                        (std::sqrt(v[k] / bc2) + config.eps);
            }
        }
        epoch_loss /= static_cast<double>(train_idx.size());
        const double val_loss =
            val_idx.empty() ? epoch_loss : evaluate_loss(model, data, val_idx);
        history.push_back({epoch + 1, epoch_loss, val_loss});
    }
    return history;
}

std::vector<double> ClosureBundle::predict(const DenseMatrix& raw_window) const {
    require(model != nullptr, "ClosureBundle::predict: no model loaded");
    DenseMatrix scaled(raw_window.rows, raw_window.cols);
    std::vector<double> row(raw_window.cols);
    for (int t = 0; t < raw_window.rows; ++t) {
        for (int j = 0; j < raw_window.cols; ++j) row[j] = raw_window(t, j);
        const std::vector<double> s = input_scaler.transform(row);
        for (int j = 0; j < raw_window.cols; ++j) scaled(t, j) = s[j];
    }
    return target_scaler.inverse(model->predict(scaled));
}

namespace {

void write_doubles(std::ofstream& out, const std::vector<double>& v) {
    char buf[32];
    for (size_t i = 0; i < v.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g", v[i]);
        out << buf << (i + 1 == v.size() ? "" : " ");
    }
    out << "\n";
}

std::vector<double> read_doubles(std::istream& in, size_t n, const std::string& what) {
    std::vector<double> v(n);
    for (size_t i = 0; i < n; ++i)
        if (!(in >> v[i])) throw ValidationError("load_closure: truncated " + what);
    return v;
}

}  // namespace

void save_closure(const ClosureBundle& bundle, const std::filesystem::path& path) {
    require(bundle.model != nullptr, "save_closure: no model to save");
    std::ofstream out(path);
    if (!out) throw ValidationError("save_closure: cannot open " + path.string());
    const ClosureModel& m = *bundle.model;
    out << "romflux-closure 1\n";
    out << m.kind() << " " << m.input_dim() << " " << m.output_dim() << " "
        << m.lookback() << "\n";
    out << "params " << m.parameters().size() << "\n";
    write_doubles(out, m.parameters());
    out << "input_scaler " << bundle.input_scaler.mean.size() << "\n";
    write_doubles(out, bundle.input_scaler.mean);
    write_doubles(out, bundle.input_scaler.stdev);
    out << "target_scaler " << bundle.target_scaler.mean.size() << "\n";
    write_doubles(out, bundle.target_scaler.mean);
    write_doubles(out, bundle.target_scaler.stdev);
    if (!out) throw ValidationError("save_closure: write failed for " + path.string());
}

ClosureBundle load_closure(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("load_closure: cannot open " + path.string());
    std::string magic;
    int version = 0;
    in >> magic >> version;
    if (magic != "romflux-closure" || version != 1)
        throw ValidationError("load_closure: unrecognized header in " + path.string());
    std::string kind;
    int in_dim = 0, out_dim = 0, lookback = 0;
    in >> kind >> in_dim >> out_dim >> lookback;
    ClosureBundle bundle;
    if (kind == "mlp")
        bundle.model = make_mlp(in_dim, out_dim, /*seed=*/1);
    else if (kind == "lstm")
        bundle.model = make_lstm(in_dim, out_dim, lookback, /*seed=*/1);
    else
        throw ValidationError("load_closure: unknown model kind '" + kind + "'");
    std::string tag;
    size_t count = 0;
    in >> tag >> count;
    if (tag != "params" || count != bundle.model->parameters().size())
        throw ValidationError("load_closure: parameter count mismatch");
    bundle.model->parameters() = read_doubles(in, count, "parameters");
    in >> tag >> count;
    if (tag != "input_scaler") throw ValidationError("load_closure: missing input scaler");
    bundle.input_scaler.mean = read_doubles(in, count, "input scaler");
    bundle.input_scaler.stdev = read_doubles(in, count, "input scaler");
    in >> tag >> count;
    if (tag != "target_scaler") throw ValidationError("load_closure: missing target scaler");
    bundle.target_scaler.mean = read_doubles(in, count, "target scaler");
    bundle.target_scaler.stdev = read_doubles(in, count, "target scaler");
    return bundle;
}

}  // namespace romflux
