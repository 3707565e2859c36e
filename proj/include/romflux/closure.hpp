#pragma once

#include <filesystem>
#include <memory>
#include <string>

#include "romflux/dense.hpp"
#include "romflux/rng.hpp"

namespace romflux {

/// Per-feature zero-mean unit-variance scaling. Features with vanishing
/// spread keep a unit scale so constant channels pass through unchanged.
struct StandardScaler {
    std::vector<double> mean, stdev;

    void fit(const DenseMatrix& samples);  // rows are samples
    std::vector<double> transform(const std::vector<double>& x) const;
    std::vector<double> inverse(const std::vector<double>& y) const;
    DenseMatrix transform_all(const DenseMatrix& samples) const;
};

/// Supervised windows: sample i holds `lookback` consecutive feature rows and
/// the target row aligned with the window's last row.
struct WindowDataset {
    std::vector<DenseMatrix> windows;  // each lookback x n_features
    DenseMatrix targets;               // n_samples x n_targets
    int lookback = 1;

    int n_samples() const { return static_cast<int>(windows.size()); }
};

WindowDataset build_windows(const DenseMatrix& features, const DenseMatrix& targets,
                            int lookback);

/// Regression network mapping a feature window to target coefficients.
/// Parameters live in one flat vector so optimizers and finite-difference
/// checks can treat every model uniformly.
class ClosureModel {
  public:
    virtual ~ClosureModel() = default;

    virtual std::string kind() const = 0;
    virtual int input_dim() const = 0;
    virtual int output_dim() const = 0;
    virtual int lookback() const = 0;

    virtual std::vector<double> predict(const DenseMatrix& window) const = 0;

    virtual std::vector<double>& parameters() = 0;
    virtual const std::vector<double>& parameters() const = 0;

    /// Mean-squared error over the batch (mean over samples and outputs) and
    /// its gradient with respect to the flat parameter vector. A non-null
    /// `dropout_rng` enables training-time dropout where the model uses it.
    virtual double loss_and_gradient(const WindowDataset& data,
                                     const std::vector<int>& batch,
                                     std::vector<double>& grad,
                                     Rng* dropout_rng) const = 0;
};

/// Feed-forward net on the window's last row: 128-ReLU, dropout, 64-ReLU,
/// linear output.
std::unique_ptr<ClosureModel> make_mlp(int input_dim, int output_dim, std::uint64_t seed,
                                       double dropout = 0.2);

/// Two stacked recurrent layers (64 then 32 units), a 32-ReLU head and a
/// linear output, consuming the full window.
std::unique_ptr<ClosureModel> make_lstm(int input_dim, int output_dim, int lookback,
                                        std::uint64_t seed);

struct TrainConfig {
    int epochs = 1200;
    int batch_size = 64;
    double learning_rate = 3e-5;
    double beta1 = 0.9, beta2 = 0.999, eps = 1e-8;
    double val_fraction = 0.2;  // chronological tail split
    std::uint64_t seed = 1;
};

struct EpochStats {
    int epoch;
    double train_loss, val_loss;
};

/// Mean-squared error of predictions over the given samples (no gradients).
double evaluate_loss(const ClosureModel& model, const WindowDataset& data,
                     const std::vector<int>& indices);

/// Adam training with per-epoch seeded shuffling and a chronological
/// validation tail. Single-threaded accumulation keeps runs bit-identical
/// for a fixed seed.
std::vector<EpochStats> train_closure(ClosureModel& model, const WindowDataset& data,
                                      const TrainConfig& config);

/// Trained model plus the scalers that map between raw and network space.
struct ClosureBundle {
    std::unique_ptr<ClosureModel> model;
    StandardScaler input_scaler, target_scaler;

    /// Raw feature window in, raw target prediction out.
    std::vector<double> predict(const DenseMatrix& raw_window) const;
};

void save_closure(const ClosureBundle& bundle, const std::filesystem::path& path);
ClosureBundle load_closure(const std::filesystem::path& path);

}  // namespace romflux
