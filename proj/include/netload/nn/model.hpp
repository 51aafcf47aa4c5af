#pragma once

#include <vector>

#include "netload/nn/lstm.hpp"

namespace netload::nn {

struct BatchNormParams {
  Vector gamma;         // scale
  Vector beta;          // shift
  Vector running_mean;  // eval-mode statistics
  Vector running_var;
};

struct DenseParams {
  Matrix W;
  Vector b;
};

// Stacked LSTM regression model: per layer, the unrolled outputs are batch
// normalized over (batch x time) and dropout-masked before feeding the next
// layer; the last layer's final-timestep activation drives a linear dense
// layer and a scalar output layer.
struct LstmModel {
  std::vector<LstmLayerParams> layers;  // exactly 3 in the reference setup
  std::vector<BatchNormParams> norms;   // one per LSTM layer
  DenseParams dense;                    // linear hidden head
  DenseParams output;                   // 1 x dense_width
  double dropout_rate = 0.4;
  double l2_lambda = 0.001;
  double bn_momentum = 0.99;
  double bn_epsilon = 1e-8;

  int feature_count() const { return layers.front().input(); }
  std::size_t parameter_count() const;
};

struct ModelConfig {
  int features = 5;
  std::vector<int> lstm_hidden = {64, 64, 64};
  int dense_hidden = 32;
  double dropout_rate = 0.4;
  double l2_lambda = 0.001;
};

LstmModel make_model(const ModelConfig& cfg, Rng& rng);

// Minibatch laid out timestep-major: columns [t*B, (t+1)*B) of x hold
// timestep t of every sample in the batch.
struct Batch {
  Matrix x;  // F x (W*B)
  Vector y;  // B targets (may be empty for pure prediction)
  int window = 0;
  int batch_size = 0;
};

// Per-layer inverted-dropout masks; entries are 0 or 1/(1-p).
using DropoutMasks = std::vector<Matrix>;

DropoutMasks draw_dropout_masks(const LstmModel& model, int window, int batch_size, Rng& rng);
DropoutMasks identity_dropout_masks(const LstmModel& model, int window, int batch_size);

struct ForwardOptions {
  bool dropout_active = false;    // apply the masks
  bool bn_batch_stats = false;    // normalize with batch statistics
  bool bn_update_running = false; // fold batch stats into running stats

  static ForwardOptions train() { return {true, true, true}; }
  static ForwardOptions eval() { return {false, false, false}; }
};

struct LayerCache {
  Matrix input;    // F x (W*B), the layer's (possibly masked) input
  Matrix gates;    // 4H x (W*B), activated gate values
  Matrix cells;    // H x (W*B), post-update cell states
  Matrix tanh_c;   // H x (W*B)
  Matrix h_raw;    // H x (W*B), pre-normalization outputs
  Matrix xhat;     // H x (W*B), normalized activations
  Vector mu;       // batch mean per feature (batch-stats path)
  Vector inv_std;  // 1/sqrt(var + eps)
  bool batch_stats = false;
};

struct ForwardCache {
  std::vector<LayerCache> layers;
  DropoutMasks masks;
  Matrix last_step;   // H x B, input to the dense head
  Matrix dense_out;   // dense_width x B
  Vector predictions; // B
  int window = 0;
  int batch_size = 0;
};

// Core forward pass. `rng` is only consulted when dropout is active and no
// explicit masks are supplied. Running statistics mutate only when
// opts.bn_update_running is set.
Vector forward(LstmModel& model, const Batch& batch, const ForwardOptions& opts, Rng* rng,
               ForwardCache* cache);

// Deterministic fixed-mask variant used by training internals and the
// gradient checker.
Vector forward_with_masks(LstmModel& model, const Batch& batch, const ForwardOptions& opts,
                          const DropoutMasks& masks, ForwardCache* cache);

// Read-only inference: running statistics, no dropout.
Vector forward_eval(const LstmModel& model, const Batch& batch);

double mse_loss(const Vector& predictions, const Vector& targets);

// lambda * sum of squared input and recurrent LSTM weights. Biases, batch
// norm, and dense parameters are exempt.
double l2_penalty(const LstmModel& model);

struct Gradients {
  struct Layer {
    Matrix W, U;
    Vector b;
    Vector gamma, beta;
  };
  std::vector<Layer> layers;
  Matrix dense_W;
  Vector dense_b;
  Matrix output_W;
  Vector output_b;

  void set_zero();
  double squared_norm() const;
};

Gradients make_gradients(const LstmModel& model);

// Exact gradients of (loss + l2_penalty) given d loss / d predictions.
// The cache must come from a forward pass over the same model state.
Gradients backward(const LstmModel& model, const ForwardCache& cache, const Vector& dpred);

// Flat enumeration of every parameter tensor, in a stable order shared
// between the model and its gradient/optimizer mirrors.
struct TensorView {
  std::string name;
  double* data;
  std::size_t size;
};
std::vector<TensorView> tensor_views(LstmModel& model);
std::vector<TensorView> tensor_views(Gradients& grads);

}  // namespace netload::nn
