#include "netload/nn/model.hpp"

#include <cmath>
#include <stdexcept>

namespace netload::nn {

std::size_t LstmModel::parameter_count() const {
  std::size_t n = 0;
  for (const auto& l : layers) n += l.W.size() + l.U.size() + l.b.size();
  for (const auto& bn : norms) n += bn.gamma.size() + bn.beta.size();
  n += dense.W.size() + dense.b.size();
  n += output.W.size() + output.b.size();
  return n;
}

LstmModel make_model(const ModelConfig& cfg, Rng& rng) {
  if (cfg.lstm_hidden.size() != 3)
    throw std::invalid_argument("the model stacks exactly three LSTM layers");
  if (cfg.dense_hidden < 1) throw std::invalid_argument("dense width must be >= 1");
  if (cfg.dropout_rate < 0.0 || cfg.dropout_rate >= 1.0)
    throw std::invalid_argument("dropout rate must be in [0,1)");
  if (cfg.l2_lambda < 0.0) throw std::invalid_argument("l2 lambda must be >= 0");

  LstmModel m;
  m.dropout_rate = cfg.dropout_rate;
  m.l2_lambda = cfg.l2_lambda;
  int in = cfg.features;
  for (int h : cfg.lstm_hidden) {
    m.layers.push_back(make_lstm_layer(in, h, rng));
    BatchNormParams bn;
    bn.gamma = Vector::Ones(h);
    bn.beta = Vector::Zero(h);
    bn.running_mean = Vector::Zero(h);
    bn.running_var = Vector::Ones(h);
    m.norms.push_back(std::move(bn));
    in = h;
  }
  auto glorot = [&rng](int rows, int cols) {
    const double lim = std::sqrt(6.0 / (rows + cols));
    Matrix w(rows, cols);
    for (Eigen::Index i = 0; i < w.size(); ++i) w.data()[i] = rng.uniform(-lim, lim);
    return w;
  };
  m.dense.W = glorot(cfg.dense_hidden, in);
  m.dense.b = Vector::Zero(cfg.dense_hidden);
  m.output.W = glorot(1, cfg.dense_hidden);
  m.output.b = Vector::Zero(1);
  return m;
}

DropoutMasks draw_dropout_masks(const LstmModel& model, int window, int batch_size, Rng& rng) {
  DropoutMasks masks;
  const double p = model.dropout_rate;
  const double keep_scale = p > 0.0 ? 1.0 / (1.0 - p) : 1.0;
  for (const auto& layer : model.layers) {
    Matrix m(layer.hidden(), static_cast<Eigen::Index>(window) * batch_size);
    if (p <= 0.0) {
      m.setOnes();
    } else {
      for (Eigen::Index i = 0; i < m.size(); ++i)
        m.data()[i] = rng.uniform() < p ? 0.0 : keep_scale;
    }
    masks.push_back(std::move(m));
  }
  return masks;
}

DropoutMasks identity_dropout_masks(const LstmModel& model, int window, int batch_size) {
  DropoutMasks masks;
  for (const auto& layer : model.layers)
    masks.push_back(Matrix::Ones(layer.hidden(), static_cast<Eigen::Index>(window) * batch_size));
  return masks;
}

namespace {

// Forward over one LSTM layer + batch norm + dropout. `input` is F x (W*B)
// timestep-major. Returns the masked, normalized activations with the same
// layout. When `mutable_norm` is set, batch statistics are folded into its
// running statistics.
Matrix layer_forward(const LstmLayerParams& p, const BatchNormParams& bn, const Matrix& input,
                     int window, int batch, const ForwardOptions& opts, const Matrix* mask,
                     double momentum, double epsilon, BatchNormParams* mutable_norm,
                     LayerCache* cache) {
  const int H = p.hidden();
  const Eigen::Index cols = input.cols();

  Matrix gates(4 * H, cols);
  gates.noalias() = p.W * input;
  gates.colwise() += p.b;

  Matrix h_raw(H, cols), cells(H, cols), tanh_c(H, cols);
  Matrix h = Matrix::Zero(H, batch);
  Matrix c = Matrix::Zero(H, batch);
  for (int t = 0; t < window; ++t) {
    auto g_t = gates.middleCols(static_cast<Eigen::Index>(t) * batch, batch);
    g_t.noalias() += p.U * h;
    auto i_g = g_t.topRows(H).array();
    auto f_g = g_t.middleRows(H, H).array();
    auto g_g = g_t.middleRows(2 * H, H).array();
    auto o_g = g_t.bottomRows(H).array();
    i_g = 1.0 / (1.0 + (-i_g).exp());
    f_g = 1.0 / (1.0 + (-f_g).exp());
    g_g = g_g.tanh();
    o_g = 1.0 / (1.0 + (-o_g).exp());

    c = (f_g * c.array() + i_g * g_g).matrix();
    auto c_t = cells.middleCols(static_cast<Eigen::Index>(t) * batch, batch);
    c_t = c;
    auto tc_t = tanh_c.middleCols(static_cast<Eigen::Index>(t) * batch, batch);
    tc_t = c.array().tanh().matrix();
    h = (o_g * tc_t.array()).matrix();
    h_raw.middleCols(static_cast<Eigen::Index>(t) * batch, batch) = h;
  }

  // normalize per hidden feature over the pooled (batch x time) axis
  Vector mu(H), inv_std(H);
  if (opts.bn_batch_stats) {
    mu = h_raw.rowwise().mean();
    Vector var(H);
    for (int r = 0; r < H; ++r) {
      const double m = mu(r);
      var(r) = (h_raw.row(r).array() - m).square().mean();
    }
    inv_std = (var.array() + epsilon).rsqrt();
    if (opts.bn_update_running && mutable_norm != nullptr) {
      mutable_norm->running_mean = momentum * mutable_norm->running_mean + (1.0 - momentum) * mu;
      mutable_norm->running_var = momentum * mutable_norm->running_var + (1.0 - momentum) * var;
    }
  } else {
    mu = bn.running_mean;
    inv_std = (bn.running_var.array() + epsilon).rsqrt();
  }

  Matrix xhat(H, cols);
  for (int r = 0; r < H; ++r)
    xhat.row(r) = ((h_raw.row(r).array() - mu(r)) * inv_std(r)).matrix();

  Matrix out(H, cols);
  for (int r = 0; r < H; ++r)
    out.row(r) = (xhat.row(r).array() * bn.gamma(r) + bn.beta(r)).matrix();

  if (opts.dropout_active && mask != nullptr) out.array() *= mask->array();

  if (cache != nullptr) {
    cache->input = input;
    cache->gates = std::move(gates);
    cache->cells = std::move(cells);
    cache->tanh_c = std::move(tanh_c);
    cache->h_raw = std::move(h_raw);
    cache->xhat = std::move(xhat);
    cache->mu = std::move(mu);
    cache->inv_std = std::move(inv_std);
    cache->batch_stats = opts.bn_batch_stats;
  }
  return out;
}

Vector forward_core(const LstmModel& model, const Batch& batch, const ForwardOptions& opts,
                    const DropoutMasks* masks, LstmModel* mutable_model, ForwardCache* cache) {
  const int W = batch.window;
  const int B = batch.batch_size;
  if (W < 1 || B < 1) throw std::invalid_argument("forward: empty batch");
  if (batch.x.rows() != model.feature_count() ||
      batch.x.cols() != static_cast<Eigen::Index>(W) * B)
    throw std::invalid_argument("forward: batch shape mismatch");
  if (opts.dropout_active && masks == nullptr)
    throw std::invalid_argument("forward: dropout requested without masks");

  if (cache != nullptr) {
    cache->layers.assign(model.layers.size(), {});
    cache->masks.clear();
    cache->window = W;
    cache->batch_size = B;
  }

  Matrix current = batch.x;
  for (std::size_t l = 0; l < model.layers.size(); ++l) {
    const Matrix* mask = opts.dropout_active ? &(*masks)[l] : nullptr;
    BatchNormParams* mut_bn = mutable_model != nullptr ? &mutable_model->norms[l] : nullptr;
    current = layer_forward(model.layers[l], model.norms[l], current, W, B, opts, mask,
                            model.bn_momentum, model.bn_epsilon, mut_bn,
                            cache != nullptr ? &cache->layers[l] : nullptr);
    if (cache != nullptr && opts.dropout_active) cache->masks.push_back((*masks)[l]);
  }

  // dense head on the last timestep
  const Matrix last = current.middleCols(static_cast<Eigen::Index>(W - 1) * B, B);
  Matrix dense_out = model.dense.W * last;
  dense_out.colwise() += model.dense.b;
  Matrix out = model.output.W * dense_out;
  out.colwise() += model.output.b;

  if (cache != nullptr) {
    cache->last_step = last;
    cache->dense_out = std::move(dense_out);
    cache->predictions = out.row(0).transpose();
    return cache->predictions;
  }
  return out.row(0).transpose();
}

}  // namespace

Vector forward_with_masks(LstmModel& model, const Batch& batch, const ForwardOptions& opts,
                          const DropoutMasks& masks, ForwardCache* cache) {
  LstmModel* mut = opts.bn_update_running ? &model : nullptr;
  return forward_core(model, batch, opts, &masks, mut, cache);
}

Vector forward(LstmModel& model, const Batch& batch, const ForwardOptions& opts, Rng* rng,
               ForwardCache* cache) {
  if (opts.dropout_active) {
    if (rng == nullptr) throw std::invalid_argument("forward: dropout requires an rng");
    const DropoutMasks masks = draw_dropout_masks(model, batch.window, batch.batch_size, *rng);
    return forward_with_masks(model, batch, opts, masks, cache);
  }
  LstmModel* mut = opts.bn_update_running ? &model : nullptr;
  return forward_core(model, batch, opts, nullptr, mut, cache);
}

Vector forward_eval(const LstmModel& model, const Batch& batch) {
  return forward_core(model, batch, ForwardOptions::eval(), nullptr, nullptr, nullptr);
}

double mse_loss(const Vector& predictions, const Vector& targets) {
  if (predictions.size() != targets.size()) throw std::invalid_argument("mse: length mismatch");
  if (predictions.size() == 0) throw std::invalid_argument("mse: empty batch");
  return (predictions - targets).squaredNorm() / static_cast<double>(predictions.size());
}

double l2_penalty(const LstmModel& model) {
  double acc = 0.0;
  for (const auto& l : model.layers) acc += l.W.squaredNorm() + l.U.squaredNorm();
  return model.l2_lambda * acc;
}

void Gradients::set_zero() {
  for (auto& l : layers) {
    l.W.setZero();
    l.U.setZero();
    l.b.setZero();
    l.gamma.setZero();
    l.beta.setZero();
  }
  dense_W.setZero();
  dense_b.setZero();
  output_W.setZero();
  output_b.setZero();
}

double Gradients::squared_norm() const {
  double acc = 0.0;
  for (const auto& l : layers)
    acc += l.W.squaredNorm() + l.U.squaredNorm() + l.b.squaredNorm() + l.gamma.squaredNorm() +
           l.beta.squaredNorm();
  acc += dense_W.squaredNorm() + dense_b.squaredNorm();
  acc += output_W.squaredNorm() + output_b.squaredNorm();
  return acc;
}

Gradients make_gradients(const LstmModel& model) {
  Gradients g;
  for (std::size_t l = 0; l < model.layers.size(); ++l) {
    Gradients::Layer gl;
    gl.W = Matrix::Zero(model.layers[l].W.rows(), model.layers[l].W.cols());
    gl.U = Matrix::Zero(model.layers[l].U.rows(), model.layers[l].U.cols());
    gl.b = Vector::Zero(model.layers[l].b.size());
    gl.gamma = Vector::Zero(model.norms[l].gamma.size());
    gl.beta = Vector::Zero(model.norms[l].beta.size());
    g.layers.push_back(std::move(gl));
  }
  g.dense_W = Matrix::Zero(model.dense.W.rows(), model.dense.W.cols());
  g.dense_b = Vector::Zero(model.dense.b.size());
  g.output_W = Matrix::Zero(model.output.W.rows(), model.output.W.cols());
  g.output_b = Vector::Zero(model.output.b.size());
  return g;
}

std::vector<TensorView> tensor_views(LstmModel& model) {
  std::vector<TensorView> views;
  for (std::size_t l = 0; l < model.layers.size(); ++l) {
    const std::string tag = "layer" + std::to_string(l);
    views.push_back({tag + ".W", model.layers[l].W.data(), (std::size_t)model.layers[l].W.size()});
    views.push_back({tag + ".U", model.layers[l].U.data(), (std::size_t)model.layers[l].U.size()});
    views.push_back({tag + ".b", model.layers[l].b.data(), (std::size_t)model.layers[l].b.size()});
    views.push_back(
        {tag + ".gamma", model.norms[l].gamma.data(), (std::size_t)model.norms[l].gamma.size()});
    views.push_back(
        {tag + ".beta", model.norms[l].beta.data(), (std::size_t)model.norms[l].beta.size()});
  }
  views.push_back({"dense.W", model.dense.W.data(), (std::size_t)model.dense.W.size()});
  views.push_back({"dense.b", model.dense.b.data(), (std::size_t)model.dense.b.size()});
  views.push_back({"output.W", model.output.W.data(), (std::size_t)model.output.W.size()});
  views.push_back({"output.b", model.output.b.data(), (std::size_t)model.output.b.size()});
  return views;
}

std::vector<TensorView> tensor_views(Gradients& grads) {
  std::vector<TensorView> views;
  for (std::size_t l = 0; l < grads.layers.size(); ++l) {
    const std::string tag = "layer" + std::to_string(l);
    auto& gl = grads.layers[l];
    views.push_back({tag + ".W", gl.W.data(), (std::size_t)gl.W.size()});
    views.push_back({tag + ".U", gl.U.data(), (std::size_t)gl.U.size()});
    views.push_back({tag + ".b", gl.b.data(), (std::size_t)gl.b.size()});
    views.push_back({tag + ".gamma", gl.gamma.data(), (std::size_t)gl.gamma.size()});
    views.push_back({tag + ".beta", gl.beta.data(), (std::size_t)gl.beta.size()});
  }
  views.push_back({"dense.W", grads.dense_W.data(), (std::size_t)grads.dense_W.size()});
  views.push_back({"dense.b", grads.dense_b.data(), (std::size_t)grads.dense_b.size()});
  views.push_back({"output.W", grads.output_W.data(), (std::size_t)grads.output_W.size()});
  views.push_back({"output.b", grads.output_b.data(), (std::size_t)grads.output_b.size()});
  return views;
}

Gradients backward(const LstmModel& model, const ForwardCache& cache, const Vector& dpred) {
  const int W = cache.window;
  const int B = cache.batch_size;
  if (cache.layers.size() != model.layers.size() || W < 1 || B < 1)
    throw std::invalid_argument("backward: stale or missing cache");
  if (dpred.size() != B) throw std::invalid_argument("backward: loss gradient length mismatch");

  Gradients grads = make_gradients(model);
  const Eigen::Index cols = static_cast<Eigen::Index>(W) * B;

  // output layer
  const Eigen::RowVectorXd dout = dpred.transpose();
  grads.output_W.noalias() = dout * cache.dense_out.transpose();
  grads.output_b(0) = dpred.sum();
  Matrix d_dense = model.output.W.transpose() * dout;  // d x B

  // dense hidden (linear)
  grads.dense_W.noalias() = d_dense * cache.last_step.transpose();
  grads.dense_b = d_dense.rowwise().sum();
  Matrix d_last = model.dense.W.transpose() * d_dense;  // H x B

  // gradient w.r.t. the top layer's masked output: only the final timestep
  // receives head gradient directly
  const int top = static_cast<int>(model.layers.size()) - 1;
  Matrix d_out = Matrix::Zero(model.layers[top].hidden(), cols);
  d_out.middleCols(static_cast<Eigen::Index>(W - 1) * B, B) = d_last;

  for (int l = top; l >= 0; --l) {
    const LayerCache& lc = cache.layers[l];
    const LstmLayerParams& p = model.layers[l];
    const BatchNormParams& bn = model.norms[l];
    const int H = p.hidden();

    // dropout
    Matrix d_bn = cache.masks.empty() ? std::move(d_out)
                                      : Matrix(d_out.cwiseProduct(cache.masks[l]));

    // batch norm; the batch-statistics path couples every column
    Matrix d_hraw(H, cols);
    auto& gl = grads.layers[l];
    for (int r = 0; r < H; ++r) {
      const auto dy = d_bn.row(r).array();
      const auto xh = lc.xhat.row(r).array();
      gl.gamma(r) = (dy * xh).sum();
      gl.beta(r) = dy.sum();
      const double s = lc.inv_std(r);
      if (lc.batch_stats) {
        const double n = static_cast<double>(cols);
        const auto dxhat = dy * bn.gamma(r);
        const double sum_dxhat = dxhat.sum();
        const double sum_dxhat_xh = (dxhat * xh).sum();
        d_hraw.row(r) = ((s / n) * (n * dxhat - sum_dxhat - xh * sum_dxhat_xh)).matrix();
      } else {
        d_hraw.row(r) = (dy * bn.gamma(r) * s).matrix();
      }
    }

    // unrolled cell recurrence, last timestep first
    Matrix d_pre(4 * H, cols);
    Matrix dh_next = Matrix::Zero(H, B);
    Matrix dc_next = Matrix::Zero(H, B);
    for (int t = W - 1; t >= 0; --t) {
      const Eigen::Index off = static_cast<Eigen::Index>(t) * B;
      const auto g_t = lc.gates.middleCols(off, B);
      const auto i_g = g_t.topRows(H).array();
      const auto f_g = g_t.middleRows(H, H).array();
      const auto g_g = g_t.middleRows(2 * H, H).array();
      const auto o_g = g_t.bottomRows(H).array();
      const auto tc = lc.tanh_c.middleCols(off, B).array();

      Eigen::ArrayXXd dh = d_hraw.middleCols(off, B).array() + dh_next.array();
      Eigen::ArrayXXd dc = dh * o_g * (1.0 - tc.square()) + dc_next.array();
      const Eigen::ArrayXXd do_ = dh * tc;

      Eigen::ArrayXXd c_prev(H, B);
      if (t > 0)
        c_prev = lc.cells.middleCols(off - B, B).array();
      else
        c_prev.setZero();

      auto d_pre_t = d_pre.middleCols(off, B);
      d_pre_t.topRows(H) = ((dc * g_g) * i_g * (1.0 - i_g)).matrix();            // input gate
      d_pre_t.middleRows(H, H) = ((dc * c_prev) * f_g * (1.0 - f_g)).matrix();   // forget gate
      d_pre_t.middleRows(2 * H, H) = ((dc * i_g) * (1.0 - g_g.square())).matrix();  // candidate
      d_pre_t.bottomRows(H) = (do_ * o_g * (1.0 - o_g)).matrix();                // output gate

      dh_next.noalias() = p.U.transpose() * d_pre_t;
      dc_next = (dc * f_g).matrix();
    }

    // recurrent inputs are the raw h states shifted one step right
    Matrix h_prev = Matrix::Zero(H, cols);
    if (W > 1)
      h_prev.rightCols(cols - B) = lc.h_raw.leftCols(cols - B);

    gl.W.noalias() = d_pre * lc.input.transpose();
    gl.W += 2.0 * model.l2_lambda * p.W;
    gl.U.noalias() = d_pre * h_prev.transpose();
    gl.U += 2.0 * model.l2_lambda * p.U;
    gl.b = d_pre.rowwise().sum();

    if (l > 0) d_out = p.W.transpose() * d_pre;
  }

  return grads;
}

}  // namespace netload::nn
