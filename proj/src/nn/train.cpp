#include "netload/nn/train.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace netload::nn {

Batch gather_batch(const WindowSet& samples, const std::vector<std::size_t>& idx) {
  if (idx.empty()) throw std::invalid_argument("gather_batch: empty index list");
  const int W = samples.window;
  const auto B = static_cast<int>(idx.size());
  Batch batch;
  batch.window = W;
  batch.batch_size = B;
  batch.x.resize(samples.x.rows(), static_cast<Eigen::Index>(W) * B);
  batch.y.resize(B);
  for (int j = 0; j < B; ++j) {
    const std::size_t s = idx[static_cast<std::size_t>(j)];
    for (int t = 0; t < W; ++t)
      batch.x.col(static_cast<Eigen::Index>(t) * B + j) =
          samples.x.col(static_cast<Eigen::Index>(s) * W + t);
    batch.y(j) = samples.y(static_cast<Eigen::Index>(s));
  }
  return batch;
}

Vector predict(const LstmModel& model, const WindowSet& samples, int chunk) {
  const std::size_t n = samples.count();
  Vector out(static_cast<Eigen::Index>(n));
  std::vector<std::size_t> idx;
  for (std::size_t start = 0; start < n; start += static_cast<std::size_t>(chunk)) {
    const std::size_t stop = std::min(n, start + static_cast<std::size_t>(chunk));
    idx.resize(stop - start);
    std::iota(idx.begin(), idx.end(), start);
    const Batch batch = gather_batch(samples, idx);
    out.segment(static_cast<Eigen::Index>(start), static_cast<Eigen::Index>(stop - start)) =
        forward_eval(model, batch);
  }
  return out;
}

std::vector<TrainRecord> train_epochs(LstmModel& model, const WindowSet& train_set,
                                      const WindowSet& val_set, const TrainConfig& cfg) {
  if (cfg.epochs < 0) throw std::invalid_argument("epochs must be >= 0");
  if (cfg.epochs == 0) return {};
  if (train_set.count() == 0 || val_set.count() == 0)
    throw std::invalid_argument("train and validation sets must be non-empty");
  if (cfg.batch_size < 1) throw std::invalid_argument("batch size must be >= 1");

  Rng root(cfg.seed);
  Rng shuffle_rng = root.fork(1);
  Rng dropout_rng = root.fork(2);
  AdamState adam = make_adam_state(model, cfg.adam);

  std::vector<std::size_t> order(train_set.count());
  std::iota(order.begin(), order.end(), 0);

  std::vector<TrainRecord> records;
  records.reserve(static_cast<std::size_t>(cfg.epochs));

  LstmModel best_model;
  double best_val = std::numeric_limits<double>::infinity();
  int stale = 0;

  std::vector<std::size_t> idx;
  for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
    shuffle(order, shuffle_rng);

    double sq_err = 0.0;
    std::size_t seen = 0;
    for (std::size_t start = 0; start < order.size();
         start += static_cast<std::size_t>(cfg.batch_size)) {
      const std::size_t stop =
          std::min(order.size(), start + static_cast<std::size_t>(cfg.batch_size));
      idx.assign(order.begin() + static_cast<std::ptrdiff_t>(start),
                 order.begin() + static_cast<std::ptrdiff_t>(stop));
      const Batch batch = gather_batch(train_set, idx);

      ForwardCache cache;
      const Vector pred = forward(model, batch, ForwardOptions::train(), &dropout_rng, &cache);
      const Vector err = pred - batch.y;
      sq_err += err.squaredNorm();
      seen += idx.size();

      const Vector dpred = 2.0 / static_cast<double>(idx.size()) * err;
      const Gradients grads = backward(model, cache, dpred);
      adam_step(model, grads, adam);
    }

    TrainRecord rec;
    rec.epoch = epoch;
    rec.train_loss = sq_err / static_cast<double>(seen);
    rec.val_loss = mse_loss(predict(model, val_set), val_set.y);
    records.push_back(rec);

    if (cfg.early_stop_patience > 0) {
      if (rec.val_loss < best_val) {
        best_val = rec.val_loss;
        best_model = model;
        stale = 0;
      } else if (++stale >= cfg.early_stop_patience) {
        break;
      }
    }
  }

  if (cfg.early_stop_patience > 0 && std::isfinite(best_val)) model = best_model;
  return records;
}

}  // namespace netload::nn
