#pragma once

#include <cstdint>
#include <vector>

#include "netload/dataset.hpp"
#include "netload/nn/adam.hpp"

namespace netload::nn {

struct TrainRecord {
  int epoch = 0;
  double train_loss = 0.0;  // mean squared error over the epoch's batches
  double val_loss = 0.0;    // eval-mode MSE on the validation set
};

struct TrainConfig {
  int epochs = 100;
  int batch_size = 32;
  std::uint64_t seed = 0;
  int early_stop_patience = 0;  // 0 disables early stopping
  AdamParams adam;
};

// Assemble a timestep-major batch from sample indices of a WindowSet.
Batch gather_batch(const WindowSet& samples, const std::vector<std::size_t>& idx);

// Eval-mode predictions over a whole WindowSet, chunked internally.
Vector predict(const LstmModel& model, const WindowSet& samples, int chunk = 512);

// Seeded shuffled minibatch training with Adam. When early stopping is
// enabled the best-validation snapshot (parameters and running statistics)
// is restored before returning.
std::vector<TrainRecord> train_epochs(LstmModel& model, const WindowSet& train_set,
                                      const WindowSet& val_set, const TrainConfig& cfg);

}  // namespace netload::nn
