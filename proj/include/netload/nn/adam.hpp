#pragma once

#include "netload/nn/model.hpp"

namespace netload::nn {

struct AdamParams {
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

// Moment accumulators mirror the model parameter shapes; Gradients reuses the
// right structure for both.
struct AdamState {
  Gradients m;
  Gradients v;
  long step = 0;
  AdamParams hyper;
};

AdamState make_adam_state(const LstmModel& model, const AdamParams& hyper = {});

// Single-tensor update, exposed for targeted tests.
void adam_update(Eigen::Ref<Matrix> param, const Matrix& grad, Matrix& m, Matrix& v,
                 long step, const AdamParams& hp);

// Standard bias-corrected update over every parameter group.
void adam_step(LstmModel& model, const Gradients& grads, AdamState& state);

}  // namespace netload::nn
