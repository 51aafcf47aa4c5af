#pragma once

#include "netload/nn/model.hpp"

namespace netload::nn {

struct GradCheckResult {
  double max_rel_error = 0.0;
  std::string worst_parameter;  // e.g. "layer1.U(3,2)"
};

// Compares analytic gradients of (mse + l2) against central finite
// differences, parameter by parameter, under frozen dropout masks and
// batch-statistics normalization. Intended for small models only; cost is
// two forward passes per parameter.
GradCheckResult gradient_check(LstmModel& model, const Batch& batch, double step = 1e-5,
                               std::uint64_t mask_seed = 0);

// Relative error with the convention used by the checker: |a-n| scaled by
// max(|a|, |n|), zero when both are below the finite-difference noise floor.
double gradcheck_rel_error(double analytic, double numeric);

}  // namespace netload::nn
