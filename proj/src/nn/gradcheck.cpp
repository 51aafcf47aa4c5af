#include "netload/nn/gradcheck.hpp"

#include <cmath>

namespace netload::nn {

double gradcheck_rel_error(double analytic, double numeric) {
  const double denom = std::max(std::abs(analytic), std::abs(numeric));
  if (denom < 1e-8) return 0.0;  // below the finite-difference noise floor
  return std::abs(analytic - numeric) / denom;
}

GradCheckResult gradient_check(LstmModel& model, const Batch& batch, double step,
                               std::uint64_t mask_seed) {
  Rng mask_rng(mask_seed);
  const DropoutMasks masks =
      draw_dropout_masks(model, batch.window, batch.batch_size, mask_rng);

  ForwardOptions opts;
  opts.dropout_active = true;
  opts.bn_batch_stats = true;
  opts.bn_update_running = false;

  ForwardCache cache;
  const Vector pred = forward_with_masks(model, batch, opts, masks, &cache);
  const Vector dpred =
      2.0 / static_cast<double>(batch.batch_size) * (pred - batch.y);
  Gradients analytic = backward(model, cache, dpred);

  auto loss_at = [&]() {
    const Vector p = forward_with_masks(model, batch, opts, masks, nullptr);
    return mse_loss(p, batch.y) + l2_penalty(model);
  };

  auto params = tensor_views(model);
  auto grads = tensor_views(analytic);

  GradCheckResult result;
  for (std::size_t g = 0; g < params.size(); ++g) {
    for (std::size_t k = 0; k < params[g].size; ++k) {
      double& theta = params[g].data[k];
      const double saved = theta;
      theta = saved + step;
      const double loss_plus = loss_at();
      theta = saved - step;
      const double loss_minus = loss_at();
      theta = saved;
      const double numeric = (loss_plus - loss_minus) / (2.0 * step);
      const double err = gradcheck_rel_error(grads[g].data[k], numeric);
      if (err > result.max_rel_error) {
        result.max_rel_error = err;
        result.worst_parameter = params[g].name + "[" + std::to_string(k) + "]";
      }
    }
  }
  return result;
}

}  // namespace netload::nn
