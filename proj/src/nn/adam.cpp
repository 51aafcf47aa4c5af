#include "netload/nn/adam.hpp"

#include <cmath>
#include <stdexcept>

namespace netload::nn {

AdamState make_adam_state(const LstmModel& model, const AdamParams& hyper) {
  AdamState s;
  s.m = make_gradients(model);
  s.v = make_gradients(model);
  s.step = 0;
  s.hyper = hyper;
  return s;
}

namespace {

void update_span(double* param, const double* grad, double* m, double* v, std::size_t n,
                 long step, const AdamParams& hp) {
  const double bc1 = 1.0 - std::pow(hp.beta1, static_cast<double>(step));
  const double bc2 = 1.0 - std::pow(hp.beta2, static_cast<double>(step));
  Eigen::Map<Eigen::ArrayXd> pm(param, static_cast<Eigen::Index>(n));
  Eigen::Map<const Eigen::ArrayXd> gm(grad, static_cast<Eigen::Index>(n));
  Eigen::Map<Eigen::ArrayXd> mm(m, static_cast<Eigen::Index>(n));
  Eigen::Map<Eigen::ArrayXd> vm(v, static_cast<Eigen::Index>(n));
  mm = hp.beta1 * mm + (1.0 - hp.beta1) * gm;
  vm = hp.beta2 * vm + (1.0 - hp.beta2) * gm.square();
  pm -= hp.learning_rate * (mm / bc1) / ((vm / bc2).sqrt() + hp.epsilon);
}

}  // namespace

void adam_update(Eigen::Ref<Matrix> param, const Matrix& grad, Matrix& m, Matrix& v,
                 long step, const AdamParams& hp) {
  if (grad.rows() != param.rows() || grad.cols() != param.cols())
    throw std::invalid_argument("adam_update: shape mismatch");
  if (m.rows() != param.rows() || m.cols() != param.cols()) m = Matrix::Zero(param.rows(), param.cols());
  if (v.rows() != param.rows() || v.cols() != param.cols()) v = Matrix::Zero(param.rows(), param.cols());
  update_span(param.data(), grad.data(), m.data(), v.data(),
              static_cast<std::size_t>(param.size()), step, hp);
}

void adam_step(LstmModel& model, const Gradients& grads, AdamState& state) {
  ++state.step;
  auto params = tensor_views(model);
  auto g = tensor_views(const_cast<Gradients&>(grads));
  auto m = tensor_views(state.m);
  auto v = tensor_views(state.v);
  if (params.size() != g.size()) throw std::invalid_argument("adam_step: gradient layout mismatch");
  for (std::size_t i = 0; i < params.size(); ++i) {
    if (params[i].size != g[i].size) throw std::invalid_argument("adam_step: shape mismatch at " + params[i].name);
    update_span(params[i].data, g[i].data, m[i].data, v[i].data, params[i].size, state.step,
                state.hyper);
  }
}

}  // namespace netload::nn
