#pragma once

#include <Eigen/Dense>

#include "netload/rng.hpp"

namespace netload::nn {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Gate rows are stacked (input, forget, candidate, output), H rows each.
struct LstmLayerParams {
  Matrix W;  // 4H x F, input weights
  Matrix U;  // 4H x H, recurrent weights
  Vector b;  // 4H

  int hidden() const { return static_cast<int>(U.cols()); }
  int input() const { return static_cast<int>(W.cols()); }
};

// Glorot-uniform weights, forget-gate bias 1, other biases 0.
LstmLayerParams make_lstm_layer(int input, int hidden, Rng& rng);

inline double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

// One step of the cell recurrence on a column-per-sample batch.
// pre = W x + U h + b; i,f,o sigmoid; g tanh;
// c' = f (.) c + i (.) g; h' = o (.) tanh(c').
// `gates` receives the activated gate values (4H x B), `tanh_c` the tanh of
// the new cell state; both are consumed by backprop.
void lstm_cell_forward(const LstmLayerParams& p, const Matrix& x, const Matrix& h,
                       const Matrix& c, Matrix& h_out, Matrix& c_out, Matrix& gates,
                       Matrix& tanh_c);

// Convenience single-vector form.
void lstm_cell_forward(const LstmLayerParams& p, const Vector& x, const Vector& h,
                       const Vector& c, Vector& h_out, Vector& c_out);

}  // namespace netload::nn
