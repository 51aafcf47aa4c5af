#include "netload/nn/lstm.hpp"

#include <cmath>
#include <stdexcept>

namespace netload::nn {

LstmLayerParams make_lstm_layer(int input, int hidden, Rng& rng) {
  if (input < 1 || hidden < 1) throw std::invalid_argument("layer sizes must be >= 1");
  LstmLayerParams p;
  const double wlim = std::sqrt(6.0 / (input + 4 * hidden));
  const double ulim = std::sqrt(6.0 / (hidden + 4 * hidden));
  p.W.resize(4 * hidden, input);
  p.U.resize(4 * hidden, hidden);
  for (Eigen::Index i = 0; i < p.W.size(); ++i) p.W.data()[i] = rng.uniform(-wlim, wlim);
  for (Eigen::Index i = 0; i < p.U.size(); ++i) p.U.data()[i] = rng.uniform(-ulim, ulim);
  p.b = Vector::Zero(4 * hidden);
  p.b.segment(hidden, hidden).setOnes();  // forget gate bias
  return p;
}

void lstm_cell_forward(const LstmLayerParams& p, const Matrix& x, const Matrix& h,
                       const Matrix& c, Matrix& h_out, Matrix& c_out, Matrix& gates,
                       Matrix& tanh_c) {
  const int H = p.hidden();
  if (x.rows() != p.input() || h.rows() != H || c.rows() != H || x.cols() != h.cols() ||
      x.cols() != c.cols())
    throw std::invalid_argument("lstm_cell_forward: shape mismatch");

  gates.resize(4 * H, x.cols());
  gates.noalias() = p.W * x;
  gates.noalias() += p.U * h;
  gates.colwise() += p.b;

  auto i_g = gates.topRows(H);
  auto f_g = gates.middleRows(H, H);
  auto g_g = gates.middleRows(2 * H, H);
  auto o_g = gates.bottomRows(H);
  i_g = i_g.unaryExpr([](double v) { return sigmoid(v); });
  f_g = f_g.unaryExpr([](double v) { return sigmoid(v); });
  g_g = g_g.unaryExpr([](double v) { return std::tanh(v); });
  o_g = o_g.unaryExpr([](double v) { return sigmoid(v); });

  c_out = f_g.cwiseProduct(c) + i_g.cwiseProduct(g_g);
  tanh_c = c_out.unaryExpr([](double v) { return std::tanh(v); });
  h_out = o_g.cwiseProduct(tanh_c);
}

void lstm_cell_forward(const LstmLayerParams& p, const Vector& x, const Vector& h,
                       const Vector& c, Vector& h_out, Vector& c_out) {
  Matrix hm, cm, gates, tanh_c;
  lstm_cell_forward(p, Matrix(x), Matrix(h), Matrix(c), hm, cm, gates, tanh_c);
  h_out = hm.col(0);
  c_out = cm.col(0);
}

}  // namespace netload::nn
