#include "netload/nn/serialize.hpp"

#include <istream>
#include <ostream>

namespace netload::nn {

namespace {

constexpr std::uint32_t kModelMagic = 0x4d464c4e;  // "NLFM"
constexpr std::uint32_t kModelVersion = 1;

void write_u32(std::ostream& out, std::uint32_t v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

std::uint32_t read_u32(std::istream& in) {
  std::uint32_t v = 0;
  in.read(reinterpret_cast<char*>(&v), sizeof v);
  if (!in) throw SerializeError("truncated model stream");
  return v;
}

}  // namespace

void write_f64(std::ostream& out, double v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

void write_i64(std::ostream& out, std::int64_t v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

void write_string(std::ostream& out, const std::string& s) {
  write_i64(out, static_cast<std::int64_t>(s.size()));
  out.write(s.data(), static_cast<std::streamsize>(s.size()));
}

double read_f64(std::istream& in) {
  double v = 0;
  in.read(reinterpret_cast<char*>(&v), sizeof v);
  if (!in) throw SerializeError("truncated model stream");
  return v;
}

std::int64_t read_i64(std::istream& in) {
  std::int64_t v = 0;
  in.read(reinterpret_cast<char*>(&v), sizeof v);
  if (!in) throw SerializeError("truncated model stream");
  return v;
}

std::string read_string(std::istream& in) {
  const std::int64_t n = read_i64(in);
  if (n < 0 || n > (1 << 20)) throw SerializeError("bad string length");
  std::string s(static_cast<std::size_t>(n), '\0');
  in.read(s.data(), n);
  if (!in) throw SerializeError("truncated model stream");
  return s;
}

void write_matrix(std::ostream& out, const Matrix& m) {
  write_i64(out, m.rows());
  write_i64(out, m.cols());
  out.write(reinterpret_cast<const char*>(m.data()),
            static_cast<std::streamsize>(sizeof(double) * static_cast<std::size_t>(m.size())));
}

void write_vector(std::ostream& out, const Vector& v) {
  write_i64(out, v.size());
  out.write(reinterpret_cast<const char*>(v.data()),
            static_cast<std::streamsize>(sizeof(double) * static_cast<std::size_t>(v.size())));
}

Matrix read_matrix(std::istream& in) {
  const std::int64_t rows = read_i64(in);
  const std::int64_t cols = read_i64(in);
  if (rows < 0 || cols < 0 || rows * cols > (std::int64_t(1) << 30))
    throw SerializeError("bad matrix shape");
  Matrix m(rows, cols);
  in.read(reinterpret_cast<char*>(m.data()),
          static_cast<std::streamsize>(sizeof(double) * static_cast<std::size_t>(m.size())));
  if (!in) throw SerializeError("truncated model stream");
  return m;
}

Vector read_vector(std::istream& in) {
  const std::int64_t n = read_i64(in);
  if (n < 0 || n > (std::int64_t(1) << 30)) throw SerializeError("bad vector length");
  Vector v(n);
  in.read(reinterpret_cast<char*>(v.data()),
          static_cast<std::streamsize>(sizeof(double) * static_cast<std::size_t>(v.size())));
  if (!in) throw SerializeError("truncated model stream");
  return v;
}

void write_model(std::ostream& out, const LstmModel& model) {
  write_u32(out, kModelMagic);
  write_u32(out, kModelVersion);
  write_i64(out, static_cast<std::int64_t>(model.layers.size()));
  for (std::size_t l = 0; l < model.layers.size(); ++l) {
    write_matrix(out, model.layers[l].W);
    write_matrix(out, model.layers[l].U);
    write_vector(out, model.layers[l].b);
    write_vector(out, model.norms[l].gamma);
    write_vector(out, model.norms[l].beta);
    write_vector(out, model.norms[l].running_mean);
    write_vector(out, model.norms[l].running_var);
  }
  write_matrix(out, model.dense.W);
  write_vector(out, model.dense.b);
  write_matrix(out, model.output.W);
  write_vector(out, model.output.b);
  write_f64(out, model.dropout_rate);
  write_f64(out, model.l2_lambda);
  write_f64(out, model.bn_momentum);
  write_f64(out, model.bn_epsilon);
}

LstmModel read_model(std::istream& in) {
  if (read_u32(in) != kModelMagic) throw SerializeError("not a model stream");
  const std::uint32_t version = read_u32(in);
  if (version != kModelVersion)
    throw SerializeError("unsupported model version " + std::to_string(version));
  LstmModel model;
  const std::int64_t layers = read_i64(in);
  if (layers < 1 || layers > 64) throw SerializeError("bad layer count");
  for (std::int64_t l = 0; l < layers; ++l) {
    LstmLayerParams p;
    p.W = read_matrix(in);
    p.U = read_matrix(in);
    p.b = read_vector(in);
    BatchNormParams bn;
    bn.gamma = read_vector(in);
    bn.beta = read_vector(in);
    bn.running_mean = read_vector(in);
    bn.running_var = read_vector(in);
    model.layers.push_back(std::move(p));
    model.norms.push_back(std::move(bn));
  }
  model.dense.W = read_matrix(in);
  model.dense.b = read_vector(in);
  model.output.W = read_matrix(in);
  model.output.b = read_vector(in);
  model.dropout_rate = read_f64(in);
  model.l2_lambda = read_f64(in);
  model.bn_momentum = read_f64(in);
  model.bn_epsilon = read_f64(in);
  return model;
}

}  // namespace netload::nn
