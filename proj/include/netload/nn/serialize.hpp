#pragma once

#include <iosfwd>

#include "netload/nn/model.hpp"

namespace netload::nn {

struct SerializeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Raw little-endian doubles; round-trips are bit-exact.
void write_matrix(std::ostream& out, const Matrix& m);
void write_vector(std::ostream& out, const Vector& v);
Matrix read_matrix(std::istream& in);
Vector read_vector(std::istream& in);
void write_f64(std::ostream& out, double v);
void write_i64(std::ostream& out, std::int64_t v);
void write_string(std::ostream& out, const std::string& s);
double read_f64(std::istream& in);
std::int64_t read_i64(std::istream& in);
std::string read_string(std::istream& in);

// Versioned model container: shapes, weights, batch-norm parameters and
// running statistics, regularization settings.
void write_model(std::ostream& out, const LstmModel& model);
LstmModel read_model(std::istream& in);

}  // namespace netload::nn
