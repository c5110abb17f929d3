#include "distq/hci.hpp"

#include <cmath>
#include <numeric>

#include "distq/error.hpp"

namespace distq {

Table::Table(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.size() != rows * cols)
    throw Error(ErrorKind::InvalidArgument, "prob_model::Table", "data size does not match shape");
}

Table Table::from_rows(const std::vector<std::vector<double>>& rows) {
  if (rows.empty()) return Table();
  const std::size_t cols = rows.front().size();
  Table t(rows.size(), cols);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != cols)
      throw Error(ErrorKind::InvalidArgument, "prob_model::Table", "ragged rows");
    for (std::size_t c = 0; c < cols; ++c) t(r, c) = rows[r][c];
  }
  return t;
}

bool Table::row_stochastic(double tol) const noexcept {
  for (std::size_t r = 0; r < rows_; ++r) {
    double s = 0.0;
    for (double v : row(r)) {
      if (!(v >= 0.0)) return false;
      s += v;
    }
    if (std::abs(s - 1.0) > tol) return false;
  }
  return true;
}

HciModel::HciModel(std::vector<double> theta, std::vector<double> prior, Table lambda_given_theta,
                   std::vector<Table> y_given_lambda)
    : theta_(std::move(theta)),
      prior_(std::move(prior)),
      lambda_given_theta_(std::move(lambda_given_theta)),
      y_given_lambda_(std::move(y_given_lambda)) {
  const char* where = "prob_model::HciModel";
  if (theta_.empty() || theta_.size() != prior_.size())
    throw Error(ErrorKind::InvalidArgument, where, "theta grid and prior weights must match");
  const double mass = std::accumulate(prior_.begin(), prior_.end(), 0.0);
  if (std::abs(mass - 1.0) > 1e-12)
    throw Error(ErrorKind::InvalidArgument, where, "prior weights must sum to 1");
  if (lambda_given_theta_.rows() != theta_.size() || !lambda_given_theta_.row_stochastic())
    throw Error(ErrorKind::InvalidArgument, where, "p(lambda|theta) must be row-stochastic");
  for (const Table& t : y_given_lambda_)
    if (t.rows() != lambda_count() || !t.row_stochastic())
      throw Error(ErrorKind::InvalidArgument, where, "p(y|lambda) must be row-stochastic");
}

Table HciModel::pair_given_theta(std::size_t a, std::size_t b) const {
  const Table& ya = y_given_lambda_.at(a);
  const Table& yb = y_given_lambda_.at(b);
  Table out(theta_count(), ya.cols() * yb.cols());
  for (std::size_t t = 0; t < theta_count(); ++t)
    for (std::size_t l = 0; l < lambda_count(); ++l) {
      const double pl = lambda_given_theta_(t, l);
      if (pl == 0.0) continue;
      for (std::size_t i = 0; i < ya.cols(); ++i)
        for (std::size_t j = 0; j < yb.cols(); ++j)
          out(t, i * yb.cols() + j) += pl * ya(l, i) * yb(l, j);
    }
  return out;
}

Table HciModel::marginal_given_theta(std::size_t sensor) const {
  const Table& y = y_given_lambda_.at(sensor);
  Table out(theta_count(), y.cols());
  for (std::size_t t = 0; t < theta_count(); ++t)
    for (std::size_t l = 0; l < lambda_count(); ++l)
      for (std::size_t i = 0; i < y.cols(); ++i) out(t, i) += lambda_given_theta_(t, l) * y(l, i);
  return out;
}

}  // namespace distq
