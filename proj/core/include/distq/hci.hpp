#pragma once

#include <vector>

#include "distq/table.hpp"

namespace distq {

/// Hierarchical conditional-independence model on finite grids:
/// theta -> lambda -> (Y_1, ..., Y_N), with the Y_i independent given lambda.
///
/// Only per-sensor tables p(y_i | lambda) are stored, so factorisation given
/// lambda holds by construction.
class HciModel {
 public:
  HciModel(std::vector<double> theta, std::vector<double> prior, Table lambda_given_theta,
           std::vector<Table> y_given_lambda);

  std::size_t theta_count() const noexcept { return theta_.size(); }
  std::size_t lambda_count() const noexcept { return lambda_given_theta_.cols(); }
  std::size_t sensor_count() const noexcept { return y_given_lambda_.size(); }

  const std::vector<double>& theta() const noexcept { return theta_; }
  const std::vector<double>& prior() const noexcept { return prior_; }
  const Table& lambda_given_theta() const noexcept { return lambda_given_theta_; }
  const Table& y_given_lambda(std::size_t sensor) const { return y_given_lambda_.at(sensor); }

  /// p(y_a, y_b | theta) = sum_lambda p(lambda|theta) p(y_a|lambda) p(y_b|lambda),
  /// as a table with rows indexed by theta and columns by ya * |Y_b| + yb.
  Table pair_given_theta(std::size_t a, std::size_t b) const;

  /// p(y_i | theta) for one sensor.
  Table marginal_given_theta(std::size_t sensor) const;

 private:
  std::vector<double> theta_;
  std::vector<double> prior_;
  Table lambda_given_theta_;
  std::vector<Table> y_given_lambda_;
};

}  // namespace distq
