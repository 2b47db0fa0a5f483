#pragma once

#include <Eigen/Dense>

#include <string>
#include <vector>

namespace levyou {

// Tensor grid on prod_j [-L_j, L_j) with nodes x_k = -L + k h, h = 2L/N, and
// dual frequencies xi_m = pi m / L for m = -N/2, ..., N/2 - 1.
class GridSpec {
 public:
  GridSpec() = default;
  GridSpec(std::vector<double> halfwidth, std::vector<int> points);
  static GridSpec uniform(int dim, double halfwidth, int points);

  int dim() const { return static_cast<int>(L_.size()); }
  const std::vector<double>& halfwidth() const { return L_; }
  const std::vector<int>& points() const { return N_; }
  double spacing(int axis) const { return 2.0 * L_[axis] / N_[axis]; }
  double cell_volume() const;
  long size() const;

  double node(int axis, int k) const { return -L_[axis] + k * spacing(axis); }
  // Frequency for storage slot k (FFT ordering: slot k holds m = k or k - N).
  double frequency(int axis, int k) const;
  int frequency_index(int axis, int k) const { return k < N_[axis] / 2 ? k : k - N_[axis]; }

  // Row-major flattening, last axis fastest.
  std::vector<int> unflatten(long flat) const;
  long flatten(const std::vector<int>& idx) const;
  Eigen::VectorXd node_at(long flat) const;
  Eigen::VectorXd frequency_at(long flat) const;

  bool operator==(const GridSpec&) const = default;

 private:
  std::vector<double> L_;
  std::vector<int> N_;
};

struct DensityField {
  GridSpec grid;
  Eigen::VectorXd values;  // row-major over grid nodes
  std::string label;

  double integral() const { return values.sum() * grid.cell_volume(); }
};

}  // namespace levyou
