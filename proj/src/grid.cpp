#include "levyou/grid.hpp"

#include <numbers>

#include "levyou/errors.hpp"

namespace levyou {

GridSpec::GridSpec(std::vector<double> halfwidth, std::vector<int> points)
    : L_(std::move(halfwidth)), N_(std::move(points)) {
  if (L_.empty() || L_.size() != N_.size())
    throw Error(ErrorKind::InvalidArgument, "grid halfwidth and point counts must have equal nonzero length");
  for (std::size_t j = 0; j < L_.size(); ++j) {
    if (!(L_[j] > 0)) throw Error(ErrorKind::InvalidArgument, "grid halfwidth must be positive");
    if (N_[j] < 2 || (N_[j] & (N_[j] - 1)) != 0)
      throw Error(ErrorKind::InvalidArgument, "grid point count must be a power of two >= 2");
  }
}

GridSpec GridSpec::uniform(int dim, double halfwidth, int points) {
  return GridSpec(std::vector<double>(dim, halfwidth), std::vector<int>(dim, points));
}

double GridSpec::cell_volume() const {
  double v = 1;
  for (int j = 0; j < dim(); ++j) v *= spacing(j);
  return v;
}

long GridSpec::size() const {
  long n = 1;
  for (int p : N_) n *= p;
  return n;
}

double GridSpec::frequency(int axis, int k) const {
  return std::numbers::pi * frequency_index(axis, k) / L_[axis];
}

std::vector<int> GridSpec::unflatten(long flat) const {
  std::vector<int> idx(dim());
  for (int j = dim() - 1; j >= 0; --j) {
    idx[j] = static_cast<int>(flat % N_[j]);
    flat /= N_[j];
  }
  return idx;
}

long GridSpec::flatten(const std::vector<int>& idx) const {
  long flat = 0;
  for (int j = 0; j < dim(); ++j) flat = flat * N_[j] + idx[j];
  return flat;
}

Eigen::VectorXd GridSpec::node_at(long flat) const {
  const auto idx = unflatten(flat);
  Eigen::VectorXd x(dim());
  for (int j = 0; j < dim(); ++j) x(j) = node(j, idx[j]);
  return x;
}

Eigen::VectorXd GridSpec::frequency_at(long flat) const {
  const auto idx = unflatten(flat);
  Eigen::VectorXd xi(dim());
  for (int j = 0; j < dim(); ++j) xi(j) = frequency(j, idx[j]);
  return xi;
}

}  // namespace levyou
