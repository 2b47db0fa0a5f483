#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>

#include "levyou/model.hpp"

namespace levyou {

struct SampleOptions {
  std::uint64_t seed = 20240601;
  // Euler step for stable jumps; 0 selects t / 1024.
  double time_step = 0;
  // Worker cap; 0 reads LEVYOU_THREADS (default: hardware concurrency).
  int threads = 0;
};

inline constexpr long kSampleChunk = 10000;

// N draws of X_t started at x, one per row. Gaussian and finite-jump models are
// sampled exactly; stable jumps use an Euler scheme with Chambers-Mallows-Stuck
// increments. Each chunk of 10^4 samples has its own seed derived from (seed, chunk).
Eigen::MatrixXd sample_transition(const OuModel& model, double t, const Eigen::VectorXd& x, long N,
                                  const SampleOptions& opts = {});

// Chambers-Mallows-Stuck draw with the constants for one (alpha, scale) pair precomputed.
class StableIncrement {
 public:
  StableIncrement(double alpha, double scale_dt);
  // v uniform on (-pi/2, pi/2), w standard exponential.
  double operator()(double v_uniform, double w_exponential) const;

 private:
  double alpha_;
  double gamma_ = 0, shift_ = 0, b_ = 0, s_ = 0;
};

// One-dimensional increment with exponent dt * weight * int (e^{iru} - 1 - iru 1_{r<=1}) r^{-1-alpha} dr.
double stable_increment(double alpha, double scale_dt, double v_uniform, double w_exponential);

cplx empirical_cf(const Eigen::MatrixXd& samples, const Eigen::VectorXd& xi);

struct McEstimate {
  double mean = 0;
  double stderr_ = 0;
};
McEstimate mc_semigroup_apply(const OuModel& model, double t, const Eigen::VectorXd& x,
                              const std::function<double(const Eigen::VectorXd&)>& f, long N,
                              const SampleOptions& opts = {});

int worker_count(int requested);

void write_samples_csv(std::ostream& os, const Eigen::MatrixXd& samples);
std::string sample_metadata_json(std::uint64_t seed, long N, double t, const std::string& model_hash);

}  // namespace levyou
