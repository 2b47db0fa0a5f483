#include "levyou/simulate.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <numbers>
#include <ostream>
#include <random>
#include <thread>

#include "levyou/errors.hpp"
#include "levyou/io.hpp"

namespace levyou {

namespace {

constexpr double kEulerGamma = 0.57721566490153286061;

std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t chunk_seed(std::uint64_t seed, long chunk) {
  return splitmix64(seed ^ splitmix64(static_cast<std::uint64_t>(chunk)));
}

struct Prepared {
  Eigen::MatrixXd flow_t;
  Eigen::MatrixXd noise;  // Q_t^{1/2} (exact) or (Q dt)^{1/2} (Euler)
  Eigen::VectorXd drift_correction;
  std::vector<double> weights;
  double rate = 0;
  double dt = 0;
  long steps = 0;
};

}  // namespace

int worker_count(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("LEVYOU_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

StableIncrement::StableIncrement(double alpha, double c) : alpha_(alpha) {
  if (alpha == 1.0) {
    gamma_ = c * std::numbers::pi / 2;
    shift_ = (2 / std::numbers::pi) * gamma_ * std::log(gamma_) + c * (1 - kEulerGamma);
    return;
  }
  const double tan_pa = std::tan(std::numbers::pi * alpha / 2);
  gamma_ = std::pow(-c * std::tgamma(-alpha) * std::cos(std::numbers::pi * alpha / 2), 1.0 / alpha);
  shift_ = c / (alpha - 1);
  b_ = std::atan(tan_pa) / alpha;
  s_ = std::pow(1 + tan_pa * tan_pa, 1.0 / (2 * alpha));
}

double StableIncrement::operator()(double V, double W) const {
  if (alpha_ == 1.0) {
    const double half = std::numbers::pi / 2;
    const double X = (2 / std::numbers::pi) * ((half + V) * std::tan(V) - std::log(half * W * std::cos(V) / (half + V)));
    return gamma_ * X + shift_;
  }
  const double X = s_ * std::sin(alpha_ * (V + b_)) / std::pow(std::cos(V), 1.0 / alpha_) *
                   std::pow(std::cos(V - alpha_ * (V + b_)) / W, (1 - alpha_) / alpha_);
  return gamma_ * X + shift_;
}

double stable_increment(double alpha, double c, double V, double W) { return StableIncrement(alpha, c)(V, W); }

Eigen::MatrixXd sample_transition(const OuModel& model, double t, const Eigen::VectorXd& x, long N,
                                  const SampleOptions& opts) {
  const int d = model.dim();
  if (x.size() != d) throw Error(ErrorKind::InvalidArgument, "start point dimension mismatch");
  if (!(t >= 0) || N < 0) throw Error(ErrorKind::InvalidArgument, "need t >= 0 and N >= 0");
  Eigen::MatrixXd out(N, d);
  const auto& pi = model.pi();
  const bool stable = pi.is_stable();

  Prepared prep;
  prep.flow_t = model.flow(t);
  if (stable) {
    prep.dt = opts.time_step > 0 ? opts.time_step : t / 1024.0;
    prep.steps = t > 0 ? static_cast<long>(std::ceil(t / prep.dt - 1e-12)) : 0;
    if (prep.steps > 0) prep.dt = t / static_cast<double>(prep.steps);
    prep.noise = psd_sqrt(model.Q() * prep.dt);
  } else {
    prep.noise = psd_sqrt(gram_qt(model.Q(), model.B(), t));
    prep.drift_correction =
        model.B().inverse() * (prep.flow_t - Eigen::MatrixXd::Identity(d, d)) * pi.small_jump_mean();
    for (const auto& a : pi.atoms()) prep.weights.push_back(a.weight);
    prep.rate = pi.total_mass();
  }

  const long chunks = (N + kSampleChunk - 1) / kSampleChunk;
  auto run_chunk = [&](long chunk) {
    std::mt19937_64 rng(chunk_seed(opts.seed, chunk));
    std::normal_distribution<double> normal;
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const long begin = chunk * kSampleChunk;
    const long end = std::min(N, begin + kSampleChunk);
    Eigen::VectorXd z(d);
    if (stable) {
      const auto& st = pi.stable();
      std::vector<StableIncrement> incr;
      for (const auto& a : st.atoms) incr.emplace_back(st.alpha, prep.dt * a.weight);
      const Eigen::MatrixXd step = Eigen::MatrixXd::Identity(d, d) + prep.dt * model.B();
      std::exponential_distribution<double> expo(1.0);
      std::uniform_real_distribution<double> angle(-std::numbers::pi / 2, std::numbers::pi / 2);
      Eigen::VectorXd X(d), next(d);
      for (long i = begin; i < end; ++i) {
        X = x;
        for (long s = 0; s < prep.steps; ++s) {
          for (int j = 0; j < d; ++j) z(j) = normal(rng);
          next.noalias() = step * X;
          next.noalias() += prep.noise * z;
          for (std::size_t k = 0; k < incr.size(); ++k) {
            double V = angle(rng);
            while (std::abs(V) >= std::numbers::pi / 2) V = angle(rng);
            double W = expo(rng);
            while (W <= 0) W = expo(rng);
            next += incr[k](V, W) * st.atoms[k].direction;
          }
          X.swap(next);
        }
        out.row(i) = X.transpose();
      }
      return;
    }
    std::poisson_distribution<long> count(prep.rate * t);
    std::discrete_distribution<int> pick(prep.weights.begin(), prep.weights.end());
    for (long i = begin; i < end; ++i) {
      for (int j = 0; j < d; ++j) z(j) = normal(rng);
      Eigen::VectorXd X = prep.flow_t * x + prep.noise * z;
      if (!prep.weights.empty()) {
        X -= prep.drift_correction;
        const long k = prep.rate * t > 0 ? count(rng) : 0;
        for (long r = 0; r < k; ++r) {
          const double s = t * unit(rng);
          X += model.flow(t - s) * pi.atoms()[pick(rng)].location;
        }
      }
      out.row(i) = X.transpose();
    }
  };

  const int workers = std::min<long>(worker_count(opts.threads), std::max(1L, chunks));
  if (workers <= 1) {
    for (long c = 0; c < chunks; ++c) run_chunk(c);
  } else {
    std::atomic<long> next{0};
    std::vector<std::thread> pool;
    std::exception_ptr failure;
    std::mutex failure_mutex;
    for (int w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        try {
          for (long c = next++; c < chunks; c = next++) run_chunk(c);
        } catch (...) {
          std::lock_guard<std::mutex> lock(failure_mutex);
          failure = std::current_exception();
        }
      });
    for (auto& th : pool) th.join();
    if (failure) std::rethrow_exception(failure);
  }
  return out;
}

cplx empirical_cf(const Eigen::MatrixXd& samples, const Eigen::VectorXd& xi) {
  const Eigen::VectorXd u = samples * xi;
  double re = 0, im = 0;
  for (Eigen::Index i = 0; i < u.size(); ++i) {
    re += std::cos(u(i));
    im += std::sin(u(i));
  }
  const double n = static_cast<double>(u.size());
  return {re / n, im / n};
}

McEstimate mc_semigroup_apply(const OuModel& model, double t, const Eigen::VectorXd& x,
                              const std::function<double(const Eigen::VectorXd&)>& f, long N,
                              const SampleOptions& opts) {
  if (N < 2) throw Error(ErrorKind::InvalidArgument, "need at least two samples");
  const Eigen::MatrixXd s = sample_transition(model, t, x, N, opts);
  double mean = 0, m2 = 0;
  for (long i = 0; i < N; ++i) {
    const double v = f(s.row(i).transpose());
    const double delta = v - mean;
    mean += delta / static_cast<double>(i + 1);
    m2 += delta * (v - mean);
  }
  return {mean, std::sqrt(m2 / static_cast<double>(N - 1) / static_cast<double>(N))};
}

void write_samples_csv(std::ostream& os, const Eigen::MatrixXd& samples) {
  for (Eigen::Index j = 0; j < samples.cols(); ++j) os << (j ? "," : "") << 'x' << (j + 1);
  os << '\n';
  char buf[40];
  for (Eigen::Index i = 0; i < samples.rows(); ++i) {
    for (Eigen::Index j = 0; j < samples.cols(); ++j) {
      std::snprintf(buf, sizeof buf, "%.17g", samples(i, j));
      os << (j ? "," : "") << buf;
    }
    os << '\n';
  }
}

std::string sample_metadata_json(std::uint64_t seed, long N, double t, const std::string& model_hash) {
  nlohmann::json j{{"seed", seed}, {"N", N}, {"t", t}, {"model_hash", model_hash}};
  return dump_json(j);
}

}  // namespace levyou
