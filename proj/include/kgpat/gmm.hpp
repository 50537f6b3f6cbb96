#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "kgpat/range_model.hpp"

namespace kgpat {

struct GmmOptions {
  int modes_max = 5;
  int restarts = 3;
  std::uint64_t seed = 0;
  int max_iterations = 200;
  double tolerance = 1e-6;       // stop when the log-likelihood gain drops below this
  double variance_floor = 1e-9;  // standardized units
  double noise_sigma = 1e-3;     // standardized units
  std::size_t min_samples = 20;
};

struct MixtureFit {
  std::vector<GaussianComponent> components;  // original units, sorted by mean
  double bic = 0.0;                           // on the standardized sample
  double log_likelihood = 0.0;
  std::uint64_t seed = 0;
  int modes = 0;
  double shift = 0.0;
  double scale = 1.0;
};

struct EmResult {
  std::vector<GaussianComponent> components;  // standardized units
  double log_likelihood = 0.0;
  std::vector<double> trace;  // log-likelihood after each iteration
  int iterations = 0;
};

/// One EM run with k-means++ seeding on an already standardized sample.
EmResult run_em(std::span<const double> x, int modes, std::mt19937_64& rng, const GmmOptions& options);

double bic(double log_likelihood, int modes, std::size_t n);

/// Fits mixtures for every (modes, restart) pair on the standardized,
/// shuffled, noise-augmented sample and returns the BIC minimum. nullopt when
/// the sample is smaller than `options.min_samples`.
std::optional<MixtureFit> fit_gmm(std::span<const double> values, const GmmOptions& options);
std::optional<MixtureFit> fit_gmm(std::span<const double> values, int modes_max, int restarts, std::uint64_t seed);

}  // namespace kgpat
