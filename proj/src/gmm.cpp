#include "kgpat/gmm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

namespace kgpat {

namespace {

double log_normal_pdf(double x, double mean, double variance) {
  double d = x - mean;
  return -0.5 * (std::log(2.0 * std::numbers::pi * variance) + d * d / variance);
}

double log_sum_exp(std::span<const double> v) {
  double m = *std::max_element(v.begin(), v.end());
  if (!std::isfinite(m)) return m;
  double s = 0;
  for (double a : v) s += std::exp(a - m);
  return m + std::log(s);
}

std::vector<double> kmeanspp_centers(std::span<const double> x, int k, std::mt19937_64& rng) {
  std::vector<double> centers;
  std::uniform_int_distribution<std::size_t> pick(0, x.size() - 1);
  centers.push_back(x[pick(rng)]);
  std::vector<double> d2(x.size());
  while (static_cast<int>(centers.size()) < k) {
    double total = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      double best = std::numeric_limits<double>::max();
      for (double c : centers) best = std::min(best, (x[i] - c) * (x[i] - c));
      d2[i] = best;
      total += best;
    }
    if (total <= 0) {
      centers.push_back(x[pick(rng)]);
      continue;
    }
    std::uniform_real_distribution<double> u(0.0, total);
    double r = u(rng);
    std::size_t i = 0;
    for (; i + 1 < x.size(); ++i) {
      r -= d2[i];
      if (r <= 0) break;
    }
    centers.push_back(x[i]);
  }
  return centers;
}

}  // namespace

EmResult run_em(std::span<const double> x, int modes, std::mt19937_64& rng, const GmmOptions& options) {
  const std::size_t n = x.size();
  const auto k = static_cast<std::size_t>(modes);
  EmResult result;

  auto centers = kmeanspp_centers(x, modes, rng);
  std::vector<double> sum(k, 0.0), sq(k, 0.0), cnt(k, 0.0);
  for (double v : x) {
    std::size_t best = 0;
    for (std::size_t j = 1; j < k; ++j) {
      if (std::fabs(v - centers[j]) < std::fabs(v - centers[best])) best = j;
    }
    cnt[best] += 1;
    sum[best] += v;
    sq[best] += v * v;
  }
  auto& comps = result.components;
  comps.resize(k);
  for (std::size_t j = 0; j < k; ++j) {
    double var = 1.0;
    if (cnt[j] > 1) {
      double m = sum[j] / cnt[j];
      var = sq[j] / cnt[j] - m * m;
    }
    comps[j] = {1.0 / static_cast<double>(k), centers[j], std::max(var, options.variance_floor)};
  }

  std::vector<double> resp(n * k);
  std::vector<double> logp(k);
  double previous = -std::numeric_limits<double>::infinity();
  for (int it = 0; it < options.max_iterations; ++it) {
    // E-step
    double ll = 0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < k; ++j) {
        logp[j] = std::log(comps[j].weight) + log_normal_pdf(x[i], comps[j].mean, comps[j].variance);
      }
      double lse = log_sum_exp(logp);
      ll += lse;
      for (std::size_t j = 0; j < k; ++j) resp[i * k + j] = std::exp(logp[j] - lse);
    }
    if (it > 0) result.trace.push_back(ll);
    result.log_likelihood = ll;
    result.iterations = it;
    if (it > 0 && ll - previous < options.tolerance) break;
    previous = ll;

    // M-step
    for (std::size_t j = 0; j < k; ++j) {
      double nk = 0, mu = 0;
      for (std::size_t i = 0; i < n; ++i) {
        nk += resp[i * k + j];
        mu += resp[i * k + j] * x[i];
      }
      if (nk <= std::numeric_limits<double>::min()) {
        comps[j].weight = std::numeric_limits<double>::min();
        continue;
      }
      mu /= nk;
      double var = 0;
      for (std::size_t i = 0; i < n; ++i) var += resp[i * k + j] * (x[i] - mu) * (x[i] - mu);
      comps[j] = {nk / static_cast<double>(n), mu, std::max(var / nk, options.variance_floor)};
    }
  }
  return result;
}

double bic(double log_likelihood, int modes, std::size_t n) {
  const int free_parameters = 3 * modes - 1;
  return free_parameters * std::log(static_cast<double>(n)) - 2.0 * log_likelihood;
}

std::optional<MixtureFit> fit_gmm(std::span<const double> values, const GmmOptions& options) {
  const std::size_t n = values.size();
  if (n == 0 || n < options.min_samples || options.modes_max < 1) return std::nullopt;

  double shift = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(n);
  double ss = 0;
  for (double v : values) ss += (v - shift) * (v - shift);
  double scale = std::sqrt(ss / static_cast<double>(n));

  MixtureFit best;
  best.seed = options.seed;
  best.shift = shift;

  if (!(scale > 0) || !std::isfinite(scale)) {
    // All values identical: one component at the value with the floor variance.
    best.scale = 1.0;
    best.modes = 1;
    best.components = {{1.0, values.front(), options.variance_floor}};
    best.log_likelihood = static_cast<double>(n) * log_normal_pdf(0.0, 0.0, options.variance_floor);
    best.bic = bic(best.log_likelihood, 1, n);
    return best;
  }
  best.scale = scale;

  std::mt19937_64 rng(options.seed);
  std::vector<double> x(values.begin(), values.end());
  for (double& v : x) v = (v - shift) / scale;
  std::shuffle(x.begin(), x.end(), rng);
  std::normal_distribution<double> noise(0.0, options.noise_sigma);
  for (double& v : x) v += noise(rng);

  best.bic = std::numeric_limits<double>::infinity();
  std::vector<GaussianComponent> winner;
  for (int modes = 1; modes <= options.modes_max; ++modes) {
    if (static_cast<std::size_t>(modes) > n) break;
    for (int r = 0; r < std::max(1, options.restarts); ++r) {
      EmResult em = run_em(x, modes, rng, options);
      double score = bic(em.log_likelihood, modes, n);
      if (std::isfinite(score) && score < best.bic) {
        best.bic = score;
        best.log_likelihood = em.log_likelihood;
        best.modes = modes;
        winner = std::move(em.components);
      }
    }
  }
  if (winner.empty()) return std::nullopt;

  for (const auto& c : winner) {
    best.components.push_back({c.weight, c.mean * scale + shift, c.variance * scale * scale});
  }
  std::sort(best.components.begin(), best.components.end(),
            [](const auto& a, const auto& b) { return a.mean < b.mean; });
  double wsum = 0;
  for (const auto& c : best.components) wsum += c.weight;
  for (auto& c : best.components) c.weight /= wsum;
  return best;
}

std::optional<MixtureFit> fit_gmm(std::span<const double> values, int modes_max, int restarts, std::uint64_t seed) {
  GmmOptions options;
  options.modes_max = modes_max;
  options.restarts = restarts;
  options.seed = seed;
  return fit_gmm(values, options);
}

}  // namespace kgpat
