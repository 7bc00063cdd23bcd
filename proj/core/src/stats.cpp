#include "readgen/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>

namespace readgen {

namespace {

void require_samples(const std::vector<double>& xs, const std::vector<double>& ys) {
  if (xs.empty() || ys.empty()) throw std::invalid_argument("rank-sum test needs two non-empty samples");
}

// Doubled midranks of the pooled sample (xs first), so ties stay integral.
std::vector<std::int64_t> doubled_ranks(const std::vector<double>& xs, const std::vector<double>& ys) {
  std::vector<double> pooled(xs);
  pooled.insert(pooled.end(), ys.begin(), ys.end());
  std::vector<std::size_t> order(pooled.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return pooled[a] < pooled[b]; });
  std::vector<std::int64_t> ranks(pooled.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && pooled[order[j + 1]] == pooled[order[i]]) ++j;
    // Ranks i+1 .. j+1 share their mean; doubled that is i + j + 2.
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = static_cast<std::int64_t>(i + j + 2);
    i = j + 1;
  }
  return ranks;
}

}  // namespace

double wilcoxon_rank_sum_exact(const std::vector<double>& xs, const std::vector<double>& ys) {
  require_samples(xs, ys);
  const auto ranks = doubled_ranks(xs, ys);
  const std::size_t n1 = xs.size();
  const std::size_t n = ranks.size();
  const std::int64_t observed = std::accumulate(ranks.begin(), ranks.begin() + n1, std::int64_t{0});
  const std::int64_t expected = static_cast<std::int64_t>(n1 * (n + 1));
  const std::int64_t deviation = std::llabs(observed - expected);

  // ways[k][s]: subsets of size k whose doubled ranks sum to s.
  const std::int64_t max_sum = std::accumulate(ranks.begin(), ranks.end(), std::int64_t{0});
  std::vector<std::vector<long double>> ways(n1 + 1, std::vector<long double>(max_sum + 1, 0.0L));
  ways[0][0] = 1.0L;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = std::min(i + 1, n1); k >= 1; --k) {
      for (std::int64_t s = max_sum; s >= ranks[i]; --s) ways[k][s] += ways[k - 1][s - ranks[i]];
    }
  }
  long double extreme = 0.0L;
  long double total = 0.0L;
  for (std::int64_t s = 0; s <= max_sum; ++s) {
    total += ways[n1][s];
    if (std::llabs(s - expected) >= deviation) extreme += ways[n1][s];
  }
  return static_cast<double>(std::min(1.0L, extreme / total));
}

double wilcoxon_rank_sum_normal(const std::vector<double>& xs, const std::vector<double>& ys) {
  require_samples(xs, ys);
  const auto ranks = doubled_ranks(xs, ys);
  const double n1 = static_cast<double>(xs.size());
  const double n2 = static_cast<double>(ys.size());
  const double n = n1 + n2;
  const double r1 = static_cast<double>(std::accumulate(ranks.begin(), ranks.begin() + xs.size(), std::int64_t{0})) / 2.0;
  const double u = r1 - n1 * (n1 + 1.0) / 2.0;
  const double mean = n1 * n2 / 2.0;

  std::vector<std::int64_t> sorted(ranks);
  std::sort(sorted.begin(), sorted.end());
  double ties = 0.0;
  for (std::size_t i = 0; i < sorted.size();) {
    std::size_t j = i;
    while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
    const double t = static_cast<double>(j - i);
    ties += t * t * t - t;
    i = j;
  }
  const double variance = n1 * n2 / 12.0 * ((n + 1.0) - ties / (n * (n - 1.0)));
  if (variance <= 0.0) return 1.0;
  const double z = std::max(0.0, std::fabs(u - mean) - 0.5) / std::sqrt(variance);
  return std::min(1.0, std::erfc(z / std::sqrt(2.0)));
}

double wilcoxon_rank_sum(const std::vector<double>& xs, const std::vector<double>& ys) {
  require_samples(xs, ys);
  if (xs.size() + ys.size() <= kExactRankSumLimit) return wilcoxon_rank_sum_exact(xs, ys);
  return wilcoxon_rank_sum_normal(xs, ys);
}

EffectMagnitude effect_magnitude(double delta) {
  const double d = std::fabs(delta);
  if (d < 0.147) return EffectMagnitude::kNegligible;
  if (d < 0.33) return EffectMagnitude::kSmall;
  if (d < 0.474) return EffectMagnitude::kMedium;
  return EffectMagnitude::kLarge;
}

CliffsDelta cliffs_delta(const std::vector<double>& xs, const std::vector<double>& ys) {
  if (xs.empty() || ys.empty()) throw std::invalid_argument("Cliff's delta needs two non-empty samples");
  // Counting over sorted ys keeps this O((n + m) log m).
  std::vector<double> sorted(ys);
  std::sort(sorted.begin(), sorted.end());
  std::int64_t balance = 0;
  for (double x : xs) {
    const auto below = std::lower_bound(sorted.begin(), sorted.end(), x) - sorted.begin();
    const auto above = sorted.end() - std::upper_bound(sorted.begin(), sorted.end(), x);
    balance += below - above;
  }
  CliffsDelta out;
  out.delta = static_cast<double>(balance) / (static_cast<double>(xs.size()) * static_cast<double>(ys.size()));
  out.magnitude = effect_magnitude(out.delta);
  return out;
}

std::string_view to_string(EffectMagnitude magnitude) {
  switch (magnitude) {
    case EffectMagnitude::kNegligible: return "negligible";
    case EffectMagnitude::kSmall: return "small";
    case EffectMagnitude::kMedium: return "medium";
    case EffectMagnitude::kLarge: return "large";
  }
  return "negligible";
}

}  // namespace readgen
