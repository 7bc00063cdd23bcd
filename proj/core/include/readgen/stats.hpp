#pragma once

#include <string_view>
#include <vector>

namespace readgen {

// Samples with at most this many values in total use the exact null
// distribution.
inline constexpr std::size_t kExactRankSumLimit = 12;

// Two-sided Wilcoxon rank-sum (Mann-Whitney) p-value. Ties get midranks.
// Large samples use the normal approximation with tie and continuity
// correction. Throws std::invalid_argument on an empty sample.
double wilcoxon_rank_sum(const std::vector<double>& xs, const std::vector<double>& ys);

// Exact variant, usable for any size the caller can afford.
double wilcoxon_rank_sum_exact(const std::vector<double>& xs, const std::vector<double>& ys);
double wilcoxon_rank_sum_normal(const std::vector<double>& xs, const std::vector<double>& ys);

enum class EffectMagnitude { kNegligible, kSmall, kMedium, kLarge };

struct CliffsDelta {
  double delta = 0.0;
  EffectMagnitude magnitude = EffectMagnitude::kNegligible;
};

CliffsDelta cliffs_delta(const std::vector<double>& xs, const std::vector<double>& ys);
EffectMagnitude effect_magnitude(double delta);
std::string_view to_string(EffectMagnitude magnitude);

}  // namespace readgen
