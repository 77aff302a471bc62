#pragma once

#include <span>
#include <string_view>

#include "castsize/model.hpp"

namespace castsize {

struct JsComparison {
  double d_js = 0.0;     // bits, in [0, 1]
  double d_js_bar = 0.0; // 2^d_js - 1
  double s_js_bar = 1.0; // 1 - d_js_bar
};

struct EffectiveComparison {
  double d_eff = 0.0;     // characters
  double d_eff_bar = 0.0; // d_eff over the mean effective size
  double s_eff_bar = 1.0; // 1 - d_eff_bar
};

struct ComparisonResult {
  JsComparison js;
  EffectiveComparison effective;
};

/// Kullback-Leibler divergence in bits. Returns +infinity when P puts mass
/// on a character that Q lacks.
double kl_divergence(const ParticipationDistribution &p,
                     const ParticipationDistribution &q);

/// Jensen-Shannon divergence to the uniform mixture of P and Q, and its
/// exponentiated dissimilarity/similarity. Supports may differ.
JsComparison js_comparison(const ParticipationDistribution &p,
                           const ParticipationDistribution &q);

/// Excess effective size of the mixture over the geometric-mean effective
/// size, raw (characters) and normalized by the arithmetic mean.
EffectiveComparison effective_comparison(const ParticipationDistribution &p,
                                         const ParticipationDistribution &q);

ComparisonResult compare(const ParticipationDistribution &p,
                         const ParticipationDistribution &q);

enum class Measure { d_js_bar, d_eff_bar, s_js_bar, s_eff_bar };

Measure parse_measure(std::string_view name); // UnknownFormat
std::string_view to_string(Measure m);
bool is_similarity(Measure m);
double select(const ComparisonResult &r, Measure m);

/// All-pairs matrix of one measure, labelled by movie id. Throws
/// TooFewMovies for fewer than two distributions.
DistanceMatrix pairwise_matrix(std::span<const ParticipationDistribution> dists,
                               Measure measure = Measure::d_eff_bar);

} // namespace castsize
