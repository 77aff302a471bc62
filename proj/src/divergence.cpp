#include "castsize/divergence.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "castsize/metrics.hpp"

namespace castsize {

namespace {

struct MixtureEntropy {
  double h_mix = 0.0;
  bool shared = false; // some character has mass in both P and Q
};

// Entropy of (P+Q)/2 by merging the two sorted supports.
MixtureEntropy mixture_entropy(const ParticipationDistribution &p,
                               const ParticipationDistribution &q) {
  MixtureEntropy out;
  auto a = p.entries(), b = q.entries();
  std::size_t i = 0, j = 0;
  auto term = [](double m) { return -m * std::log2(m); };
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i].character < b[j].character)) {
      out.h_mix += term(a[i++].proportion / 2);
    } else if (i == a.size() || b[j].character < a[i].character) {
      out.h_mix += term(b[j++].proportion / 2);
    } else {
      out.h_mix += term((a[i++].proportion + b[j++].proportion) / 2);
      out.shared = true;
    }
  }
  return out;
}

ComparisonResult compare_with_entropies(const ParticipationDistribution &p,
                                        const ParticipationDistribution &q,
                                        double hp, double hq) {
  ComparisonResult r;
  const auto mix = mixture_entropy(p, q);
  const double n_p = std::exp2(hp), n_q = std::exp2(hq);
  const double geometric = std::exp2((hp + hq) / 2);
  const double arithmetic = (n_p + n_q) / 2;

  if (!mix.shared) {
    // Disjoint casts: H(M) = 1 + (H(P) + H(Q))/2 exactly, so N(M) = 2G.
    r.js = {1.0, 1.0, 0.0};
    r.effective.d_eff = geometric;
  } else {
    const double d_js = std::clamp(mix.h_mix - (hp + hq) / 2, 0.0, 1.0);
    r.js.d_js = d_js;
    r.js.d_js_bar = std::exp2(d_js) - 1.0;
    r.js.s_js_bar = 1.0 - r.js.d_js_bar;
    // Concavity makes N(M) >= G; any negative remainder is rounding.
    r.effective.d_eff = std::max(0.0, std::exp2(mix.h_mix) - geometric);
  }
  r.effective.d_eff_bar = std::clamp(r.effective.d_eff / arithmetic, 0.0, 1.0);
  r.effective.s_eff_bar = 1.0 - r.effective.d_eff_bar;
  return r;
}

} // namespace

double kl_divergence(const ParticipationDistribution &p,
                     const ParticipationDistribution &q) {
  double d = 0.0;
  for (const auto &s : p.entries()) {
    const double qx = q.proportion(s.character);
    if (qx == 0.0)
      return std::numeric_limits<double>::infinity();
    d += s.proportion * std::log2(s.proportion / qx);
  }
  return std::max(d, 0.0);
}

JsComparison js_comparison(const ParticipationDistribution &p,
                           const ParticipationDistribution &q) {
  return compare(p, q).js;
}

EffectiveComparison effective_comparison(const ParticipationDistribution &p,
                                         const ParticipationDistribution &q) {
  return compare(p, q).effective;
}

ComparisonResult compare(const ParticipationDistribution &p,
                         const ParticipationDistribution &q) {
  return compare_with_entropies(p, q, shannon_entropy(p), shannon_entropy(q));
}

Measure parse_measure(std::string_view name) {
  if (name == "d_js_bar")
    return Measure::d_js_bar;
  if (name == "d_eff_bar")
    return Measure::d_eff_bar;
  if (name == "s_js_bar")
    return Measure::s_js_bar;
  if (name == "s_eff_bar")
    return Measure::s_eff_bar;
  throw Error(ErrorCode::UnknownFormat, "unknown measure '" + std::string(name) + "'");
}

std::string_view to_string(Measure m) {
  switch (m) {
  case Measure::d_js_bar: return "d_js_bar";
  case Measure::d_eff_bar: return "d_eff_bar";
  case Measure::s_js_bar: return "s_js_bar";
  case Measure::s_eff_bar: return "s_eff_bar";
  }
  return "?";
}

bool is_similarity(Measure m) {
  return m == Measure::s_js_bar || m == Measure::s_eff_bar;
}

double select(const ComparisonResult &r, Measure m) {
  switch (m) {
  case Measure::d_js_bar: return r.js.d_js_bar;
  case Measure::d_eff_bar: return r.effective.d_eff_bar;
  case Measure::s_js_bar: return r.js.s_js_bar;
  case Measure::s_eff_bar: return r.effective.s_eff_bar;
  }
  return 0.0;
}

DistanceMatrix pairwise_matrix(std::span<const ParticipationDistribution> dists,
                               Measure measure) {
  const std::size_t n = dists.size();
  if (n < 2)
    throw Error(ErrorCode::TooFewMovies, "need at least two movies to compare");
  std::vector<double> h(n);
  std::vector<std::string> labels(n);
  for (std::size_t i = 0; i < n; ++i) {
    h[i] = shannon_entropy(dists[i]);
    labels[i] = dists[i].movie_id();
  }
  const bool sim = is_similarity(measure);
  std::vector<double> values(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    values[i * n + i] = sim ? 1.0 : 0.0;
    for (std::size_t j = i + 1; j < n; ++j) {
      const double v = select(compare_with_entropies(dists[i], dists[j], h[i], h[j]), measure);
      values[i * n + j] = v;
      values[j * n + i] = v;
    }
  }
  return DistanceMatrix(std::move(labels), std::move(values),
                        sim ? MatrixKind::similarity : MatrixKind::dissimilarity);
}

} // namespace castsize
