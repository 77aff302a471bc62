#include "castsize/metrics.hpp"

#include <algorithm>
#include <cmath>

namespace castsize {

namespace {

template <typename Event>
const std::string &single_movie(std::span<const Event> events) {
  if (events.empty())
    throw Error(ErrorCode::EmptyEventList, "no events to measure");
  const std::string &movie = events.front().movie_id;
  for (const auto &e : events)
    if (e.movie_id != movie)
      throw Error(ErrorCode::MixedMovies,
                  "events from '" + movie + "' and '" + e.movie_id + "'");
  return movie;
}

} // namespace

CountMap conflict_counts(std::span<const ConflictEvent> events) {
  CountMap counts;
  for (const auto &e : events) {
    counts[e.side_a] += 1.0;
    counts[e.side_b] += 1.0;
  }
  return counts;
}

CountMap dialogue_counts(std::span<const DialogueEvent> events) {
  CountMap counts;
  for (const auto &e : events)
    counts[e.speaker] += 1.0;
  return counts;
}

ParticipationDistribution participation(std::span<const ConflictEvent> events) {
  const std::string &movie = single_movie(events);
  return normalize(conflict_counts(events), SourceMode::conflict, movie);
}

ParticipationDistribution participation(std::span<const DialogueEvent> events) {
  const std::string &movie = single_movie(events);
  return normalize(dialogue_counts(events), SourceMode::dialogue, movie);
}

double shannon_entropy(const ParticipationDistribution &dist) {
  double h = 0.0;
  for (const auto &s : dist.entries())
    h -= s.proportion * std::log2(s.proportion);
  return h > 0.0 ? h : 0.0; // point mass gives -0.0
}

double effective_size(const ParticipationDistribution &dist) {
  return std::exp2(shannon_entropy(dist));
}

ParticipationDistribution mixture(std::span<const ParticipationDistribution> dists,
                                  std::span<const double> weights,
                                  std::string movie_id) {
  if (dists.empty())
    throw Error(ErrorCode::EmptyInput, "mixture of no distributions");
  if (!weights.empty() && weights.size() != dists.size())
    throw Error(ErrorCode::LengthMismatch, "one weight per distribution required");

  double total = 0.0;
  for (std::size_t k = 0; k < dists.size(); ++k) {
    const double w = weights.empty() ? 1.0 : weights[k];
    if (w < 0.0 || std::isnan(w))
      throw Error(ErrorCode::NegativeCount, "negative mixture weight");
    total += w;
  }
  if (!(total > 0.0))
    throw Error(ErrorCode::AllZeroWeights, "mixture weights sum to zero");

  CountMap acc;
  for (std::size_t k = 0; k < dists.size(); ++k) {
    const double w = weights.empty() ? 1.0 : weights[k];
    if (w == 0.0)
      continue;
    for (const auto &s : dists[k].entries())
      acc[s.character] += w * s.proportion;
  }
  std::vector<Share> shares;
  shares.reserve(acc.size());
  for (const auto &[id, mass] : acc)
    shares.push_back({id, mass / total});
  return ParticipationDistribution::from_shares(std::move(movie_id),
                                                dists.front().source_mode(),
                                                std::move(shares));
}

FranchiseSummary franchise_summary(std::span<const ParticipationDistribution> dists,
                                   std::size_t top_k) {
  if (dists.empty())
    throw Error(ErrorCode::EmptyInput, "franchise summary needs at least one movie");
  FranchiseSummary out;
  for (const auto &d : dists) {
    const double n = effective_size(d);
    out.per_movie_effective.emplace_back(d.movie_id(), n);
    out.sum_effective += n;
  }
  const auto pooled = mixture(dists, {}, "franchise");
  out.gamma_effective = effective_size(pooled);

  out.top_contributors.assign(pooled.entries().begin(), pooled.entries().end());
  std::stable_sort(out.top_contributors.begin(), out.top_contributors.end(),
                   [](const Share &a, const Share &b) {
                     if (a.proportion != b.proportion)
                       return a.proportion > b.proportion;
                     return a.character < b.character;
                   });
  if (out.top_contributors.size() > top_k)
    out.top_contributors.erase(
        out.top_contributors.begin() + static_cast<std::ptrdiff_t>(top_k),
        out.top_contributors.end());
  return out;
}

std::size_t richness(const CountMap &counts) {
  return static_cast<std::size_t>(std::count_if(
      counts.begin(), counts.end(), [](const auto &kv) { return kv.second > 0.0; }));
}

std::size_t richness(const ParticipationDistribution &dist) {
  return dist.support_size();
}

} // namespace castsize
