#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "castsize/model.hpp"

namespace castsize {

// One count per side per conflict, whatever the outcome.
CountMap conflict_counts(std::span<const ConflictEvent> events);
// One count per spoken line.
CountMap dialogue_counts(std::span<const DialogueEvent> events);

// Throws EmptyEventList, or MixedMovies when events span several movies.
ParticipationDistribution participation(std::span<const ConflictEvent> events);
ParticipationDistribution participation(std::span<const DialogueEvent> events);

/// Shannon entropy in bits, -sum p log2 p.
double shannon_entropy(const ParticipationDistribution &dist);

/// Effective cast size: the perplexity 2^H, i.e. the number of equally
/// contributing characters that would give the same entropy.
double effective_size(const ParticipationDistribution &dist);

/// Weighted average of distributions over the union of their supports.
/// Weights default to uniform; throws EmptyInput, AllZeroWeights,
/// LengthMismatch or NegativeCount (for a negative weight).
ParticipationDistribution mixture(std::span<const ParticipationDistribution> dists,
                                  std::span<const double> weights = {},
                                  std::string movie_id = "mixture");

struct FranchiseSummary {
  std::vector<std::pair<std::string, double>> per_movie_effective; // input order
  double sum_effective = 0.0;
  double gamma_effective = 0.0;
  std::vector<Share> top_contributors; // descending, ties by name
};

FranchiseSummary franchise_summary(std::span<const ParticipationDistribution> dists,
                                   std::size_t top_k);

std::size_t richness(const CountMap &counts); // characters with count > 0
std::size_t richness(const ParticipationDistribution &dist);

} // namespace castsize
