#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "castsize/model.hpp"

namespace castsize {

enum class Linkage { average, complete, single };

Linkage parse_linkage(std::string_view name); // UnknownFormat
std::string_view to_string(Linkage l);

struct Merge {
  std::size_t left = 0;  // node id: leaves are 0..n-1, merge s creates n+s
  std::size_t right = 0;
  double height = 0.0;
  std::size_t size = 0;  // leaves under the new node
};

struct Dendrogram {
  std::vector<std::string> labels; // leaf labels, input order
  std::vector<Merge> merges;       // n-1 steps in merge order
};

/// Agglomerative clustering on a dissimilarity matrix. At every step the
/// closest pair of clusters merges; exact ties go to the pair whose
/// (smallest leaf label, smallest leaf label) is lexicographically least,
/// so results do not depend on input row order.
Dendrogram agglomerative_cluster(const DistanceMatrix &d,
                                 Linkage linkage = Linkage::average);

/// Flat clustering with k groups: the last k-1 merges are undone. Labels
/// run 0..k-1 in order of each cluster's first leaf.
std::map<std::string, int> cut_dendrogram(const Dendrogram &dend, std::size_t k);

// {"labels": [...], "merges": [{"left","right","height","size"}, ...]}
std::string dendrogram_to_json(const Dendrogram &dend);
// Branch lengths are height differences; leaves sit at height 0.
std::string dendrogram_to_newick(const Dendrogram &dend);

struct Embedding {
  std::vector<std::string> labels;
  std::size_t dims = 0;
  std::vector<double> coordinates; // labels.size() x dims, row-major
  std::vector<double> eigenvalues; // top `dims`, descending
  double stress = 0.0;             // sum (dhat-d)^2 / sum d^2 over pairs
  std::size_t negative_eigenvalues = 0;
  double negative_mass_fraction = 0.0; // sum |negative| / sum |all|

  double coord(std::size_t row, std::size_t dim) const {
    return coordinates[row * dims + dim];
  }
};

/// Classical (Torgerson) scaling. Negative eigenvalues of the double-centred
/// matrix are dropped and reported. With `origin_label`, coordinates are
/// translated so that movie sits at the origin.
Embedding classical_mds(const DistanceMatrix &d, std::size_t dims,
                        const std::optional<std::string> &origin_label = std::nullopt);

// Header "movie,x,y[,z...]".
std::string embedding_to_csv(const Embedding &e);

struct SymmetricEigen {
  std::vector<double> values;  // descending
  std::vector<double> vectors; // column k is the eigenvector of values[k], n x n
};

/// Cyclic Jacobi for a symmetric n x n row-major matrix. Eigenvectors are
/// sign-normalized so their largest-magnitude component is positive.
SymmetricEigen symmetric_eigen(std::vector<double> a, std::size_t n);

} // namespace castsize
