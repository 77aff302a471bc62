#include "castsize/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

#include <json.hpp>

#include "castsize/csv.hpp"

namespace castsize {

Linkage parse_linkage(std::string_view name) {
  if (name == "average")
    return Linkage::average;
  if (name == "complete")
    return Linkage::complete;
  if (name == "single")
    return Linkage::single;
  throw Error(ErrorCode::UnknownFormat, "unknown linkage '" + std::string(name) + "'");
}

std::string_view to_string(Linkage l) {
  switch (l) {
  case Linkage::average: return "average";
  case Linkage::complete: return "complete";
  case Linkage::single: return "single";
  }
  return "?";
}

// ---------------------------------------------------------------- clustering

namespace {

struct Cluster {
  std::size_t node;
  std::size_t size;
  std::size_t first_leaf; // leaf with the smallest label, for tie-breaks
};

void require_dissimilarity(const DistanceMatrix &d) {
  if (d.kind() != MatrixKind::dissimilarity)
    throw Error(ErrorCode::InvalidMatrix, "expected a dissimilarity matrix");
  if (d.size() < 2)
    throw Error(ErrorCode::TooFewMovies, "need at least two movies");
}

} // namespace

Dendrogram agglomerative_cluster(const DistanceMatrix &d, Linkage linkage) {
  require_dissimilarity(d);
  const std::size_t n = d.size();
  const auto &labels = d.labels();

  // Leaf order key: label first, index for duplicate labels.
  auto leaf_less = [&](std::size_t a, std::size_t b) {
    return labels[a] != labels[b] ? labels[a] < labels[b] : a < b;
  };

  std::vector<Cluster> slots(n);
  std::vector<bool> active(n, true);
  std::vector<double> dist(d.values().begin(), d.values().end());
  for (std::size_t i = 0; i < n; ++i)
    slots[i] = {i, 1, i};

  Dendrogram out;
  out.labels = labels;
  out.merges.reserve(n - 1);

  for (std::size_t step = 0; step + 1 < n; ++step) {
    std::size_t best_a = n, best_b = n;
    double best = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (!active[i])
        continue;
      for (std::size_t j = i + 1; j < n; ++j) {
        if (!active[j])
          continue;
        // order the pair by leaf key so the tie-break is index-free
        std::size_t a = i, b = j;
        if (leaf_less(slots[b].first_leaf, slots[a].first_leaf))
          std::swap(a, b);
        const double v = dist[i * n + j];
        bool take = best_a == n || v < best;
        if (!take && v == best) {
          const std::size_t ca = slots[a].first_leaf, cb = slots[b].first_leaf;
          const std::size_t ba = slots[best_a].first_leaf, bb = slots[best_b].first_leaf;
          take = ca != ba ? leaf_less(ca, ba) : leaf_less(cb, bb);
        }
        if (take) {
          best = v;
          best_a = a;
          best_b = b;
        }
      }
    }

    const Cluster &ca = slots[best_a], &cb = slots[best_b];
    const std::size_t merged_size = ca.size + cb.size;
    out.merges.push_back({ca.node, cb.node, best, merged_size});

    for (std::size_t k = 0; k < n; ++k) {
      if (!active[k] || k == best_a || k == best_b)
        continue;
      const double da = dist[best_a * n + k], db = dist[best_b * n + k];
      double v = 0.0;
      switch (linkage) {
      case Linkage::single:
        v = std::min(da, db);
        break;
      case Linkage::complete:
        v = std::max(da, db);
        break;
      case Linkage::average:
        v = (static_cast<double>(ca.size) * da + static_cast<double>(cb.size) * db) /
            static_cast<double>(merged_size);
        break;
      }
      dist[best_a * n + k] = dist[k * n + best_a] = v;
    }
    slots[best_a] = {n + step, merged_size, ca.first_leaf}; // ca has the lesser leaf
    active[best_b] = false;
  }
  return out;
}

std::map<std::string, int> cut_dendrogram(const Dendrogram &dend, std::size_t k) {
  const std::size_t n = dend.labels.size();
  if (k == 0 || k > n)
    throw Error(ErrorCode::BadK, "k must lie in [1, " + std::to_string(n) + "]");
  if (dend.merges.size() + 1 != n)
    throw Error(ErrorCode::InvalidMatrix, "dendrogram is incomplete");

  std::vector<std::size_t> parent(2 * n - 1);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto find = [&](std::size_t x) {
    while (parent[x] != x)
      x = parent[x] = parent[parent[x]];
    return x;
  };
  for (std::size_t s = 0; s + k < n; ++s) {
    const Merge &m = dend.merges[s];
    parent[find(m.left)] = n + s;
    parent[find(m.right)] = n + s;
  }

  std::map<std::string, int> out;
  std::map<std::size_t, int> root_label;
  for (std::size_t leaf = 0; leaf < n; ++leaf) {
    auto [it, fresh] = root_label.emplace(find(leaf), static_cast<int>(root_label.size()));
    out[dend.labels[leaf]] = it->second;
  }
  return out;
}

std::string dendrogram_to_json(const Dendrogram &dend) {
  nlohmann::ordered_json doc;
  doc["labels"] = dend.labels;
  auto merges = nlohmann::ordered_json::array();
  for (const auto &m : dend.merges)
    merges.push_back({{"left", m.left}, {"right", m.right}, {"height", m.height},
                      {"size", m.size}});
  doc["merges"] = std::move(merges);
  return doc.dump(2) + "\n";
}

namespace {

std::string newick_label(const std::string &label) {
  if (label.find_first_of(" ()[]':;,\t") == std::string::npos && !label.empty())
    return label;
  std::string out = "'";
  for (char ch : label) {
    if (ch == '\'')
      out.push_back('\'');
    out.push_back(ch);
  }
  return out + "'";
}

std::string fmt_length(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

} // namespace

std::string dendrogram_to_newick(const Dendrogram &dend) {
  const std::size_t n = dend.labels.size();
  if (n == 0)
    return ";\n";
  auto height = [&](std::size_t node) {
    return node < n ? 0.0 : dend.merges[node - n].height;
  };
  // Explicit stack keeps deep single-linkage chains off the call stack.
  struct Frame {
    std::size_t node;
    int stage;
  };
  std::string out;
  std::vector<Frame> stack{{n == 1 ? 0 : 2 * n - 2, 0}};
  while (!stack.empty()) {
    Frame &f = stack.back();
    if (f.node < n) {
      out += newick_label(dend.labels[f.node]);
    } else if (f.stage == 0) {
      out.push_back('(');
      f.stage = 1;
      stack.push_back({dend.merges[f.node - n].left, 0});
      continue;
    } else if (f.stage == 1) {
      out.push_back(',');
      f.stage = 2;
      stack.push_back({dend.merges[f.node - n].right, 0});
      continue;
    } else {
      out.push_back(')');
    }
    const std::size_t node = f.node;
    stack.pop_back();
    if (!stack.empty())
      out += ":" + fmt_length(height(stack.back().node) - height(node));
  }
  return out + ";\n";
}

// ---------------------------------------------------------------- eigen / MDS

SymmetricEigen symmetric_eigen(std::vector<double> a, std::size_t n) {
  std::vector<double> v(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    v[i * n + i] = 1.0;

  double norm = 0.0;
  for (double x : a)
    norm += x * x;
  const double tol = 1e-12 * std::sqrt(norm);

  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q)
        off += a[p * n + q] * a[p * n + q];
    if (std::sqrt(2.0 * off) <= tol)
      break;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a[p * n + q];
        if (apq == 0.0)
          continue;
        const double theta = (a[q * n + q] - a[p * n + p]) / (2.0 * apq);
        const double t = (theta >= 0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0), s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a[k * n + p], akq = a[k * n + q];
          a[k * n + p] = c * akp - s * akq;
          a[k * n + q] = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a[p * n + k], aqk = a[q * n + k];
          a[p * n + k] = c * apk - s * aqk;
          a[q * n + k] = s * apk + c * aqk;
        }
        a[p * n + q] = a[q * n + p] = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v[k * n + p], vkq = v[k * n + q];
          v[k * n + p] = c * vkp - s * vkq;
          v[k * n + q] = s * vkp + c * vkq;
        }
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    return a[x * n + x] > a[y * n + y];
  });

  SymmetricEigen out;
  out.values.resize(n);
  out.vectors.resize(n * n);
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t src = order[k];
    out.values[k] = a[src * n + src];
    std::size_t arg = 0;
    for (std::size_t i = 1; i < n; ++i)
      if (std::abs(v[i * n + src]) > std::abs(v[arg * n + src]))
        arg = i;
    const double sign = v[arg * n + src] < 0 ? -1.0 : 1.0;
    for (std::size_t i = 0; i < n; ++i)
      out.vectors[i * n + k] = sign * v[i * n + src];
  }
  return out;
}

Embedding classical_mds(const DistanceMatrix &d, std::size_t dims,
                        const std::optional<std::string> &origin_label) {
  require_dissimilarity(d);
  const std::size_t n = d.size();
  if (dims == 0 || dims > n - 1)
    throw Error(ErrorCode::DimsTooLarge,
                "dims must lie in [1, " + std::to_string(n - 1) + "]");
  std::optional<std::size_t> origin;
  if (origin_label)
    origin = d.index_of(*origin_label);

  // B = -1/2 J D2 J
  std::vector<double> sq(n * n), row_mean(n, 0.0);
  double grand = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const double x = d(i, j) * d(i, j);
      sq[i * n + j] = x;
      row_mean[i] += x / static_cast<double>(n);
    }
  for (double r : row_mean)
    grand += r / static_cast<double>(n);
  std::vector<double> b(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      b[i * n + j] = -0.5 * (sq[i * n + j] - row_mean[i] - row_mean[j] + grand);

  const auto eig = symmetric_eigen(std::move(b), n);

  Embedding e;
  e.labels = d.labels();
  e.dims = dims;
  const double top = std::max(eig.values.front(), 0.0);
  const double floor = -1e-9 * top;
  double neg = 0.0, all = 0.0;
  for (double lambda : eig.values) {
    all += std::abs(lambda);
    if (lambda < floor) {
      ++e.negative_eigenvalues;
      neg += -lambda;
    }
  }
  e.negative_mass_fraction = all > 0.0 ? neg / all : 0.0;

  e.coordinates.assign(n * dims, 0.0);
  for (std::size_t k = 0; k < dims; ++k) {
    const double lambda = eig.values[k];
    e.eigenvalues.push_back(lambda);
    const double scale = lambda > 0.0 ? std::sqrt(lambda) : 0.0;
    for (std::size_t i = 0; i < n; ++i)
      e.coordinates[i * dims + k] = scale * eig.vectors[i * n + k];
  }

  double err = 0.0, total = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < dims; ++k) {
        const double diff = e.coord(i, k) - e.coord(j, k);
        s += diff * diff;
      }
      const double r = std::sqrt(s) - d(i, j);
      err += r * r;
      total += d(i, j) * d(i, j);
    }
  e.stress = total > 0.0 ? err / total : 0.0;

  if (origin) {
    const std::vector<double> shift(e.coordinates.begin() + static_cast<std::ptrdiff_t>(*origin * dims),
                                    e.coordinates.begin() + static_cast<std::ptrdiff_t>((*origin + 1) * dims));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t k = 0; k < dims; ++k)
        e.coordinates[i * dims + k] -= shift[k];
  }
  return e;
}

std::string embedding_to_csv(const Embedding &e) {
  static constexpr const char *axes[] = {"x", "y", "z"};
  std::string out = "movie";
  for (std::size_t k = 0; k < e.dims; ++k)
    out += "," + (k < 3 ? std::string(axes[k]) : "d" + std::to_string(k + 1));
  out.push_back('\n');
  char buf[32];
  for (std::size_t i = 0; i < e.labels.size(); ++i) {
    out += csv::escape(e.labels[i]);
    for (std::size_t k = 0; k < e.dims; ++k) {
      double v = e.coord(i, k);
      if (v == 0.0)
        v = 0.0; // no "-0"
      std::snprintf(buf, sizeof buf, ",%.6g", v);
      out += buf;
    }
    out.push_back('\n');
  }
  return out;
}

} // namespace castsize
