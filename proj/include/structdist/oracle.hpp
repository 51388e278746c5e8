#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numeric>
#include <vector>

#include "structdist/distribution.hpp"

// Brute-force ground truth. Structures are enumerated from their definitions (tag sequences,
// segmentations, lattice paths, collapsed label strings, binary trees, derivations,
// permutations, head assignments and edge subsets) without reusing any inference code, then
// scored directly. Only for desk-scale instances.

namespace structdist::oracle {

inline constexpr std::size_t kDefaultLimit = 1'000'000;

/// Multiset of flat log-potential indices used by one structure.
struct Structure {
  std::vector<std::uint32_t> parts;
};

struct EnumeratedFamily {
  Family family;
  Config config;
  std::size_t num_params = 0;
  std::vector<Structure> structures;
};

inline std::size_t num_params(Family family, const Config& c) {
  std::size_t total = 0;
  for (const auto& [name, shape] : potential_layout(family, c)) total += shape_size(shape);
  return total;
}

namespace detail {

inline double catalan(std::size_t k) {
  double c = 1.0;
  for (std::size_t i = 0; i < k; ++i) c = c * 2.0 * (2.0 * static_cast<double>(i) + 1.0) / (static_cast<double>(i) + 2.0);
  return c;
}

inline double choose(std::size_t n, std::size_t k) {
  double r = 1.0;
  for (std::size_t i = 0; i < k; ++i) r = r * static_cast<double>(n - i) / static_cast<double>(i + 1);
  return r;
}

struct TreeNode {
  std::size_t i, j, split;  // split == j for leaves
};
using Tree = std::vector<TreeNode>;  // pre-order

inline std::vector<Tree> binary_trees(std::size_t i, std::size_t j) {
  if (i == j) return {Tree{{i, i, i}}};
  std::vector<Tree> out;
  for (std::size_t k = i; k < j; ++k) {
    const auto left = binary_trees(i, k);
    const auto right = binary_trees(k + 1, j);
    for (const auto& l : left) {
      for (const auto& r : right) {
        Tree t{{i, j, k}};
        t.insert(t.end(), l.begin(), l.end());
        t.insert(t.end(), r.begin(), r.end());
        out.push_back(std::move(t));
      }
    }
  }
  return out;
}

// Calls visit(digits) for every vector in [0, radix)^len.
inline void for_each_digits(std::size_t len, std::size_t radix, const std::function<void(const std::vector<std::size_t>&)>& visit) {
  if (radix == 0 && len > 0) return;
  std::vector<std::size_t> d(len, 0);
  while (true) {
    visit(d);
    std::size_t a = len;
    while (a > 0) {
      if (++d[a - 1] < radix) break;
      d[a - 1] = 0;
      --a;
    }
    if (a == 0) return;
  }
}

inline std::vector<std::size_t> collapse(const std::vector<std::size_t>& frames) {
  std::vector<std::size_t> out;
  for (std::size_t t = 0; t < frames.size(); ++t) {
    if (frames[t] == 0) continue;
    if (t > 0 && frames[t - 1] == frames[t]) continue;
    out.push_back(frames[t]);
  }
  return out;
}

// Tree checks on a head assignment heads[1..n] (heads[0] unused).
inline bool connected_to_root(const std::vector<std::size_t>& heads) {
  const std::size_t size = heads.size();
  std::vector<char> ok(size, 0);
  ok[0] = 1;
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t d = 1; d < size; ++d) {
      if (!ok[d] && ok[heads[d]]) {
        ok[d] = 1;
        changed = true;
      }
    }
  }
  return std::all_of(ok.begin(), ok.end(), [](char c) { return c != 0; });
}

inline bool crossing(std::size_t a, std::size_t b, std::size_t c, std::size_t d) {
  const std::size_t l1 = std::min(a, b), r1 = std::max(a, b), l2 = std::min(c, d), r2 = std::max(c, d);
  return (l1 < l2 && l2 < r1 && r1 < r2) || (l2 < l1 && l1 < r2 && r2 < r1);
}

inline bool edges_cross(const std::vector<std::pair<std::size_t, std::size_t>>& edges) {
  for (std::size_t a = 0; a < edges.size(); ++a)
    for (std::size_t b = a + 1; b < edges.size(); ++b)
      if (crossing(edges[a].first, edges[a].second, edges[b].first, edges[b].second)) return true;
  return false;
}

}  // namespace detail

/// Number of candidates the enumerator inspects (an upper bound on the structure count).
inline double enumeration_work(Family family, const Config& c) {
  const auto pow = [](double b, std::size_t e) { return std::pow(b, static_cast<double>(e)); };
  switch (family) {
    case Family::linear_chain: return pow(static_cast<double>(c.m), c.n);
    case Family::semi_markov: return pow(2.0, c.n) * pow(static_cast<double>(c.m), c.n);
    case Family::monotone_alignment: return pow(3.0, c.n + c.m);
    case Family::ctc: return pow(static_cast<double>(c.v), c.n);
    case Family::one_to_one: return std::tgamma(static_cast<double>(c.n) + 1.0);
    case Family::tree_crf: return detail::catalan(c.n - 1) * pow(static_cast<double>(c.m), 2 * c.n - 1);
    case Family::pcfg:
      return detail::catalan(c.n - 1) * pow(static_cast<double>(c.nt), c.n - 1) * pow(static_cast<double>(c.pt), c.n);
    case Family::spanning_tree:
      return c.spanning.directed ? pow(static_cast<double>(c.n), c.n) : detail::choose(c.n * (c.n + 1) / 2, c.n);
  }
  return 0.0;
}

/// Visits every valid structure of the family once.
inline void for_each_structure(Family family, const Config& c, const std::function<void(const Structure&)>& visit) {
  Structure s;
  const auto u32 = [](std::size_t x) { return static_cast<std::uint32_t>(x); };
  switch (family) {
    case Family::linear_chain: {
      detail::for_each_digits(c.n, c.m, [&](const std::vector<std::size_t>& y) {
        s.parts.assign({u32(y[0])});
        for (std::size_t t = 0; t + 1 < c.n; ++t) s.parts.push_back(u32(c.m + (t * c.m + y[t]) * c.m + y[t + 1]));
        visit(s);
      });
      return;
    }
    case Family::semi_markov: {
      std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t pos, std::size_t prev) {
        if (pos == c.n) {
          visit(s);
          return;
        }
        for (std::size_t w = 1; w <= std::min(c.s, c.n - pos); ++w) {
          for (std::size_t b = 0; b < c.m; ++b) {
            s.parts.push_back(u32(((pos * c.s + (w - 1)) * c.m + prev) * c.m + b));
            rec(pos + w, b);
            s.parts.pop_back();
          }
        }
      };
      rec(0, 0);
      return;
    }
    case Family::monotone_alignment: {
      const std::size_t cols = c.m + 1;
      std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t i, std::size_t j) {
        if (i == c.n && j == c.m) {
          visit(s);
          return;
        }
        const std::pair<std::size_t, std::size_t> steps[3] = {{1, 1}, {1, 0}, {0, 1}};
        for (std::size_t k = 0; k < 3; ++k) {
          const std::size_t ni = i + steps[k].first, nj = j + steps[k].second;
          if (ni > c.n || nj > c.m) continue;
          s.parts.push_back(u32((ni * cols + nj) * 3 + k));
          rec(ni, nj);
          s.parts.pop_back();
        }
      };
      rec(0, 0);
      return;
    }
    case Family::ctc: {
      detail::for_each_digits(c.n, c.v, [&](const std::vector<std::size_t>& y) {
        if (detail::collapse(y) != c.target) return;
        s.parts.clear();
        for (std::size_t t = 0; t < c.n; ++t) s.parts.push_back(u32(t * c.v + y[t]));
        visit(s);
      });
      return;
    }
    case Family::one_to_one: {
      std::vector<std::size_t> perm(c.n);
      std::iota(perm.begin(), perm.end(), 0);
      do {
        s.parts.clear();
        for (std::size_t i = 0; i < c.n; ++i) s.parts.push_back(u32(i * c.n + perm[i]));
        visit(s);
      } while (std::next_permutation(perm.begin(), perm.end()));
      return;
    }
    case Family::tree_crf: {
      for (const auto& tree : detail::binary_trees(0, c.n - 1)) {
        detail::for_each_digits(tree.size(), c.m, [&](const std::vector<std::size_t>& labels) {
          s.parts.clear();
          for (std::size_t k = 0; k < tree.size(); ++k)
            s.parts.push_back(u32((tree[k].i * c.n + tree[k].j) * c.m + labels[k]));
          visit(s);
        });
      }
      return;
    }
    case Family::pcfg: {
      const std::size_t kids = c.nt + c.pt;
      const std::size_t rule_off = c.nt, em_off = c.nt + c.nt * kids * kids, sticky_off = em_off + c.n * c.pt;
      for (const auto& tree : detail::binary_trees(0, c.n - 1)) {
        std::vector<std::size_t> internal, leaves;
        for (std::size_t k = 0; k < tree.size(); ++k) (tree[k].i == tree[k].j ? leaves : internal).push_back(k);
        detail::for_each_digits(internal.size(), c.nt, [&](const std::vector<std::size_t>& nts) {
          detail::for_each_digits(leaves.size(), c.pt, [&](const std::vector<std::size_t>& pts) {
            // child-index label of every node in the tree
            std::vector<std::size_t> label(tree.size());
            for (std::size_t a = 0; a < internal.size(); ++a) label[internal[a]] = nts[a];
            for (std::size_t a = 0; a < leaves.size(); ++a) label[leaves[a]] = c.nt + pts[a];
            const auto node_at = [&](std::size_t i, std::size_t j) {
              for (std::size_t k = 0; k < tree.size(); ++k)
                if (tree[k].i == i && tree[k].j == j) return k;
              return tree.size();
            };
            s.parts.clear();
            s.parts.push_back(u32(label[0]));
            for (std::size_t k = 0; k < tree.size(); ++k) {
              const auto& nd = tree[k];
              s.parts.push_back(u32(sticky_off + nd.i * c.n + nd.j));
              if (nd.i == nd.j) {
                s.parts.push_back(u32(em_off + nd.i * c.pt + (label[k] - c.nt)));
              } else {
                const std::size_t l = label[node_at(nd.i, nd.split)], r = label[node_at(nd.split + 1, nd.j)];
                s.parts.push_back(u32(rule_off + (label[k] * kids + l) * kids + r));
              }
            }
            visit(s);
          });
        });
      }
      return;
    }
    case Family::spanning_tree: {
      const std::size_t size = c.n + 1;
      const auto& flags = c.spanning;
      if (flags.directed) {
        // every word picks a head among the other n nodes
        detail::for_each_digits(c.n, c.n, [&](const std::vector<std::size_t>& pick) {
          std::vector<std::size_t> heads(size, 0);
          std::vector<std::pair<std::size_t, std::size_t>> edges;
          std::size_t root_edges = 0;
          for (std::size_t d = 1; d < size; ++d) {
            heads[d] = pick[d - 1] < d ? pick[d - 1] : pick[d - 1] + 1;
            edges.push_back({heads[d], d});
            root_edges += heads[d] == 0;
          }
          if (!detail::connected_to_root(heads)) return;
          if (flags.single_root_edge && root_edges != 1) return;
          if (flags.projective && detail::edges_cross(edges)) return;
          s.parts.clear();
          for (std::size_t d = 1; d < size; ++d) s.parts.push_back(u32(heads[d] * size + d));
          visit(s);
        });
        return;
      }
      // undirected: n-edge subsets of the complete graph on n+1 nodes that connect everything
      std::vector<std::pair<std::size_t, std::size_t>> all;
      for (std::size_t a = 0; a < size; ++a)
        for (std::size_t b = a + 1; b < size; ++b) all.push_back({a, b});
      std::vector<char> mask(all.size(), 0);
      std::fill(mask.begin(), mask.begin() + static_cast<std::ptrdiff_t>(c.n), 1);
      std::sort(mask.begin(), mask.end());
      do {
        std::vector<std::pair<std::size_t, std::size_t>> edges;
        for (std::size_t k = 0; k < all.size(); ++k)
          if (mask[k]) edges.push_back(all[k]);
        // orient away from node 0 by breadth-first search
        std::vector<std::size_t> parent(size, size);
        std::vector<std::size_t> queue{0};
        parent[0] = 0;
        for (std::size_t q = 0; q < queue.size(); ++q) {
          const std::size_t u = queue[q];
          for (auto [a, b] : edges) {
            const std::size_t other = a == u ? b : (b == u ? a : size);
            if (other != size && parent[other] == size) {
              parent[other] = u;
              queue.push_back(other);
            }
          }
        }
        if (queue.size() != size) continue;
        std::size_t root_degree = 0;
        for (auto [a, b] : edges) root_degree += a == 0;
        if (flags.single_root_edge && root_degree != 1) continue;
        if (flags.projective && detail::edges_cross(edges)) continue;
        s.parts.clear();
        for (std::size_t d = 1; d < size; ++d) s.parts.push_back(u32(parent[d] * size + d));
        visit(s);
      } while (std::next_permutation(mask.begin(), mask.end()));
      return;
    }
  }
}

/// Complete enumeration; throws when the closed-form candidate count exceeds `limit`.
inline EnumeratedFamily enumerate_structures(Family family, const Config& config, std::size_t limit = kDefaultLimit) {
  if (enumeration_work(family, config) > static_cast<double>(limit)) {
    throw InvalidArgument("enumerate_structures: instance too large for brute force");
  }
  EnumeratedFamily ef{family, config, num_params(family, config), {}};
  for_each_structure(family, config, [&](const Structure& s) { ef.structures.push_back(s); });
  return ef;
}

inline double score(const Structure& s, std::span<const double> theta) {
  long double total = 0.0L;
  for (std::uint32_t p : s.parts) {
    if (theta[p] == kNegInf) return kNegInf;
    total += theta[p];
  }
  return static_cast<double>(total);
}

namespace detail {

// Kahan-compensated sum of exp(x - shift) in extended precision.
inline long double compensated_exp_sum(const std::vector<double>& xs, double shift) {
  long double sum = 0.0L, comp = 0.0L;
  for (double x : xs) {
    if (x == kNegInf) continue;
    const long double y = std::exp(static_cast<long double>(x) - shift) - comp;
    const long double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
  return sum;
}

inline std::vector<double> all_scores(const EnumeratedFamily& ef, std::span<const double> theta) {
  std::vector<double> s;
  s.reserve(ef.structures.size());
  for (const auto& st : ef.structures) s.push_back(score(st, theta));
  return s;
}

inline double log_sum(const std::vector<double>& scores) {
  double hi = kNegInf;
  for (double x : scores) hi = std::max(hi, x);
  if (hi == kNegInf) return kNegInf;
  return static_cast<double>(hi + std::log(compensated_exp_sum(scores, hi)));
}

}  // namespace detail

inline double oracle_log_partition(const EnumeratedFamily& ef, std::span<const double> theta) {
  return detail::log_sum(detail::all_scores(ef, theta));
}

/// p(t) for every enumerated structure.
inline std::vector<double> oracle_probabilities(const EnumeratedFamily& ef, std::span<const double> theta) {
  const auto scores = detail::all_scores(ef, theta);
  const double log_z = detail::log_sum(scores);
  std::vector<double> p(scores.size(), 0.0);
  if (log_z == kNegInf) return p;
  for (std::size_t k = 0; k < scores.size(); ++k)
    p[k] = scores[k] == kNegInf ? 0.0 : static_cast<double>(std::exp(static_cast<long double>(scores[k]) - log_z));
  return p;
}

/// p(e) = sum over structures containing e (with multiplicity) of p(t); flat layout.
inline std::vector<double> oracle_marginals(const EnumeratedFamily& ef, std::span<const double> theta) {
  const auto p = oracle_probabilities(ef, theta);
  std::vector<long double> acc(ef.num_params, 0.0L);
  for (std::size_t k = 0; k < p.size(); ++k)
    for (std::uint32_t part : ef.structures[k].parts) acc[part] += p[k];
  return std::vector<double>(acc.begin(), acc.end());
}

/// -sum p log q over the enumeration; +inf when p puts mass where q has none.
inline double oracle_cross_entropy(const EnumeratedFamily& ef, std::span<const double> theta_p,
                                   std::span<const double> theta_q) {
  const auto p = oracle_probabilities(ef, theta_p);
  const auto sq = detail::all_scores(ef, theta_q);
  const double log_zq = detail::log_sum(sq);
  long double h = 0.0L;
  for (std::size_t k = 0; k < p.size(); ++k) {
    if (p[k] == 0.0) continue;
    if (sq[k] == kNegInf) return kPosInf;
    h -= static_cast<long double>(p[k]) * (sq[k] - log_zq);
  }
  return static_cast<double>(h);
}

inline double oracle_entropy(const EnumeratedFamily& ef, std::span<const double> theta) {
  return oracle_cross_entropy(ef, theta, theta);
}

inline double oracle_kl(const EnumeratedFamily& ef, std::span<const double> theta_p, std::span<const double> theta_q) {
  const double h_pq = oracle_cross_entropy(ef, theta_p, theta_q);
  if (h_pq == kPosInf) return kPosInf;
  return h_pq - oracle_entropy(ef, theta_p);
}

/// Index of the first highest-scoring structure.
inline std::size_t oracle_argmax(const EnumeratedFamily& ef, std::span<const double> theta) {
  const auto s = detail::all_scores(ef, theta);
  return static_cast<std::size_t>(std::max_element(s.begin(), s.end()) - s.begin());
}

inline double oracle_max_score(const EnumeratedFamily& ef, std::span<const double> theta) {
  const auto s = detail::all_scores(ef, theta);
  return s.empty() ? kNegInf : *std::max_element(s.begin(), s.end());
}

/// Dense indicator of a structure in the layout of `like` (a potentials tensor set).
inline TensorSet to_indicator(const Structure& s, const TensorSet& like) {
  std::vector<double> flat(like.total_size(), 0.0);
  for (std::uint32_t p : s.parts) flat[p] += 1.0;
  return like.with_values(flat);
}

/// Flat index multiset of a dense indicator.
inline Structure from_indicator(const TensorSet& t) {
  Structure s;
  const auto flat = t.flatten();
  for (std::size_t k = 0; k < flat.size(); ++k)
    for (double c = flat[k]; c > 0.5; c -= 1.0) s.parts.push_back(static_cast<std::uint32_t>(k));
  return s;
}

/// All bracketings of n leaves, each as its list of 2n-1 inclusive spans.
inline std::vector<std::vector<std::pair<std::size_t, std::size_t>>> enumerate_bracketings(std::size_t n) {
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> out;
  for (const auto& tree : detail::binary_trees(0, n - 1)) {
    std::vector<std::pair<std::size_t, std::size_t>> spans;
    for (const auto& nd : tree) spans.push_back({nd.i, nd.j});
    out.push_back(std::move(spans));
  }
  return out;
}

}  // namespace structdist::oracle
