#pragma once

#include <utility>
#include <vector>

#include "structdist/distribution.hpp"
#include "structdist/hypergraph.hpp"

namespace structdist {

/// Inclusive leaf span [first, last].
using Span = std::pair<std::size_t, std::size_t>;

/// Span-factored tree CRF. spans: [n, n, m] log-potentials of labelled spans (i, j, label), i <= j.
/// Every node of the binary tree, leaves included, carries one label factor.
struct TreeCRF {
  Tensor spans;

  StructuredDistribution to_distribution() const {
    LogPotentials pots;
    pots.add("spans", spans);
    return StructuredDistribution(Family::tree_crf, std::move(pots));
  }
};

/// PCFG in Chomsky normal form. Child indices 0..nt-1 are nonterminals, nt..nt+pt-1 preterminals.
/// Spans of length one are preterminals, longer spans nonterminals.
///   root      [nt]                 log p(root = A)
///   rules     [nt, nt+pt, nt+pt]   log p(A -> B C)
///   emissions [n, pt]              log-potential of preterminal P at token i
///   sticky    [n, n]               span mask in {0, -inf}
struct PCFG {
  Tensor root;
  Tensor rules;
  Tensor emissions;
  Tensor sticky;

  StructuredDistribution to_distribution() const {
    LogPotentials pots;
    pots.add("root", root);
    pots.add("rules", rules);
    pots.add("emissions", emissions);
    if (sticky.size() > 0) pots.add("sticky", sticky);
    return StructuredDistribution(Family::pcfg, std::move(pots));
  }
};

/// CKY with the label sum folded per span before the split sum: node L(i,j) sums labels,
/// node S(i,j) combines L(i,j) with every split of (i,j).
inline Hypergraph tree_crf_hypergraph(const Config& c) {
  const std::size_t n = c.n, m = c.m;
  const auto label = [&](std::size_t i, std::size_t j, std::size_t l) {
    return static_cast<std::int32_t>((i * n + j) * m + l);
  };
  Hypergraph hg;
  std::vector<NodeId> tree(n * n);
  for (std::size_t len = 1; len <= n; ++len) {
    for (std::size_t i = 0; i + len <= n; ++i) {
      const std::size_t j = i + len - 1;
      const NodeId labels = hg.begin_node();
      for (std::size_t l = 0; l < m; ++l) hg.add_edge({}, label(i, j, l));
      tree[i * n + j] = hg.begin_node();
      if (len == 1) {
        hg.add_edge({labels});
      } else {
        for (std::size_t k = i; k < j; ++k) hg.add_edge({labels, tree[i * n + k], tree[(k + 1) * n + j]});
      }
    }
  }
  return hg;
}

inline double cky_log_partition(const TreeCRF& t) {
  const auto dist = t.to_distribution();
  return goal_score<LogSemiring>(tree_crf_hypergraph(dist.config()), dist.theta());
}

struct PcfgLayout {
  std::size_t n, nt, pt;

  std::size_t children() const { return nt + pt; }
  std::int32_t root(std::size_t a) const { return static_cast<std::int32_t>(a); }
  std::int32_t rule(std::size_t a, std::size_t b, std::size_t c) const {
    return static_cast<std::int32_t>(nt + (a * children() + b) * children() + c);
  }
  std::int32_t emission(std::size_t i, std::size_t p) const {
    return static_cast<std::int32_t>(nt + nt * children() * children() + i * pt + p);
  }
  std::int32_t sticky(std::size_t i, std::size_t j) const {
    return static_cast<std::int32_t>(nt + nt * children() * children() + n * pt + i * n + j);
  }
};

/// Inside algorithm over derivations. Each chart item also pays its span's sticky entry, so
/// the derivative of logZ with respect to sticky(i, j) is the marginal of span (i, j).
inline Hypergraph pcfg_hypergraph(const Config& c) {
  const PcfgLayout lay{c.n, c.nt, c.pt};
  const std::size_t n = c.n, k_all = lay.children();
  // chart[(i*n+j)*k_all + child index]
  std::vector<NodeId> chart(n * n * k_all, 0);
  Hypergraph hg;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t p = 0; p < c.pt; ++p) {
      chart[(i * n + i) * k_all + c.nt + p] = hg.begin_node();
      hg.add_edge({}, lay.emission(i, p), lay.sticky(i, i));
    }
  }
  for (std::size_t len = 2; len <= n; ++len) {
    for (std::size_t i = 0; i + len <= n; ++i) {
      const std::size_t j = i + len - 1;
      for (std::size_t a = 0; a < c.nt; ++a) {
        chart[(i * n + j) * k_all + a] = hg.begin_node();
        for (std::size_t k = i; k < j; ++k) {
          const bool left_leaf = k == i, right_leaf = k + 1 == j;
          const std::size_t b_lo = left_leaf ? c.nt : 0, b_hi = left_leaf ? k_all : c.nt;
          const std::size_t c_lo = right_leaf ? c.nt : 0, c_hi = right_leaf ? k_all : c.nt;
          for (std::size_t b = b_lo; b < b_hi; ++b) {
            for (std::size_t cc = c_lo; cc < c_hi; ++cc) {
              hg.add_edge({chart[(i * n + k) * k_all + b], chart[((k + 1) * n + j) * k_all + cc]}, lay.rule(a, b, cc),
                          lay.sticky(i, j));
            }
          }
        }
      }
    }
  }
  hg.begin_node();
  for (std::size_t a = 0; a < c.nt; ++a) hg.add_edge({chart[(n - 1) * k_all + a]}, lay.root(a));
  return hg;
}

/// log p(sentence).
inline double pcfg_inside(const PCFG& g) {
  const auto dist = g.to_distribution();
  return goal_score<LogSemiring>(pcfg_hypergraph(dist.config()), dist.theta());
}

/// True when `spans` are exactly the 2n-1 node spans of one binary tree over n leaves.
inline bool is_binary_bracketing(std::size_t n, std::span<const Span> spans) {
  if (n == 0 || spans.size() != 2 * n - 1) return false;
  std::vector<char> has(n * n, 0);
  for (auto [i, j] : spans) {
    if (i > j || j >= n || has[i * n + j]) return false;
    has[i * n + j] = 1;
  }
  std::size_t visited = 0;
  std::vector<Span> stack{{0, n - 1}};
  while (!stack.empty()) {
    auto [i, j] = stack.back();
    stack.pop_back();
    if (!has[i * n + j]) return false;
    ++visited;
    if (i == j) continue;
    bool split = false;
    for (std::size_t k = i; k < j && !split; ++k) {
      if (has[i * n + k] && has[(k + 1) * n + j]) {
        stack.push_back({i, k});
        stack.push_back({k + 1, j});
        split = true;
      }
    }
    if (!split) return false;
  }
  return visited == spans.size();
}

/// Spans marked 1 in an [n, n] mask, row-major.
inline std::vector<Span> spans_of_mask(const Tensor& mask) {
  std::vector<Span> spans;
  const std::size_t n = mask.extent(0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (mask(i, j) != 0.0) spans.push_back({i, j});
  return spans;
}

/// log p(bracketing) marginalized over labels: the inside pass with sticky 0 on the tree's
/// spans and -inf elsewhere.
inline double pcfg_masked_inside(const StructuredDistribution& grammar, std::span<const Span> spans) {
  if (grammar.family() != Family::pcfg) throw InvalidArgument("pcfg_masked_inside: not a pcfg");
  const Config& c = grammar.config();
  if (!is_binary_bracketing(c.n, spans)) throw InvalidArgument("pcfg_masked_inside: invalid bracketing");
  const PcfgLayout lay{c.n, c.nt, c.pt};
  std::vector<double> theta(grammar.theta().begin(), grammar.theta().end());
  std::vector<char> keep(c.n * c.n, 0);
  for (auto [i, j] : spans) keep[i * c.n + j] = 1;
  for (std::size_t i = 0; i < c.n; ++i)
    for (std::size_t j = 0; j < c.n; ++j)
      if (!keep[i * c.n + j]) theta[static_cast<std::size_t>(lay.sticky(i, j))] = kNegInf;
  return goal_score<LogSemiring>(pcfg_hypergraph(c), theta);
}

inline double pcfg_masked_inside(const PCFG& g, std::span<const Span> spans) {
  return pcfg_masked_inside(g.to_distribution(), spans);
}

}  // namespace structdist
