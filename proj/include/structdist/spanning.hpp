#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

#include "structdist/distribution.hpp"
#include "structdist/hypergraph.hpp"
#include "structdist/linalg.hpp"
#include "structdist/rng.hpp"

namespace structdist {

/// Weighted adjacency [n+1, n+1] over the artificial root (node 0) and n words. Entry (h, d)
/// scores the edge head -> dependent. Undirected mode reads the non-root block as symmetric
/// and the root row as root attachment scores.
struct SpanningTreeCRF {
  Tensor adjacency;
  SpanningFlags flags;

  std::size_t words() const { return adjacency.extent(0) - 1; }

  StructuredDistribution to_distribution() const {
    LogPotentials pots;
    pots.add("adjacency", adjacency);
    Config c;
    c.spanning = flags;
    return StructuredDistribution(Family::spanning_tree, std::move(pots), std::move(c));
  }
  static SpanningTreeCRF from_distribution(const StructuredDistribution& d) {
    return {d.potential("adjacency"), d.config().spanning};
  }
};

/// heads[d] is the head of word d; heads[0] is unused.
using HeadVector = std::vector<std::size_t>;
inline constexpr std::size_t kNoHead = static_cast<std::size_t>(-1);

inline Tensor heads_to_indicator(const HeadVector& heads) {
  const std::size_t size = heads.size();
  Tensor ind({size, size}, 0.0);
  for (std::size_t d = 1; d < size; ++d) ind(heads[d], d) = 1.0;
  return ind;
}

/// Head vector of an adjacency-shaped 0/1 indicator, or nullopt when some word does not have
/// exactly one head or an entry is not 0/1.
inline std::optional<HeadVector> indicator_to_heads(const Tensor& ind) {
  const std::size_t size = ind.extent(0);
  HeadVector heads(size, kNoHead);
  for (std::size_t h = 0; h < size; ++h) {
    for (std::size_t d = 0; d < size; ++d) {
      const double x = ind(h, d);
      if (x == 0.0) continue;
      if (x != 1.0 || d == 0 || h == d || heads[d] != kNoHead) return std::nullopt;
      heads[d] = h;
    }
  }
  for (std::size_t d = 1; d < size; ++d)
    if (heads[d] == kNoHead) return std::nullopt;
  return heads;
}

inline bool reaches_root(const HeadVector& heads) {
  const std::size_t size = heads.size();
  for (std::size_t d = 1; d < size; ++d) {
    std::size_t v = d, steps = 0;
    while (v != 0) {
      v = heads[v];
      if (v >= size || ++steps > size) return false;
    }
  }
  return true;
}

inline std::size_t root_degree(const HeadVector& heads) {
  return static_cast<std::size_t>(std::count(heads.begin() + 1, heads.end(), std::size_t{0}));
}

/// No two edges cross when drawn above the sentence with the root at position 0.
inline bool is_projective(const HeadVector& heads) {
  const std::size_t size = heads.size();
  for (std::size_t a = 1; a < size; ++a) {
    const std::size_t l1 = std::min(a, heads[a]), r1 = std::max(a, heads[a]);
    for (std::size_t b = a + 1; b < size; ++b) {
      const std::size_t l2 = std::min(b, heads[b]), r2 = std::max(b, heads[b]);
      if ((l1 < l2 && l2 < r1 && r1 < r2) || (l2 < l1 && l1 < r2 && r2 < r1)) return false;
    }
  }
  return true;
}

inline bool is_valid_tree(const HeadVector& heads, const SpanningFlags& flags) {
  if (!reaches_root(heads)) return false;
  if (flags.single_root_edge && root_degree(heads) != 1) return false;
  if (flags.projective && !is_projective(heads)) return false;
  return true;
}

/// Undirected trees over all n+1 nodes, oriented away from node 0, are exactly the rooted
/// arborescences of the same matrix read as directed. Checks symmetry and flips the flag.
inline SpanningTreeCRF undirected_to_directed(const SpanningTreeCRF& d) {
  if (d.flags.directed) throw InvalidArgument("undirected_to_directed: instance is already directed");
  (void)d.to_distribution();  // symmetry check
  SpanningTreeCRF out = d;
  out.flags.directed = true;
  return out;
}

namespace detail {

// Laplacian entries touched by edge h -> d, as (row, coefficient) pairs, word w at index w-1.
// Multi-root uses the in-degree Laplacian minor; single-root replaces the first row with the
// root weights and drops root edges from the diagonal.
struct LaplacianEntry {
  std::size_t row;
  double coef;
};

inline std::size_t laplacian_entries(std::size_t h, std::size_t d, bool single_root, LaplacianEntry out[2]) {
  std::size_t k = 0;
  if (h == 0) {
    out[k++] = {single_root ? 0 : d - 1, 1.0};
    return k;
  }
  if (!single_root || d != 1) out[k++] = {d - 1, 1.0};
  if (!single_root || h != 1) out[k++] = {h - 1, -1.0};
  return k;
}

// Column-shifted weights exp(theta(h, d) - shift[d]) with shift[d] the largest incoming score.
struct ShiftedWeights {
  std::vector<double> w;  // (n+1) x (n+1)
  std::vector<double> shift;
  bool unreachable = false;
};

inline ShiftedWeights shifted_weights(const Tensor& adj) {
  const std::size_t size = adj.extent(0);
  ShiftedWeights sw{std::vector<double>(size * size, 0.0), std::vector<double>(size, 0.0)};
  for (std::size_t d = 1; d < size; ++d) {
    double hi = kNegInf;
    for (std::size_t h = 0; h < size; ++h)
      if (h != d) hi = std::max(hi, adj(h, d));
    if (hi == kNegInf) {
      sw.unreachable = true;
      continue;
    }
    sw.shift[d] = hi;
    for (std::size_t h = 0; h < size; ++h)
      if (h != d && adj(h, d) != kNegInf) sw.w[h * size + d] = std::exp(adj(h, d) - hi);
  }
  return sw;
}

inline SquareMatrix laplacian(const ShiftedWeights& sw, std::size_t size, bool single_root) {
  const std::size_t n = size - 1;
  SquareMatrix m(n);
  LaplacianEntry e[2];
  for (std::size_t d = 1; d < size; ++d) {
    for (std::size_t h = 0; h < size; ++h) {
      const double w = sw.w[h * size + d];
      if (w == 0.0) continue;
      const std::size_t k = laplacian_entries(h, d, single_root, e);
      for (std::size_t a = 0; a < k; ++a) m(e[a].row, d - 1) += w * e[a].coef;
    }
  }
  return m;
}

inline double edge_marginal(const SquareMatrix& inv, std::size_t h, std::size_t d, bool single_root, double w) {
  if (w == 0.0) return 0.0;
  LaplacianEntry e[2];
  const std::size_t k = laplacian_entries(h, d, single_root, e);
  double g = 0.0;
  for (std::size_t a = 0; a < k; ++a) g += e[a].coef * inv(d - 1, e[a].row);
  return std::clamp(w * g, 0.0, 1.0);
}

}  // namespace detail

/// log of the Laplacian-minor determinant (Matrix-Tree Theorem) with per-column max shifts.
inline double mtt_log_partition(const Tensor& adj, bool single_root) {
  const std::size_t size = adj.extent(0);
  const auto sw = detail::shifted_weights(adj);
  if (sw.unreachable) return kNegInf;
  const auto det = signed_log_det(detail::laplacian(sw, size, single_root));
  if (det.sign <= 0) return kNegInf;
  double total = det.log_abs_det;
  for (std::size_t d = 1; d < size; ++d) total += sw.shift[d];
  return total;
}

/// Edge marginals by the reverse pass of log det: d log det(M) / d M = M^{-T}.
inline Tensor mtt_marginals(const Tensor& adj, bool single_root) {
  const std::size_t size = adj.extent(0);
  const auto sw = detail::shifted_weights(adj);
  if (sw.unreachable) throw VacuousDistribution();
  const LuFactorization lu(detail::laplacian(sw, size, single_root));
  if (lu.singular() || lu.signed_log_det().sign <= 0) throw VacuousDistribution();
  const SquareMatrix inv = lu.inverse();
  Tensor marg({size, size}, 0.0);
  for (std::size_t d = 1; d < size; ++d)
    for (std::size_t h = 0; h < size; ++h)
      if (h != d) marg(h, d) = detail::edge_marginal(inv, h, d, single_root, sw.w[h * size + d]);
  return marg;
}

/// Eisner's first-order projective chart; parameters index the flattened adjacency.
/// Single-root mode builds the word-only chart and attaches exactly one word to the root.
inline Hypergraph eisner_hypergraph(std::size_t n, bool single_root) {
  const std::size_t size = n + 1;
  const auto arc = [&](std::size_t h, std::size_t d) { return static_cast<std::int32_t>(h * size + d); };
  const std::size_t lo = single_root ? 1 : 0;
  constexpr NodeId kNone = static_cast<NodeId>(-1);
  // [i*size+j]
  std::vector<NodeId> base(size, kNone), inc_r(size * size, kNone), inc_l(size * size, kNone),
      comp_r(size * size, kNone), comp_l(size * size, kNone);
  Hypergraph hg;
  for (std::size_t i = lo; i < size; ++i) {
    base[i] = hg.begin_node();
    hg.add_edge({});
  }
  const auto cr = [&](std::size_t i, std::size_t j) { return i == j ? base[i] : comp_r[i * size + j]; };
  const auto cl = [&](std::size_t i, std::size_t j) { return i == j ? base[i] : comp_l[i * size + j]; };

  for (std::size_t len = 1; len < size - lo; ++len) {
    for (std::size_t i = lo; i + len < size; ++i) {
      const std::size_t j = i + len;
      inc_r[i * size + j] = hg.begin_node();
      for (std::size_t k = i; k < j; ++k) hg.add_edge({cr(i, k), cl(k + 1, j)}, arc(i, j));
      if (i != 0) {
        inc_l[i * size + j] = hg.begin_node();
        for (std::size_t k = i; k < j; ++k) hg.add_edge({cr(i, k), cl(k + 1, j)}, arc(j, i));
      }
      comp_r[i * size + j] = hg.begin_node();
      for (std::size_t k = i + 1; k <= j; ++k) hg.add_edge({inc_r[i * size + k], cr(k, j)});
      if (i != 0) {
        comp_l[i * size + j] = hg.begin_node();
        for (std::size_t k = i; k < j; ++k) hg.add_edge({cl(i, k), inc_l[k * size + j]});
      }
    }
  }
  hg.begin_node();
  if (single_root) {
    for (std::size_t d = 1; d < size; ++d) hg.add_edge({cl(1, d), cr(d, n)}, arc(0, d));
  } else {
    hg.add_edge({cr(0, n)});
  }
  return hg;
}

/// Heads of the arcs used by a derivation of eisner_hypergraph().
inline HeadVector heads_from_counts(std::span<const double> counts, std::size_t size) {
  HeadVector heads(size, kNoHead);
  for (std::size_t h = 0; h < size; ++h)
    for (std::size_t d = 0; d < size; ++d)
      if (counts[h * size + d] > 0.0) heads[d] = h;
  return heads;
}

/// Max-plus Eisner. Used as the reference for the arc-hybrid argmax.
inline HeadVector eisner_argmax(const Tensor& adj, bool single_root) {
  const std::size_t size = adj.extent(0);
  const auto hg = eisner_hypergraph(size - 1, single_root);
  const auto edges = viterbi_derivation(hg, adj.data());
  return heads_from_counts(derivation_counts(hg, edges, adj.size()), size);
}

namespace detail {

inline double reweighting_constant(const Tensor& adj) {
  double hi = kNegInf, lo = kPosInf;
  for (double x : adj.data()) {
    if (x == kNegInf) continue;
    hi = std::max(hi, x);
    lo = std::min(lo, x);
  }
  if (hi == kNegInf) return 1.0;
  return static_cast<double>(adj.extent(0) - 1) * (hi - lo) + 1.0;
}

// Subtracts a constant larger than any achievable score gap from every root edge, so an
// unconstrained maximizer prefers trees with a single root edge.
inline Tensor reweight_root_edges(const Tensor& adj) {
  const double c = reweighting_constant(adj);
  Tensor out = adj;
  for (std::size_t d = 1; d < adj.extent(0); ++d)
    if (out(0, d) != kNegInf) out(0, d) -= c;
  return out;
}

inline void require_finite_tree(const Tensor& adj, const HeadVector& heads, bool single_root) {
  for (std::size_t d = 1; d < heads.size(); ++d) {
    if (heads[d] == kNoHead || adj(heads[d], d) == kNegInf) throw VacuousDistribution();
  }
  if (single_root && root_degree(heads) != 1) throw VacuousDistribution();
}

}  // namespace detail

/// Tabulated arc-hybrid parser (argmax only: its derivations are not unique per tree).
/// Item [k, j] has k on top of the stack and j at the front of the buffer; position n+1 is the
/// end of the buffer. Combining [k, i] and [i, j] reduces i under head k (right arc) or j (left arc).
/// Ties prefer the smallest split, then the right arc.
inline HeadVector kuhlmann_argmax(const Tensor& adj_in, bool single_root) {
  const Tensor adj = single_root ? detail::reweight_root_edges(adj_in) : adj_in;
  const std::size_t n = adj.extent(0) - 1, end = n + 1, width = n + 2;
  std::vector<double> score(width * width, kNegInf);
  std::vector<std::size_t> split(width * width, 0), head(width * width, 0);
  for (std::size_t k = 0; k + 1 <= end; ++k) score[k * width + k + 1] = 0.0;
  for (std::size_t len = 2; len <= end; ++len) {
    for (std::size_t k = 0; k + len <= end; ++k) {
      const std::size_t j = k + len;
      double best = kNegInf;
      for (std::size_t i = k + 1; i < j; ++i) {
        const double inner = score[k * width + i] + score[i * width + j];
        if (inner == kNegInf) continue;
        const double right = adj(k, i);
        const double left = j <= n ? adj(j, i) : kNegInf;
        if (inner + right > best) {
          best = inner + right;
          split[k * width + j] = i;
          head[k * width + j] = k;
        }
        if (inner + left > best) {
          best = inner + left;
          split[k * width + j] = i;
          head[k * width + j] = j;
        }
      }
      score[k * width + j] = best;
    }
  }
  if (score[end] == kNegInf) throw VacuousDistribution();

  HeadVector heads(n + 1, kNoHead);
  std::vector<std::pair<std::size_t, std::size_t>> stack{{0, end}};
  while (!stack.empty()) {
    auto [k, j] = stack.back();
    stack.pop_back();
    if (j == k + 1) continue;
    const std::size_t i = split[k * width + j];
    heads[i] = head[k * width + j];
    stack.push_back({i, j});
    stack.push_back({k, i});
  }
  detail::require_finite_tree(adj_in, heads, single_root);
  return heads;
}

namespace detail {

using WeightMatrix = std::vector<std::vector<double>>;

// Chu-Liu/Edmonds: greedy best incoming edges, then contract a cycle and recurse.
// Ties prefer the smallest head index.
inline HeadVector chu_liu_edmonds(const WeightMatrix& w) {
  const std::size_t size = w.size();
  HeadVector heads(size, kNoHead);
  for (std::size_t v = 1; v < size; ++v) {
    double best = kNegInf;
    for (std::size_t u = 0; u < size; ++u) {
      if (u != v && w[u][v] > best) {
        best = w[u][v];
        heads[v] = u;
      }
    }
    if (heads[v] == kNoHead) throw VacuousDistribution();
  }

  std::vector<int> color(size, 0);  // 0 unvisited, 1 on current path, 2 done
  color[0] = 2;
  std::vector<std::size_t> cycle;
  for (std::size_t s = 1; s < size && cycle.empty(); ++s) {
    std::vector<std::size_t> path;
    std::size_t v = s;
    while (color[v] == 0) {
      color[v] = 1;
      path.push_back(v);
      v = heads[v];
    }
    if (color[v] == 1) {
      for (std::size_t u = v;;) {
        cycle.push_back(u);
        u = heads[u];
        if (u == v) break;
      }
    }
    for (std::size_t u : path) color[u] = 2;
  }
  if (cycle.empty()) return heads;

  std::vector<char> in_cycle(size, 0);
  for (std::size_t v : cycle) in_cycle[v] = 1;
  std::vector<std::size_t> to_new(size, 0), to_old;
  for (std::size_t v = 0; v < size; ++v) {
    if (in_cycle[v]) continue;
    to_new[v] = to_old.size();
    to_old.push_back(v);
  }
  const std::size_t c = to_old.size();
  for (std::size_t v : cycle) to_new[v] = c;
  const std::size_t reduced = c + 1;

  WeightMatrix w2(reduced, std::vector<double>(reduced, kNegInf));
  std::vector<std::size_t> enter(reduced, kNoHead), leave(reduced, kNoHead);
  for (std::size_t u = 0; u < size; ++u) {
    for (std::size_t v = 1; v < size; ++v) {
      if (u == v || w[u][v] == kNegInf) continue;
      if (!in_cycle[u] && !in_cycle[v]) {
        w2[to_new[u]][to_new[v]] = w[u][v];
      } else if (!in_cycle[u] && in_cycle[v]) {
        const double val = w[u][v] - w[heads[v]][v];
        if (val > w2[to_new[u]][c]) {
          w2[to_new[u]][c] = val;
          enter[to_new[u]] = v;
        }
      } else if (in_cycle[u] && !in_cycle[v]) {
        if (w[u][v] > w2[c][to_new[v]]) {
          w2[c][to_new[v]] = w[u][v];
          leave[to_new[v]] = u;
        }
      }
    }
  }

  const HeadVector sub = chu_liu_edmonds(w2);
  HeadVector out = heads;
  for (std::size_t v2 = 1; v2 < c; ++v2) {
    const std::size_t h2 = sub[v2];
    out[to_old[v2]] = h2 == c ? leave[v2] : to_old[h2];
  }
  const std::size_t u2 = sub[c];
  out[enter[u2]] = to_old[u2];
  return out;
}

}  // namespace detail

/// Maximum arborescence (Chu-Liu/Edmonds). Single-root trees come from the reweighting trick.
inline HeadVector cle_argmax(const Tensor& adj_in, bool single_root) {
  const Tensor adj = single_root ? detail::reweight_root_edges(adj_in) : adj_in;
  const std::size_t size = adj.extent(0);
  detail::WeightMatrix w(size, std::vector<double>(size, kNegInf));
  for (std::size_t h = 0; h < size; ++h)
    for (std::size_t d = 1; d < size; ++d)
      if (h != d) w[h][d] = adj(h, d);
  HeadVector heads = detail::chu_liu_edmonds(w);
  detail::require_finite_tree(adj_in, heads, single_root);
  return heads;
}

inline constexpr std::size_t kWilsonStepLimit = 10'000'000;

namespace detail {

// Loop-erased random walks towards the root; each word steps to a head drawn in proportion to
// its incoming edge weight.
inline HeadVector wilson_multi_root(const Tensor& adj, Rng& rng) {
  const std::size_t size = adj.extent(0);
  const auto sw = shifted_weights(adj);
  if (sw.unreachable) throw VacuousDistribution();
  std::vector<std::vector<double>> incoming(size, std::vector<double>(size, 0.0));
  for (std::size_t d = 1; d < size; ++d)
    for (std::size_t h = 0; h < size; ++h) incoming[d][h] = sw.w[h * size + d];

  HeadVector next(size, kNoHead);
  std::vector<char> in_tree(size, 0);
  in_tree[0] = 1;
  std::size_t steps = 0;
  for (std::size_t i = 1; i < size; ++i) {
    for (std::size_t u = i; !in_tree[u]; u = next[u]) {
      if (++steps > kWilsonStepLimit) {
        throw SamplerStepLimit("wilson_sample: exceeded " + std::to_string(kWilsonStepLimit) +
                               " walk steps; weights are near-degenerate, retry with colbourn_sample");
      }
      next[u] = rng.categorical(incoming[u]);
    }
    for (std::size_t u = i; !in_tree[u]; u = next[u]) in_tree[u] = 1;
  }
  next[0] = kNoHead;
  return next;
}

inline Tensor only_root_child(const Tensor& adj, std::size_t child) {
  Tensor out = adj;
  for (std::size_t d = 1; d < adj.extent(0); ++d)
    if (d != child) out(0, d) = kNegInf;
  return out;
}

}  // namespace detail

/// Wilson's sampler. Single-root: draw the root's child from its exact single-root marginal,
/// then walk with only that root edge available.
inline HeadVector wilson_sample(const Tensor& adj, bool single_root, Rng& rng) {
  if (!single_root) return detail::wilson_multi_root(adj, rng);
  const std::size_t size = adj.extent(0);
  std::size_t child = 1;
  if (size > 2) {
    const Tensor marg = mtt_marginals(adj, true);
    std::vector<double> root_row(size, 0.0);
    for (std::size_t d = 1; d < size; ++d) root_row[d] = marg(0, d);
    child = rng.categorical(root_row);
  } else if (adj(0, 1) == kNegInf) {
    throw VacuousDistribution();
  }
  return detail::wilson_multi_root(detail::only_root_child(adj, child), rng);
}

/// Colbourn's sampler: visit words in order, draw each head from its marginal given the earlier
/// choices, and fix that column of the Laplacian with a Sherman-Morrison update of the inverse.
/// Falls back to Wilson when a pivot drops below 1e-12.
inline HeadVector colbourn_sample(const Tensor& adj, bool single_root, Rng& rng) {
  constexpr double kPivotFloor = 1e-12;
  const std::size_t size = adj.extent(0), n = size - 1;
  const auto sw = detail::shifted_weights(adj);
  if (sw.unreachable) throw VacuousDistribution();
  SquareMatrix m = detail::laplacian(sw, size, single_root);
  const LuFactorization lu(m);
  if (lu.singular() || lu.signed_log_det().sign <= 0) {
    if (mtt_log_partition(adj, single_root) == kNegInf) throw VacuousDistribution();
    return wilson_sample(adj, single_root, rng);
  }
  SquareMatrix inv = lu.inverse();

  HeadVector heads(size, kNoHead);
  std::vector<double> probs(size), u(n), inv_u(n), row(n);
  detail::LaplacianEntry e[2];
  for (std::size_t d = 1; d < size; ++d) {
    for (std::size_t h = 0; h < size; ++h) {
      probs[h] = h == d ? 0.0 : detail::edge_marginal(inv, h, d, single_root, sw.w[h * size + d]);
    }
    const std::size_t h = rng.categorical(probs);
    heads[d] = h;

    // new column d-1: the single chosen edge with unit weight
    std::fill(u.begin(), u.end(), 0.0);
    const std::size_t k = detail::laplacian_entries(h, d, single_root, e);
    for (std::size_t a = 0; a < k; ++a) u[e[a].row] += e[a].coef;
    for (std::size_t r = 0; r < n; ++r) u[r] -= m(r, d - 1);

    double denom = 1.0;
    for (std::size_t r = 0; r < n; ++r) denom += inv(d - 1, r) * u[r];
    if (std::abs(denom) < kPivotFloor) return wilson_sample(adj, single_root, rng);
    for (std::size_t r = 0; r < n; ++r) {
      double s = 0.0;
      for (std::size_t q = 0; q < n; ++q) s += inv(r, q) * u[q];
      inv_u[r] = s;
      row[r] = inv(d - 1, r);
    }
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t q = 0; q < n; ++q) inv(r, q) -= inv_u[r] * row[q] / denom;
    for (std::size_t r = 0; r < n; ++r) m(r, d - 1) += u[r];
  }
  return heads;
}

// Spanning-tree level entry points. Undirected instances are reduced to directed ones first.

namespace detail {

inline SpanningTreeCRF directed_form(const SpanningTreeCRF& d) {
  return d.flags.directed ? d : undirected_to_directed(d);
}

inline void require_projective(const SpanningTreeCRF& d, bool projective, const char* op) {
  if (d.flags.projective != projective) {
    throw InvalidArgument(std::string(op) + (projective ? " needs a projective instance" : " needs a non-projective instance"));
  }
}

}  // namespace detail

inline double mtt_log_partition(const SpanningTreeCRF& d) {
  detail::require_projective(d, false, "mtt_log_partition");
  const auto dd = detail::directed_form(d);
  return mtt_log_partition(dd.adjacency, dd.flags.single_root_edge);
}

inline double eisner_log_partition(const SpanningTreeCRF& d) {
  detail::require_projective(d, true, "eisner_log_partition");
  const auto dd = detail::directed_form(d);
  const auto dist = dd.to_distribution();
  return goal_score<LogSemiring>(eisner_hypergraph(dd.words(), dd.flags.single_root_edge), dist.theta());
}

inline Tensor kuhlmann_argmax(const SpanningTreeCRF& d) {
  detail::require_projective(d, true, "kuhlmann_argmax");
  const auto dd = detail::directed_form(d);
  return heads_to_indicator(kuhlmann_argmax(dd.to_distribution().potential("adjacency"), dd.flags.single_root_edge));
}

inline Tensor cle_argmax(const SpanningTreeCRF& d) {
  detail::require_projective(d, false, "cle_argmax");
  const auto dd = detail::directed_form(d);
  return heads_to_indicator(cle_argmax(dd.to_distribution().potential("adjacency"), dd.flags.single_root_edge));
}

inline Tensor wilson_sample(const SpanningTreeCRF& d, RandomSeed seed) {
  detail::require_projective(d, false, "wilson_sample");
  const auto dd = detail::directed_form(d);
  Rng rng(seed);
  return heads_to_indicator(wilson_sample(dd.to_distribution().potential("adjacency"), dd.flags.single_root_edge, rng));
}

inline Tensor colbourn_sample(const SpanningTreeCRF& d, RandomSeed seed) {
  detail::require_projective(d, false, "colbourn_sample");
  const auto dd = detail::directed_form(d);
  Rng rng(seed);
  return heads_to_indicator(colbourn_sample(dd.to_distribution().potential("adjacency"), dd.flags.single_root_edge, rng));
}

}  // namespace structdist
