#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "structdist/distribution.hpp"
#include "structdist/hypergraph.hpp"

namespace structdist {

/// Moves into a grid cell, in the last axis of the move tensor.
enum AlignmentMove : std::size_t { kDiagonal = 0, kDown = 1, kRight = 2 };

/// Monotone (Needleman-Wunsch) alignment. moves: [n+1, m+1, 3] log-potentials of the move
/// that enters cell (i, j): diagonal from (i-1, j-1), down from (i-1, j), right from (i, j-1).
struct MonotoneAlignmentCRF {
  Tensor moves;

  StructuredDistribution to_distribution() const {
    LogPotentials pots;
    pots.add("moves", moves);
    return StructuredDistribution(Family::monotone_alignment, std::move(pots));
  }
};

/// CTC over frames [T, V] with blank at index 0 and a target of labels in 1..V-1.
struct CTCDist {
  Tensor frames;
  std::vector<std::size_t> target;

  StructuredDistribution to_distribution() const {
    LogPotentials pots;
    pots.add("frames", frames);
    Config c;
    c.target = target;
    return StructuredDistribution(Family::ctc, std::move(pots), std::move(c));
  }
};

/// Bijective matching scores [n, n]. Only the argmax is tractable.
struct OneToOneMatching {
  Tensor scores;
};

inline Hypergraph alignment_hypergraph(const Config& c) {
  const std::size_t rows = c.n + 1, cols = c.m + 1;
  const auto move = [&](std::size_t i, std::size_t j, std::size_t k) {
    return static_cast<std::int32_t>((i * cols + j) * 3 + k);
  };
  Hypergraph hg;
  std::vector<NodeId> cell(rows * cols);
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) {
      cell[i * cols + j] = hg.begin_node();
      if (i == 0 && j == 0) {
        hg.add_edge({});
        continue;
      }
      if (i > 0 && j > 0) hg.add_edge({cell[(i - 1) * cols + j - 1]}, move(i, j, kDiagonal));
      if (i > 0) hg.add_edge({cell[(i - 1) * cols + j]}, move(i, j, kDown));
      if (j > 0) hg.add_edge({cell[i * cols + j - 1]}, move(i, j, kRight));
    }
  }
  return hg;
}

inline double nw_log_partition(const MonotoneAlignmentCRF& a) {
  const auto dist = a.to_distribution();
  return goal_score<LogSemiring>(alignment_hypergraph(dist.config()), dist.theta());
}

/// Expanded-target lattice: state 2k is a blank, state 2k+1 is target[k].
inline Hypergraph ctc_hypergraph(const Config& c) {
  const std::size_t frames = c.n, vocab = c.v, len = c.target.size();
  const std::size_t states = 2 * len + 1;
  const auto label = [&](std::size_t s) { return s % 2 == 0 ? std::size_t{0} : c.target[s / 2]; };
  const auto frame = [&](std::size_t t, std::size_t s) { return static_cast<std::int32_t>(t * vocab + label(s)); };

  Hypergraph hg;
  std::vector<NodeId> prev(states), cur(states);
  for (std::size_t s = 0; s < states; ++s) {
    prev[s] = hg.begin_node();
    if (s <= 1) hg.add_edge({}, frame(0, s));
  }
  for (std::size_t t = 1; t < frames; ++t) {
    for (std::size_t s = 0; s < states; ++s) {
      cur[s] = hg.begin_node();
      hg.add_edge({prev[s]}, frame(t, s));
      if (s >= 1) hg.add_edge({prev[s - 1]}, frame(t, s));
      if (s >= 2 && s % 2 == 1 && label(s) != label(s - 2)) hg.add_edge({prev[s - 2]}, frame(t, s));
    }
    std::swap(prev, cur);
  }
  hg.begin_node();
  hg.add_edge({prev[states - 1]});
  if (len >= 1) hg.add_edge({prev[states - 2]});
  return hg;
}

/// -inf when the target cannot fit in the available frames.
inline double ctc_log_partition(const CTCDist& c) {
  const auto dist = c.to_distribution();
  return goal_score<LogSemiring>(ctc_hypergraph(dist.config()), dist.theta());
}

/// Collapses a frame labelling: merge repeats, then drop blanks.
inline std::vector<std::size_t> ctc_collapse(std::span<const std::size_t> frames) {
  std::vector<std::size_t> out;
  std::size_t last = 0;
  bool have_last = false;
  for (std::size_t label : frames) {
    if (!(have_last && label == last) && label != 0) out.push_back(label);
    last = label;
    have_last = true;
  }
  return out;
}

namespace detail {

struct Assignment {
  double cost = 0.0;
  std::vector<std::size_t> column_of_row;
};

// Shortest augmenting path with dual potentials (Jonker-Volgenant style), minimizing cost.
inline Assignment min_cost_assignment(const std::vector<std::vector<double>>& cost) {
  const std::size_t n = cost.size();
  Assignment result;
  if (n == 0) return result;
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<std::size_t> p(n + 1, 0), way(n + 1, 0);
  for (std::size_t i = 1; i <= n; ++i) {
    p[0] = i;
    std::size_t j0 = 0;
    std::vector<double> minv(n + 1, inf);
    std::vector<char> used(n + 1, 0);
    do {
      used[j0] = 1;
      const std::size_t i0 = p[j0];
      double delta = inf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  result.column_of_row.assign(n, 0);
  for (std::size_t j = 1; j <= n; ++j) result.column_of_row[p[j] - 1] = j - 1;
  for (std::size_t i = 0; i < n; ++i) result.cost += cost[i][result.column_of_row[i]];
  return result;
}

inline double min_cost_excluding(const std::vector<std::vector<double>>& cost, const std::vector<std::size_t>& rows,
                                 const std::vector<std::size_t>& cols) {
  std::vector<std::vector<double>> sub(rows.size(), std::vector<double>(cols.size()));
  for (std::size_t a = 0; a < rows.size(); ++a)
    for (std::size_t b = 0; b < cols.size(); ++b) sub[a][b] = cost[rows[a]][cols[b]];
  return min_cost_assignment(sub).cost;
}

}  // namespace detail

/// Maximum-score permutation as an [n, n] 0/1 matrix. Among optimal permutations the one with the
/// smallest column at the first differing row is returned.
inline Tensor assignment_argmax(const OneToOneMatching& matching) {
  const Tensor& s = matching.scores;
  if (s.rank() != 2 || s.extent(0) != s.extent(1)) throw InvalidArgument("assignment: scores must be square");
  const std::size_t n = s.extent(0);
  double hi = kNegInf, lo = kPosInf;
  for (double x : s.data()) {
    if (x == kNegInf) continue;
    hi = std::max(hi, x);
    lo = std::min(lo, x);
  }
  if (hi == kNegInf) throw VacuousDistribution("assignment: every permutation has score -inf");
  const double range = hi - lo;
  const double forbidden = static_cast<double>(n) * (range + 1.0) + 1.0;
  std::vector<std::vector<double>> cost(n, std::vector<double>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) cost[i][j] = s(i, j) == kNegInf ? forbidden : hi - s(i, j);

  const double best = detail::min_cost_assignment(cost).cost;
  if (best >= forbidden) throw VacuousDistribution("assignment: every permutation has score -inf");
  const double tol = 1e-9 * std::max(1.0, std::abs(best));

  Tensor perm({n, n}, 0.0);
  std::vector<char> taken(n, 0);
  double prefix = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<std::size_t> rows;
    for (std::size_t r = i + 1; r < n; ++r) rows.push_back(r);
    for (std::size_t c = 0; c < n; ++c) {
      if (taken[c] || cost[i][c] >= forbidden) continue;
      std::vector<std::size_t> cols;
      for (std::size_t k = 0; k < n; ++k)
        if (!taken[k] && k != c) cols.push_back(k);
      const double total = prefix + cost[i][c] + detail::min_cost_excluding(cost, rows, cols);
      if (total <= best + tol) {
        perm(i, c) = 1.0;
        taken[c] = 1;
        prefix += cost[i][c];
        break;
      }
    }
  }
  return perm;
}

}  // namespace structdist
