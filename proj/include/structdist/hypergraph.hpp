#pragma once

#include <array>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <vector>

#include "structdist/numerics.hpp"
#include "structdist/rng.hpp"
#include "structdist/semiring.hpp"

namespace structdist {

// A dynamic program recorded as an acyclic hypergraph. Every chart item is a node; every way of
// building an item from smaller items is a hyperedge whose weight is the sum of at most two
// log-potential entries (indices into a flat parameter vector). Nodes are created in topological
// order and the last node is the goal item. One recorded program serves every inference task:
// the inside pass gives logZ (or the max score), the outside pass gives marginals, backpointers
// give the argmax and top-down categorical choices give exact samples.

using NodeId = std::uint32_t;
using EdgeId = std::uint32_t;
inline constexpr std::int32_t kNoParam = -1;

class Hypergraph {
 public:
  using Params = std::array<std::int32_t, 2>;

  /// Opens a new node; edges added until the next begin_node() derive it.
  NodeId begin_node() {
    node_begin_.push_back(static_cast<EdgeId>(params_.size()));
    return static_cast<NodeId>(node_begin_.size() - 1);
  }

  void add_edge(std::span<const NodeId> tails, std::int32_t p0 = kNoParam, std::int32_t p1 = kNoParam) {
    if (node_begin_.empty()) throw InvalidArgument("hypergraph: add_edge before begin_node");
    const NodeId head = static_cast<NodeId>(node_begin_.size() - 1);
    for (NodeId t : tails) {
      if (t >= head) throw InvalidArgument("hypergraph: tails must precede their head");
    }
    if (tail_begin_.empty()) tail_begin_.push_back(0);
    tails_.insert(tails_.end(), tails.begin(), tails.end());
    tail_begin_.push_back(static_cast<std::uint32_t>(tails_.size()));
    params_.push_back({p0, p1});
  }
  void add_edge(std::initializer_list<NodeId> tails, std::int32_t p0 = kNoParam, std::int32_t p1 = kNoParam) {
    add_edge(std::span<const NodeId>(tails.begin(), tails.size()), p0, p1);
  }

  std::size_t num_nodes() const noexcept { return node_begin_.size(); }
  std::size_t num_edges() const noexcept { return params_.size(); }
  NodeId goal() const { return static_cast<NodeId>(node_begin_.size() - 1); }

  EdgeId edges_begin(NodeId v) const { return node_begin_[v]; }
  EdgeId edges_end(NodeId v) const {
    return v + 1 < node_begin_.size() ? node_begin_[v + 1] : static_cast<EdgeId>(params_.size());
  }
  std::span<const NodeId> tails(EdgeId e) const {
    return std::span<const NodeId>(tails_).subspan(tail_begin_[e], tail_begin_[e + 1] - tail_begin_[e]);
  }
  const Params& params(EdgeId e) const { return params_[e]; }

  double weight(EdgeId e, std::span<const double> theta) const {
    double w = 0.0;
    for (std::int32_t p : params_[e]) {
      if (p != kNoParam) w += theta[static_cast<std::size_t>(p)];
    }
    return w;
  }

 private:
  std::vector<EdgeId> node_begin_;
  std::vector<std::uint32_t> tail_begin_;
  std::vector<NodeId> tails_;
  std::vector<Params> params_;
};

namespace detail {

template <Semiring S>
double edge_inside(const Hypergraph& hg, EdgeId e, std::span<const double> theta, const std::vector<double>& inside) {
  double v = hg.weight(e, theta);
  for (NodeId t : hg.tails(e)) v = S::times(v, inside[t]);
  return v;
}

}  // namespace detail

/// Inside scores of every node under semiring S.
template <Semiring S>
std::vector<double> inside(const Hypergraph& hg, std::span<const double> theta) {
  std::vector<double> score(hg.num_nodes(), S::zero());
  std::vector<double> terms;
  for (NodeId v = 0; v < hg.num_nodes(); ++v) {
    terms.clear();
    for (EdgeId e = hg.edges_begin(v); e < hg.edges_end(v); ++e) {
      terms.push_back(detail::edge_inside<S>(hg, e, theta, score));
    }
    score[v] = S::sum(terms);
  }
  return score;
}

template <Semiring S>
double goal_score(const Hypergraph& hg, std::span<const double> theta) {
  return inside<S>(hg, theta)[hg.goal()];
}

/// d logZ / d theta via the outside pass. Entries for -inf parameters are exactly zero.
/// Parameters used several times by one derivation accumulate expected counts.
inline std::vector<double> outside_marginals(const Hypergraph& hg, std::span<const double> theta) {
  const auto in = inside<LogSemiring>(hg, theta);
  const double log_z = in[hg.goal()];
  if (log_z == kNegInf) throw VacuousDistribution();

  std::vector<double> out(hg.num_nodes(), kNegInf);
  std::vector<double> grad(theta.size(), 0.0);
  out[hg.goal()] = 0.0;
  for (NodeId v = static_cast<NodeId>(hg.num_nodes()); v-- > 0;) {
    if (out[v] == kNegInf) continue;
    for (EdgeId e = hg.edges_begin(v); e < hg.edges_end(v); ++e) {
      const double w = detail::edge_inside<LogSemiring>(hg, e, theta, in);
      if (w == kNegInf) continue;
      const double post = std::exp(out[v] + w - log_z);
      for (std::int32_t p : hg.params(e)) {
        if (p != kNoParam) grad[static_cast<std::size_t>(p)] += post;
      }
      for (NodeId t : hg.tails(e)) out[t] = log_add_exp(out[t], out[v] + w - in[t]);
    }
  }
  return grad;
}

/// Parameter-count vector of a derivation given as a list of edges.
inline std::vector<double> derivation_counts(const Hypergraph& hg, std::span<const EdgeId> edges, std::size_t num_params) {
  std::vector<double> counts(num_params, 0.0);
  for (EdgeId e : edges) {
    for (std::int32_t p : hg.params(e)) {
      if (p != kNoParam) counts[static_cast<std::size_t>(p)] += 1.0;
    }
  }
  return counts;
}

namespace detail {

// Expands a derivation top-down from the goal, choosing one incoming edge per visited node.
template <typename Choose>
std::vector<EdgeId> expand_derivation(const Hypergraph& hg, Choose&& choose) {
  std::vector<EdgeId> edges;
  std::vector<NodeId> stack{hg.goal()};
  while (!stack.empty()) {
    const NodeId v = stack.back();
    stack.pop_back();
    const EdgeId e = choose(v);
    edges.push_back(e);
    const auto tails = hg.tails(e);
    for (std::size_t k = tails.size(); k-- > 0;) stack.push_back(tails[k]);
  }
  return edges;
}

}  // namespace detail

/// Max-plus derivation. Ties go to the first edge in construction order.
inline std::vector<EdgeId> viterbi_derivation(const Hypergraph& hg, std::span<const double> theta) {
  const auto best = inside<MaxPlusSemiring>(hg, theta);
  if (best[hg.goal()] == kNegInf) throw VacuousDistribution();
  return detail::expand_derivation(hg, [&](NodeId v) {
    EdgeId arg = hg.edges_begin(v);
    double top = kNegInf;
    for (EdgeId e = hg.edges_begin(v); e < hg.edges_end(v); ++e) {
      const double s = detail::edge_inside<MaxPlusSemiring>(hg, e, theta, best);
      if (s > top) {
        top = s;
        arg = e;
      }
    }
    return arg;
  });
}

/// Exact sample: log-semiring forward pass, then top-down categorical choices (FFBS).
inline std::vector<EdgeId> sample_derivation(const Hypergraph& hg, std::span<const double> theta, Rng& rng) {
  const auto in = inside<LogSemiring>(hg, theta);
  if (in[hg.goal()] == kNegInf) throw VacuousDistribution();
  std::vector<double> logits;
  return detail::expand_derivation(hg, [&](NodeId v) {
    logits.clear();
    for (EdgeId e = hg.edges_begin(v); e < hg.edges_end(v); ++e) {
      logits.push_back(detail::edge_inside<LogSemiring>(hg, e, theta, in));
    }
    return hg.edges_begin(v) + static_cast<EdgeId>(rng.categorical_log(logits));
  });
}

}  // namespace structdist
