#pragma once

#include <cmath>
#include <span>
#include <vector>

#include "structdist/distribution.hpp"
#include "structdist/hypergraph.hpp"
#include "structdist/semiring.hpp"

namespace structdist {

/// Linear-chain CRF with a separate transition matrix per step.
/// init: [m] log-potentials of the first tag; transitions: [n-1, m, m] indexed (step, previous, next).
struct LinearChainCRF {
  Tensor init;
  Tensor transitions;

  std::size_t length() const { return transitions.extent(0) + 1; }
  std::size_t tags() const { return init.extent(0); }

  StructuredDistribution to_distribution() const {
    LogPotentials pots;
    pots.add("init", init);
    pots.add("transitions", transitions);
    return StructuredDistribution(Family::linear_chain, std::move(pots));
  }
  static LinearChainCRF from_distribution(const StructuredDistribution& d) {
    return {d.potential("init"), d.potential("transitions")};
  }
};

/// Semi-Markov CRF. segments: [n, s, m, m] indexed (start, width - 1, previous label, label).
/// The first segment reads its previous label from index 0; widths running past n never apply.
struct SemiMarkovCRF {
  Tensor segments;

  StructuredDistribution to_distribution() const {
    LogPotentials pots;
    pots.add("segments", segments);
    return StructuredDistribution(Family::semi_markov, std::move(pots));
  }
};

/// Forward recursion alpha_{t+1} = alpha_t (x) theta_t written as a semiring contraction.
/// Under the log semiring this is logZ, under max-plus the best path score.
template <Semiring S>
double forward_score(const LinearChainCRF& chain) {
  const std::size_t m = chain.tags();
  Tensor alpha = chain.init;
  for (std::size_t t = 0; t + 1 < chain.length(); ++t) {
    auto step = chain.transitions.data().subspan(t * m * m, m * m);
    Tensor trans({m, m}, std::vector<double>(step.begin(), step.end()));
    alpha = semiring_contract<S>("a,ab->b", {alpha, trans});
  }
  return semiring_contract<S>("a->", {alpha}).data()[0];
}

inline double forward_log_partition(const LinearChainCRF& chain) { return forward_score<LogSemiring>(chain); }

/// Recorded forward program over the flat (init, transitions) layout.
inline Hypergraph chain_hypergraph(const Config& c) {
  const std::size_t n = c.n, m = c.m;
  const auto trans = [&](std::size_t t, std::size_t a, std::size_t b) {
    return static_cast<std::int32_t>(m + (t * m + a) * m + b);
  };
  Hypergraph hg;
  std::vector<NodeId> prev(m), cur(m);
  for (std::size_t b = 0; b < m; ++b) {
    prev[b] = hg.begin_node();
    hg.add_edge({}, static_cast<std::int32_t>(b));
  }
  for (std::size_t t = 1; t < n; ++t) {
    for (std::size_t b = 0; b < m; ++b) {
      cur[b] = hg.begin_node();
      for (std::size_t a = 0; a < m; ++a) hg.add_edge({prev[a]}, trans(t - 1, a, b));
    }
    std::swap(prev, cur);
  }
  hg.begin_node();
  for (std::size_t b = 0; b < m; ++b) hg.add_edge({prev[b]});
  return hg;
}

/// Chart item (end, label) = prefix [0, end) whose last segment carries label.
inline Hypergraph semi_markov_hypergraph(const Config& c) {
  const std::size_t n = c.n, s = c.s, m = c.m;
  const auto seg = [&](std::size_t start, std::size_t w, std::size_t a, std::size_t b) {
    return static_cast<std::int32_t>(((start * s + w) * m + a) * m + b);
  };
  Hypergraph hg;
  std::vector<std::vector<NodeId>> ending(n + 1, std::vector<NodeId>(m));
  for (std::size_t end = 1; end <= n; ++end) {
    for (std::size_t b = 0; b < m; ++b) {
      ending[end][b] = hg.begin_node();
      for (std::size_t w = 1; w <= std::min(s, end); ++w) {
        const std::size_t start = end - w;
        if (start == 0) {
          hg.add_edge({}, seg(0, w - 1, 0, b));
        } else {
          for (std::size_t a = 0; a < m; ++a) hg.add_edge({ending[start][a]}, seg(start, w - 1, a, b));
        }
      }
    }
  }
  hg.begin_node();
  for (std::size_t b = 0; b < m; ++b) hg.add_edge({ending[n][b]});
  return hg;
}

inline double semi_markov_log_partition(const SemiMarkovCRF& smc) {
  const auto dist = smc.to_distribution();
  return goal_score<LogSemiring>(semi_markov_hypergraph(dist.config()), dist.theta());
}

/// Folds an HMM and an observation sequence into a linear chain whose logZ is log p(observations).
inline LinearChainCRF from_hmm(const Tensor& transition, const Tensor& emission, const Tensor& init,
                               std::span<const std::size_t> observations) {
  if (transition.rank() != 2 || emission.rank() != 2 || init.rank() != 1) {
    throw InvalidArgument("from_hmm: transition [m,m], emission [m,V], init [m] expected");
  }
  const std::size_t m = init.extent(0);
  if (transition.extent(0) != m || transition.extent(1) != m || emission.extent(0) != m) {
    throw InvalidArgument("from_hmm: inconsistent state counts");
  }
  if (observations.empty()) throw InvalidArgument("from_hmm: empty observation sequence");
  const std::size_t vocab = emission.extent(1);
  auto check_row = [](std::span<const double> row, const char* what) {
    double sum = 0.0;
    for (double p : row) {
      if (p < 0.0) throw InvalidArgument(std::string("from_hmm: negative probability in ") + what);
      sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-9) throw InvalidArgument(std::string("from_hmm: ") + what + " row does not sum to 1");
  };
  check_row(init.data(), "init");
  for (std::size_t a = 0; a < m; ++a) {
    check_row(transition.data().subspan(a * m, m), "transition");
    check_row(emission.data().subspan(a * vocab, vocab), "emission");
  }
  for (std::size_t o : observations) {
    if (o >= vocab) throw InvalidArgument("from_hmm: observation id out of range");
  }

  const auto safe_log = [](double p) { return p > 0.0 ? std::log(p) : kNegInf; };
  const std::size_t n = observations.size();
  LinearChainCRF chain{Tensor({m}), Tensor({n - 1, m, m})};
  for (std::size_t b = 0; b < m; ++b) chain.init(b) = safe_log(init(b)) + safe_log(emission(b, observations[0]));
  for (std::size_t t = 1; t < n; ++t) {
    for (std::size_t a = 0; a < m; ++a) {
      for (std::size_t b = 0; b < m; ++b) {
        chain.transitions(t - 1, a, b) = safe_log(transition(a, b)) + safe_log(emission(b, observations[t]));
      }
    }
  }
  return chain;
}

/// Extends a chain to `length` positions. Padded steps send every tag to tag 0 with score 0,
/// so each original path has exactly one continuation and logZ is unchanged.
inline LinearChainCRF pad_chain(const LinearChainCRF& chain, std::size_t length) {
  const std::size_t n = chain.length(), m = chain.tags();
  if (length < n) throw InvalidArgument("pad_chain: target length shorter than chain");
  LinearChainCRF out{chain.init, Tensor({length - 1, m, m}, kNegInf)};
  std::copy(chain.transitions.data().begin(), chain.transitions.data().end(), out.transitions.data().begin());
  for (std::size_t t = n - 1; t + 1 < length; ++t) {
    for (std::size_t a = 0; a < m; ++a) out.transitions(t, a, 0) = 0.0;
  }
  return out;
}

/// logZ for a padded batch: init [B, m], transitions [B, N-1, m, m], per-instance lengths.
inline std::vector<double> batched_forward_log_partition(const Tensor& init, const Tensor& transitions,
                                                         std::span<const std::size_t> lengths) {
  if (init.rank() != 2 || transitions.rank() != 4) throw InvalidArgument("batched chain: bad ranks");
  const std::size_t batch = init.extent(0), m = init.extent(1), steps = transitions.extent(1);
  if (transitions.extent(0) != batch || lengths.size() != batch) throw InvalidArgument("batched chain: batch mismatch");
  std::vector<double> out;
  out.reserve(batch);
  for (std::size_t b = 0; b < batch; ++b) {
    const std::size_t n = lengths[b];
    if (n < 1 || n > steps + 1) throw InvalidArgument("batched chain: length out of range");
    auto i0 = init.data().subspan(b * m, m);
    auto tr = transitions.data().subspan(b * steps * m * m, (n - 1) * m * m);
    LinearChainCRF chain{Tensor({m}, std::vector<double>(i0.begin(), i0.end())),
                         Tensor({n - 1, m, m}, std::vector<double>(tr.begin(), tr.end()))};
    out.push_back(forward_log_partition(chain));
  }
  return out;
}

}  // namespace structdist
