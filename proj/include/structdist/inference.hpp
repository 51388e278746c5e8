#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "structdist/alignment.hpp"
#include "structdist/chain.hpp"
#include "structdist/constituency.hpp"
#include "structdist/distribution.hpp"
#include "structdist/hypergraph.hpp"
#include "structdist/spanning.hpp"
#include "structdist/validity.hpp"

namespace structdist {

enum class Operation { log_partition, log_prob, marginals, argmax, sample, entropy, cross_entropy, kl_divergence };

enum class SpanningSampler { wilson, colbourn };

inline constexpr const char* kOneToOneIntractable = "partition intractable for one-to-one matching";

namespace detail {

inline bool is_nonprojective_tree(const StructuredDistribution& d) {
  return d.family() == Family::spanning_tree && !d.config().spanning.projective;
}

inline void require_tractable(const StructuredDistribution& d) {
  if (d.family() == Family::one_to_one) throw Unsupported(kOneToOneIntractable);
}

// The recorded dynamic program of every DP-backed family (everything except one-to-one
// matching and non-projective trees).
inline Hypergraph build_hypergraph(const StructuredDistribution& d) {
  const Config& c = d.config();
  switch (d.family()) {
    case Family::linear_chain: return chain_hypergraph(c);
    case Family::semi_markov: return semi_markov_hypergraph(c);
    case Family::monotone_alignment: return alignment_hypergraph(c);
    case Family::ctc: return ctc_hypergraph(c);
    case Family::tree_crf: return tree_crf_hypergraph(c);
    case Family::pcfg: return pcfg_hypergraph(c);
    case Family::spanning_tree:
      if (c.spanning.projective) return eisner_hypergraph(c.n, c.spanning.single_root_edge);
      break;
    case Family::one_to_one: break;
  }
  throw InvalidArgument("no dynamic program for this family");
}

inline std::string undirected_prefix(const StructuredDistribution& d) {
  return d.config().spanning.directed ? "" : "undirected-reduction/";
}

inline std::string root_suffix(const StructuredDistribution& d) {
  return d.config().spanning.single_root_edge ? "-single-root" : "-multi-root";
}

inline std::string partition_algorithm(const StructuredDistribution& d) {
  switch (d.family()) {
    case Family::linear_chain: return "forward";
    case Family::semi_markov: return "semi-markov-forward";
    case Family::monotone_alignment: return "needleman-wunsch";
    case Family::ctc: return "ctc-forward";
    case Family::tree_crf: return "cky";
    case Family::pcfg: return "pcfg-inside";
    case Family::one_to_one: return "none";
    case Family::spanning_tree:
      return undirected_prefix(d) + (d.config().spanning.projective ? "eisner" : "mtt") + root_suffix(d);
  }
  return "?";
}

inline std::string marginals_algorithm(const StructuredDistribution& d) {
  switch (d.family()) {
    case Family::linear_chain: return "forward-backward";
    case Family::semi_markov: return "semi-markov-forward-backward";
    case Family::monotone_alignment: return "needleman-wunsch-outside";
    case Family::ctc: return "ctc-forward-backward";
    case Family::tree_crf: return "cky-inside-outside";
    case Family::pcfg: return "pcfg-sticky-inside-outside";
    case Family::one_to_one: return "none";
    case Family::spanning_tree:
      return undirected_prefix(d) + (d.config().spanning.projective ? "eisner-inside-outside" : "mtt-inverse") +
             root_suffix(d);
  }
  return "?";
}

inline std::string argmax_algorithm(const StructuredDistribution& d) {
  switch (d.family()) {
    case Family::linear_chain: return "viterbi";
    case Family::semi_markov: return "semi-markov-viterbi";
    case Family::monotone_alignment: return "needleman-wunsch-max-plus";
    case Family::ctc: return "ctc-best-path";
    case Family::tree_crf: return "cky-max-plus";
    case Family::pcfg: return "pcfg-viterbi";
    case Family::one_to_one: return "jonker-volgenant";
    case Family::spanning_tree: {
      const auto& f = d.config().spanning;
      std::string name = f.projective ? "kuhlmann-arc-hybrid" : "chu-liu-edmonds";
      if (f.single_root_edge) name += "+reweighting";
      return undirected_prefix(d) + name;
    }
  }
  return "?";
}

inline std::string sample_algorithm(const StructuredDistribution& d, SpanningSampler sampler) {
  if (is_nonprojective_tree(d)) {
    return undirected_prefix(d) + (sampler == SpanningSampler::wilson ? "wilson" : "colbourn") + root_suffix(d);
  }
  if (d.family() == Family::one_to_one) return "none";
  return "ffbs/" + partition_algorithm(d);
}

}  // namespace detail

/// Name of the algorithm each operation dispatches to for this distribution.
inline std::string algorithm_name(const StructuredDistribution& d, Operation op,
                                  SpanningSampler sampler = SpanningSampler::wilson) {
  switch (op) {
    case Operation::log_partition: return detail::partition_algorithm(d);
    case Operation::log_prob:
      return d.family() == Family::pcfg ? "pcfg-masked-inside" : detail::partition_algorithm(d);
    case Operation::marginals: return detail::marginals_algorithm(d);
    case Operation::argmax: return detail::argmax_algorithm(d);
    case Operation::sample: return detail::sample_algorithm(d, sampler);
    case Operation::entropy:
    case Operation::cross_entropy:
    case Operation::kl_divergence:
      return detail::marginals_algorithm(d) + "+" + detail::partition_algorithm(d);
  }
  return "?";
}

/// logZ of `d`'s family and config evaluated at flat log-potentials `theta`. No grammar or
/// symmetry checks are applied to theta, which makes this the target of finite differences.
inline double log_partition_at(const StructuredDistribution& d, std::span<const double> theta) {
  detail::require_tractable(d);
  const Config& c = d.config();
  if (d.family() == Family::linear_chain) {
    return forward_log_partition(LinearChainCRF::from_distribution(d.with_theta(theta)));
  }
  if (detail::is_nonprojective_tree(d)) {
    const Tensor adj({c.n + 1, c.n + 1}, std::vector<double>(theta.begin(), theta.end()));
    return mtt_log_partition(adj, c.spanning.single_root_edge);
  }
  return goal_score<LogSemiring>(detail::build_hypergraph(d), theta);
}

/// log of the sum over all structures of exp(total score); -inf when none has finite score.
inline double log_partition(const StructuredDistribution& d) { return log_partition_at(d, d.theta()); }

/// d logZ / d theta, shaped like the log-potentials. PCFG rule entries are expected counts and
/// the PCFG sticky tensor holds span marginals.
inline TensorSet marginals(const StructuredDistribution& d) {
  detail::require_tractable(d);
  if (detail::is_nonprojective_tree(d)) {
    TensorSet out;
    out.add("adjacency", mtt_marginals(d.potential("adjacency"), d.config().spanning.single_root_edge));
    return out;
  }
  return d.potentials().with_values(outside_marginals(detail::build_hypergraph(d), d.theta()));
}

namespace detail {

inline StructureIndicator spanning_indicator(const HeadVector& heads) {
  StructureIndicator out;
  out.add("adjacency", heads_to_indicator(heads));
  return out;
}

inline StructureIndicator derivation_indicator(const StructuredDistribution& d, const Hypergraph& hg,
                                               std::span<const EdgeId> edges) {
  return d.potentials().with_values(derivation_counts(hg, edges, d.theta().size()));
}

}  // namespace detail

/// Highest-scoring structure. Ties resolve to the first backpointer in chart construction order.
inline StructureIndicator argmax(const StructuredDistribution& d) {
  const Config& c = d.config();
  switch (d.family()) {
    case Family::one_to_one: {
      StructureIndicator out;
      out.add("scores", assignment_argmax({d.potential("scores")}));
      return out;
    }
    case Family::spanning_tree: {
      const Tensor& adj = d.potential("adjacency");
      const bool single = c.spanning.single_root_edge;
      return detail::spanning_indicator(c.spanning.projective ? kuhlmann_argmax(adj, single) : cle_argmax(adj, single));
    }
    default: {
      const auto hg = detail::build_hypergraph(d);
      return detail::derivation_indicator(d, hg, viterbi_derivation(hg, d.theta()));
    }
  }
}

namespace detail {

inline StructureIndicator sample_one(const StructuredDistribution& d, const Hypergraph* hg, Rng& rng,
                                     SpanningSampler sampler) {
  if (is_nonprojective_tree(d)) {
    const Tensor& adj = d.potential("adjacency");
    const bool single = d.config().spanning.single_root_edge;
    return spanning_indicator(sampler == SpanningSampler::wilson ? wilson_sample(adj, single, rng)
                                                                  : colbourn_sample(adj, single, rng));
  }
  return derivation_indicator(d, *hg, sample_derivation(*hg, d.theta(), rng));
}

}  // namespace detail

/// `count` exact samples drawn from one generator seeded with `seed`.
inline std::vector<StructureIndicator> sample_many(const StructuredDistribution& d, RandomSeed seed, std::size_t count,
                                                   SpanningSampler sampler = SpanningSampler::wilson) {
  detail::require_tractable(d);
  std::optional<Hypergraph> hg;
  if (!detail::is_nonprojective_tree(d)) hg = detail::build_hypergraph(d);
  Rng rng(seed);
  std::vector<StructureIndicator> out;
  out.reserve(count);
  for (std::size_t k = 0; k < count; ++k) out.push_back(detail::sample_one(d, hg ? &*hg : nullptr, rng, sampler));
  return out;
}

inline StructureIndicator sample(const StructuredDistribution& d, RandomSeed seed,
                                 SpanningSampler sampler = SpanningSampler::wilson) {
  return sample_many(d, seed, 1, sampler).front();
}

/// Sum of indicator * log-potential, with 0 * -inf taken as 0.
inline double structure_score(const StructuredDistribution& d, const StructureIndicator& t) {
  double total = 0.0;
  for (const auto& [name, tensor] : d.potentials().entries()) {
    if (!t.contains(name)) continue;
    const auto ind = t[name].data();
    const auto theta = tensor.data();
    if (ind.size() != theta.size()) throw InvalidArgument("indicator tensor '" + name + "' has the wrong shape");
    for (std::size_t k = 0; k < ind.size(); ++k) {
      if (ind[k] == 0.0) continue;
      if (theta[k] == kNegInf) return kNegInf;
      total += ind[k] * theta[k];
    }
  }
  return total;
}

/// log p(t). For a PCFG, t is a bracketing (its sticky tensor) and the result marginalizes labels.
inline double log_prob(const StructuredDistribution& d, const StructureIndicator& t) {
  detail::require_tractable(d);
  if (!is_valid_structure(d, t)) throw InvalidArgument("log_prob: indicator is not a valid structure for this family");
  const double log_z = log_partition(d);
  if (log_z == kNegInf) throw VacuousDistribution();
  if (d.family() == Family::pcfg) return pcfg_masked_inside(d, spans_of_mask(t["sticky"])) - log_z;
  const double s = structure_score(d, t);
  return s == kNegInf ? kNegInf : s - log_z;
}

/// H(p, q) = logZ_q - sum_e p(e) theta_q(e). Terms with p(e) = 0 contribute 0; +inf when p puts
/// mass on a part q forbids.
inline double cross_entropy(const StructuredDistribution& p, const StructuredDistribution& q) {
  if (!same_factorization(p, q)) throw InvalidArgument("cross_entropy: distributions must share family and config");
  detail::require_tractable(p);
  const auto mp = marginals(p).flatten();
  const double log_zq = log_partition(q);
  if (log_zq == kNegInf) throw VacuousDistribution();
  const auto theta_q = q.theta();
  double expected = 0.0;
  for (std::size_t k = 0; k < mp.size(); ++k) {
    if (mp[k] == 0.0) continue;
    if (theta_q[k] == kNegInf) return kPosInf;
    expected += mp[k] * theta_q[k];
  }
  return log_zq - expected;
}

inline double entropy(const StructuredDistribution& d) { return cross_entropy(d, d); }

inline double kl_divergence(const StructuredDistribution& p, const StructuredDistribution& q) {
  const double h_pq = cross_entropy(p, q);
  if (h_pq == kPosInf) return kPosInf;
  return h_pq - entropy(p);
}

}  // namespace structdist
