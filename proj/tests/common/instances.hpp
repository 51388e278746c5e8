#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <vector>

#include "structdist.hpp"
#include "structdist/oracle.hpp"

namespace structdist::testing {

inline Tensor random_tensor(Shape shape, Rng& rng, double scale = 1.0) {
  Tensor t(std::move(shape));
  for (double& x : t.data()) x = scale * (2.0 * rng.uniform() - 1.0);
  return t;
}

inline std::size_t uniform_int(Rng& rng, std::size_t lo, std::size_t hi) {
  return lo + static_cast<std::size_t>(rng.uniform() * static_cast<double>(hi - lo + 1));
}

// Replaces each block of `width` consecutive entries with its log-softmax.
inline void log_normalize_blocks(Tensor& t, std::size_t width) {
  auto data = t.data();
  for (std::size_t off = 0; off < data.size(); off += width) {
    const double lse = logsumexp(data.subspan(off, width));
    for (std::size_t k = off; k < off + width; ++k) data[k] -= lse;
  }
}

inline void symmetrize_words(Tensor& adj) {
  const std::size_t size = adj.extent(0);
  for (std::size_t i = 1; i < size; ++i)
    for (std::size_t j = i + 1; j < size; ++j) adj(j, i) = adj(i, j);
}

/// Random log-potentials for the sizes in `c`. PCFG rules and root are normalized, the sticky
/// mask is all zero, and undirected adjacencies are symmetric.
inline StructuredDistribution random_instance(Family f, const Config& c, Rng& rng, double scale = 1.0) {
  LogPotentials pots;
  for (const auto& [name, shape] : potential_layout(f, c)) pots.add(name, random_tensor(shape, rng, scale));
  if (f == Family::pcfg) {
    log_normalize_blocks(pots["root"], c.nt);
    const std::size_t k = c.nt + c.pt;
    log_normalize_blocks(pots["rules"], k * k);
    for (double& x : pots["sticky"].data()) x = 0.0;
  }
  if (f == Family::spanning_tree && !c.spanning.directed) symmetrize_words(pots["adjacency"]);
  return StructuredDistribution(f, std::move(pots), c);
}

inline bool ctc_feasible(std::size_t frames, const std::vector<std::size_t>& target) {
  std::size_t need = target.size();
  for (std::size_t k = 1; k < target.size(); ++k) need += target[k] == target[k - 1];
  return need <= frames;
}

/// Random sizes within the desk-scale bounds (n <= 5, other sizes <= 3).
inline Config random_config(Family f, Rng& rng, SpanningFlags flags = {}) {
  Config c;
  switch (f) {
    case Family::linear_chain:
      c.n = uniform_int(rng, 1, 5);
      c.m = uniform_int(rng, 1, 3);
      break;
    case Family::semi_markov:
      c.n = uniform_int(rng, 1, 5);
      c.s = uniform_int(rng, 1, std::min<std::size_t>(3, c.n));
      c.m = uniform_int(rng, 1, 3);
      break;
    case Family::monotone_alignment:
      c.n = uniform_int(rng, 0, 4);
      c.m = uniform_int(rng, 0, 3);
      break;
    case Family::ctc:
      c.n = uniform_int(rng, 1, 5);
      c.v = uniform_int(rng, 2, 3);
      do {
        c.target.assign(uniform_int(rng, 0, std::min<std::size_t>(3, c.n)), 0);
        for (auto& label : c.target) label = uniform_int(rng, 1, c.v - 1);
      } while (!ctc_feasible(c.n, c.target));
      break;
    case Family::one_to_one: c.n = uniform_int(rng, 1, 5); break;
    case Family::tree_crf:
      c.n = uniform_int(rng, 1, 5);
      c.m = uniform_int(rng, 1, 3);
      break;
    case Family::pcfg:
      c.n = uniform_int(rng, 2, 4);
      c.nt = uniform_int(rng, 1, 3);
      c.pt = uniform_int(rng, 1, 3);
      break;
    case Family::spanning_tree:
      c.n = uniform_int(rng, 1, 5);
      c.spanning = flags;
      break;
  }
  return c;
}

inline std::vector<SpanningFlags> all_spanning_flags() {
  std::vector<SpanningFlags> out;
  for (int k = 0; k < 8; ++k) out.push_back({(k & 4) == 0, (k & 2) != 0, (k & 1) != 0});
  return out;
}

inline std::string flags_label(const SpanningFlags& f) {
  return std::string(f.directed ? "directed" : "undirected") + (f.projective ? "/projective" : "/nonprojective") +
         (f.single_root_edge ? "/single-root" : "/multi-root");
}

/// Sorted part multiset of an indicator, used as a structure key.
inline std::vector<std::uint32_t> structure_key(const TensorSet& indicator) {
  auto parts = oracle::from_indicator(indicator).parts;
  std::sort(parts.begin(), parts.end());
  return parts;
}

/// Key -> enumeration index lookup.
inline std::map<std::vector<std::uint32_t>, std::size_t> structure_index(const oracle::EnumeratedFamily& ef) {
  std::map<std::vector<std::uint32_t>, std::size_t> index;
  for (std::size_t k = 0; k < ef.structures.size(); ++k) {
    auto parts = ef.structures[k].parts;
    std::sort(parts.begin(), parts.end());
    index.emplace(std::move(parts), k);
  }
  return index;
}

inline double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  double worst = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (a[k] == b[k]) continue;
    worst = std::max(worst, std::abs(a[k] - b[k]));
  }
  return a.size() == b.size() ? worst : kPosInf;
}

/// Largest |marginal - central difference| over finite parameters; -inf parameters must
/// have marginal exactly 0 (otherwise the result is +inf).
inline double finite_difference_error(const StructuredDistribution& d, double step = 1e-4) {
  const auto grad = marginals(d).flatten();
  std::vector<double> theta(d.theta().begin(), d.theta().end());
  double worst = 0.0;
  for (std::size_t k = 0; k < theta.size(); ++k) {
    if (theta[k] == kNegInf) {
      if (grad[k] != 0.0) return kPosInf;
      continue;
    }
    const double saved = theta[k];
    theta[k] = saved + step;
    const double up = log_partition_at(d, theta);
    theta[k] = saved - step;
    const double down = log_partition_at(d, theta);
    theta[k] = saved;
    worst = std::max(worst, std::abs((up - down) / (2.0 * step) - grad[k]));
  }
  return worst;
}

}  // namespace structdist::testing
