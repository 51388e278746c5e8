#pragma once

#include <array>
#include <cmath>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "structdist/errors.hpp"
#include "structdist/tensor.hpp"

namespace structdist {

enum class Family { linear_chain, semi_markov, monotone_alignment, ctc, one_to_one, tree_crf, pcfg, spanning_tree };

inline constexpr std::array<Family, 8> kAllFamilies = {
    Family::linear_chain, Family::semi_markov, Family::monotone_alignment, Family::ctc,
    Family::one_to_one,   Family::tree_crf,    Family::pcfg,               Family::spanning_tree};

inline std::string_view to_string(Family f) {
  switch (f) {
    case Family::linear_chain: return "linear_chain";
    case Family::semi_markov: return "semi_markov";
    case Family::monotone_alignment: return "monotone_alignment";
    case Family::ctc: return "ctc";
    case Family::one_to_one: return "one_to_one";
    case Family::tree_crf: return "tree_crf";
    case Family::pcfg: return "pcfg";
    case Family::spanning_tree: return "spanning_tree";
  }
  return "?";
}

inline Family family_from_string(std::string_view name) {
  for (Family f : kAllFamilies) {
    if (to_string(f) == name) return f;
  }
  throw InvalidArgument("unknown family '" + std::string(name) + "'");
}

struct SpanningFlags {
  bool directed = true;
  bool projective = false;
  bool single_root_edge = false;

  friend bool operator==(const SpanningFlags&, const SpanningFlags&) = default;
};

/// Family sizes. Which fields are meaningful depends on the family:
///   linear_chain        n positions, m tags
///   semi_markov         n positions, s max width, m labels
///   monotone_alignment  n rows, m columns
///   ctc                 n frames, v vocabulary (blank = 0), target labels
///   one_to_one          n
///   tree_crf            n leaves, m labels
///   pcfg                n tokens, nt nonterminals, pt preterminals
///   spanning_tree       n words (plus the artificial root), spanning flags
struct Config {
  std::size_t n = 0;
  std::size_t m = 0;
  std::size_t s = 0;
  std::size_t nt = 0;
  std::size_t pt = 0;
  std::size_t v = 0;
  std::vector<std::size_t> target;
  SpanningFlags spanning;

  friend bool operator==(const Config&, const Config&) = default;
};

using LogPotentials = TensorSet;
/// 0/1 (or count, for PCFG rules) masks congruent with a family's log-potentials.
using StructureIndicator = TensorSet;

/// Names and shapes of the potential tensors of a family, in canonical order.
inline std::vector<std::pair<std::string, Shape>> potential_layout(Family family, const Config& c) {
  switch (family) {
    case Family::linear_chain:
      return {{"init", {c.m}}, {"transitions", {c.n == 0 ? 0 : c.n - 1, c.m, c.m}}};
    case Family::semi_markov: return {{"segments", {c.n, c.s, c.m, c.m}}};
    case Family::monotone_alignment: return {{"moves", {c.n + 1, c.m + 1, 3}}};
    case Family::ctc: return {{"frames", {c.n, c.v}}};
    case Family::one_to_one: return {{"scores", {c.n, c.n}}};
    case Family::tree_crf: return {{"spans", {c.n, c.n, c.m}}};
    case Family::pcfg:
      return {{"root", {c.nt}},
              {"rules", {c.nt, c.nt + c.pt, c.nt + c.pt}},
              {"emissions", {c.n, c.pt}},
              {"sticky", {c.n, c.n}}};
    case Family::spanning_tree: return {{"adjacency", {c.n + 1, c.n + 1}}};
  }
  return {};
}

namespace detail {

inline void require(bool ok, const std::string& what) {
  if (!ok) throw InvalidArgument(what);
}

inline const Tensor& tensor_of_rank(const TensorSet& set, std::string_view name, std::size_t rank) {
  require(set.contains(name), "missing potential tensor '" + std::string(name) + "'");
  const Tensor& t = set[name];
  require(t.rank() == rank, "tensor '" + std::string(name) + "' must have rank " + std::to_string(rank) +
                                ", got shape " + shape_string(t.shape()));
  return t;
}

// Fills sizes from tensor shapes; a non-zero size already in `hint` must agree.
inline Config derive_config(Family family, const TensorSet& pots, Config hint) {
  Config c = hint;
  auto set = [](std::size_t& field, std::size_t value, const char* what) {
    require(field == 0 || field == value,
            std::string("config ") + what + "=" + std::to_string(field) + " disagrees with tensor extent " +
                std::to_string(value));
    field = value;
  };
  switch (family) {
    case Family::linear_chain: {
      const auto& init = tensor_of_rank(pots, "init", 1);
      const auto& tr = tensor_of_rank(pots, "transitions", 3);
      set(c.m, init.extent(0), "m");
      set(c.n, tr.extent(0) + 1, "n");
      break;
    }
    case Family::semi_markov: {
      const auto& seg = tensor_of_rank(pots, "segments", 4);
      set(c.n, seg.extent(0), "n");
      set(c.s, seg.extent(1), "s");
      set(c.m, seg.extent(2), "m");
      break;
    }
    case Family::monotone_alignment: {
      const auto& mv = tensor_of_rank(pots, "moves", 3);
      require(mv.extent(0) >= 1 && mv.extent(1) >= 1, "moves tensor needs extents >= 1");
      set(c.n, mv.extent(0) - 1, "n");
      set(c.m, mv.extent(1) - 1, "m");
      break;
    }
    case Family::ctc: {
      const auto& fr = tensor_of_rank(pots, "frames", 2);
      set(c.n, fr.extent(0), "n");
      set(c.v, fr.extent(1), "v");
      break;
    }
    case Family::one_to_one: {
      const auto& sc = tensor_of_rank(pots, "scores", 2);
      set(c.n, sc.extent(0), "n");
      break;
    }
    case Family::tree_crf: {
      const auto& sp = tensor_of_rank(pots, "spans", 3);
      set(c.n, sp.extent(0), "n");
      set(c.m, sp.extent(2), "m");
      break;
    }
    case Family::pcfg: {
      const auto& root = tensor_of_rank(pots, "root", 1);
      const auto& em = tensor_of_rank(pots, "emissions", 2);
      set(c.nt, root.extent(0), "nt");
      set(c.n, em.extent(0), "n");
      set(c.pt, em.extent(1), "pt");
      break;
    }
    case Family::spanning_tree: {
      const auto& adj = tensor_of_rank(pots, "adjacency", 2);
      require(adj.extent(0) >= 1, "adjacency must include the root row");
      set(c.n, adj.extent(0) - 1, "n");
      break;
    }
  }
  return c;
}

inline void check_family_invariants(Family family, TensorSet& pots, const Config& c) {
  switch (family) {
    case Family::linear_chain:
      require(c.n >= 1 && c.m >= 1, "linear_chain needs n >= 1 and m >= 1");
      break;
    case Family::semi_markov:
      require(c.n >= 1 && c.m >= 1, "semi_markov needs n >= 1 and m >= 1");
      require(c.s >= 1 && c.s <= c.n, "semi_markov needs 1 <= s <= n");
      break;
    case Family::monotone_alignment: break;
    case Family::ctc:
      require(c.n >= 1, "ctc needs at least one frame");
      require(c.v >= 1, "ctc needs a vocabulary with the blank symbol");
      for (std::size_t label : c.target) {
        require(label >= 1 && label < c.v, "ctc target labels must lie in 1..v-1 (0 is blank)");
      }
      break;
    case Family::one_to_one: require(c.n >= 1, "one_to_one needs n >= 1"); break;
    case Family::tree_crf: require(c.n >= 1 && c.m >= 1, "tree_crf needs n >= 1 and m >= 1"); break;
    case Family::pcfg: {
      require(c.n >= 2, "pcfg needs at least two tokens");
      require(c.nt >= 1 && c.pt >= 1, "pcfg needs nt >= 1 and pt >= 1");
      auto sum_exp = [](std::span<const double> xs) {
        double s = 0.0;
        for (double x : xs) s += std::exp(x);
        return s;
      };
      require(std::abs(sum_exp(pots["root"].data()) - 1.0) <= 1e-6, "pcfg root probabilities must sum to 1");
      const std::size_t k = c.nt + c.pt;
      auto rules = pots["rules"].data();
      for (std::size_t a = 0; a < c.nt; ++a) {
        require(std::abs(sum_exp(rules.subspan(a * k * k, k * k)) - 1.0) <= 1e-6,
                "pcfg rules of nonterminal " + std::to_string(a) + " must sum to 1");
      }
      for (double x : pots["sticky"].data()) {
        require(x == 0.0 || x == kNegInf, "pcfg sticky entries must be 0 or -inf");
      }
      break;
    }
    case Family::spanning_tree: {
      Tensor& adj = pots["adjacency"];
      const std::size_t size = c.n + 1;
      require(c.n >= 1, "spanning_tree needs at least one word");
      for (std::size_t i = 0; i < size; ++i) {
        adj(i, i) = kNegInf;
        adj(i, 0) = kNegInf;
      }
      if (!c.spanning.directed) {
        for (std::size_t i = 1; i < size; ++i) {
          for (std::size_t j = i + 1; j < size; ++j) {
            const double a = adj(i, j), b = adj(j, i);
            const bool same = (a == b) || (std::isfinite(a) && std::isfinite(b) &&
                                           std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(a)));
            require(same, "undirected spanning tree needs a symmetric adjacency over non-root nodes");
          }
        }
      }
      break;
    }
  }
}

}  // namespace detail

/// A family tag, its log-potentials and its configuration. Immutable once built.
///
/// Construction checks shapes against the family layout, derives sizes, and normalizes the
/// spanning-tree adjacency so its diagonal and root column are -inf. A PCFG without a
/// "sticky" tensor gets an all-zero one.
class StructuredDistribution {
 public:
  StructuredDistribution(Family family, LogPotentials potentials, Config config = {}) : family_(family) {
    if (family == Family::pcfg && !potentials.contains("sticky") && potentials.contains("emissions")) {
      const std::size_t n = potentials["emissions"].shape().empty() ? 0 : potentials["emissions"].extent(0);
      potentials.add("sticky", Tensor({n, n}, 0.0));
    }
    config_ = detail::derive_config(family, potentials, std::move(config));
    for (const auto& [name, shape] : potential_layout(family, config_)) {
      detail::require(potentials.contains(name), "missing potential tensor '" + name + "'");
      const Tensor& t = potentials[name];
      detail::require(t.shape() == shape, "tensor '" + name + "' has shape " + shape_string(t.shape()) +
                                              ", expected " + shape_string(shape));
      potentials_.add(name, t);
    }
    detail::require(potentials.entries().size() == potentials_.entries().size(),
                    std::string("unexpected extra tensors for family ") + std::string(to_string(family)));
    detail::check_family_invariants(family, potentials_, config_);
    theta_ = potentials_.flatten();
  }

  Family family() const noexcept { return family_; }
  const Config& config() const noexcept { return config_; }
  const LogPotentials& potentials() const noexcept { return potentials_; }
  const Tensor& potential(std::string_view name) const { return potentials_[name]; }
  /// All log-potentials concatenated in layout order.
  std::span<const double> theta() const noexcept { return theta_; }

  /// Same family and config, new values (bypasses the grammar normalization check).
  StructuredDistribution with_theta(std::span<const double> theta) const {
    StructuredDistribution copy = *this;
    copy.potentials_ = potentials_.with_values(theta);
    copy.theta_.assign(theta.begin(), theta.end());
    return copy;
  }

 private:
  Family family_;
  LogPotentials potentials_;
  Config config_;
  std::vector<double> theta_;
};

inline bool same_factorization(const StructuredDistribution& p, const StructuredDistribution& q) {
  return p.family() == q.family() && p.config() == q.config();
}

}  // namespace structdist
