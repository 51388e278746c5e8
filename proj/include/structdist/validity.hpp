#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "structdist/alignment.hpp"
#include "structdist/constituency.hpp"
#include "structdist/distribution.hpp"
#include "structdist/spanning.hpp"

namespace structdist {

// Family validity predicates for structure indicators.

namespace detail {

inline bool all_binary(std::span<const double> xs) {
  return std::all_of(xs.begin(), xs.end(), [](double x) { return x == 0.0 || x == 1.0; });
}

inline bool valid_chain(const StructureIndicator& t, const Config& c) {
  const Tensor& init = t["init"];
  const Tensor& tr = t["transitions"];
  if (!all_binary(init.data()) || !all_binary(tr.data())) return false;
  std::size_t prev = c.m;
  for (std::size_t b = 0; b < c.m; ++b) {
    if (init(b) == 1.0) {
      if (prev != c.m) return false;
      prev = b;
    }
  }
  if (prev == c.m) return false;
  for (std::size_t step = 0; step + 1 < c.n; ++step) {
    std::size_t hits = 0, next = 0;
    for (std::size_t a = 0; a < c.m; ++a) {
      for (std::size_t b = 0; b < c.m; ++b) {
        if (tr(step, a, b) != 1.0) continue;
        if (a != prev) return false;
        ++hits;
        next = b;
      }
    }
    if (hits != 1) return false;
    prev = next;
  }
  return true;
}

inline bool valid_semi_markov(const StructureIndicator& t, const Config& c) {
  const Tensor& seg = t["segments"];
  if (!all_binary(seg.data())) return false;
  struct Piece {
    std::size_t start, width, prev, label;
  };
  std::vector<Piece> pieces;
  for (std::size_t i = 0; i < c.n; ++i)
    for (std::size_t w = 0; w < c.s; ++w)
      for (std::size_t a = 0; a < c.m; ++a)
        for (std::size_t b = 0; b < c.m; ++b)
          if (seg(i, w, a, b) == 1.0) pieces.push_back({i, w + 1, a, b});
  std::size_t pos = 0, label = 0;
  for (const auto& p : pieces) {  // sorted by start already
    if (p.start != pos || p.prev != label || p.start + p.width > c.n) return false;
    pos = p.start + p.width;
    label = p.label;
  }
  return pos == c.n;
}

inline bool valid_alignment(const StructureIndicator& t, const Config& c) {
  const Tensor& mv = t["moves"];
  if (!all_binary(mv.data())) return false;
  std::size_t used = 0;
  for (double x : mv.data()) used += x == 1.0;
  std::size_t i = c.n, j = c.m, walked = 0;
  while (i > 0 || j > 0) {
    std::size_t hits = 0, move = 0;
    for (std::size_t k = 0; k < 3; ++k)
      if (mv(i, j, k) == 1.0) {
        ++hits;
        move = k;
      }
    if (hits != 1) return false;
    if (move == kDiagonal) {
      if (i == 0 || j == 0) return false;
      --i;
      --j;
    } else if (move == kDown) {
      if (i == 0) return false;
      --i;
    } else {
      if (j == 0) return false;
      --j;
    }
    ++walked;
  }
  return walked == used;
}

inline bool valid_ctc(const StructureIndicator& t, const Config& c) {
  const Tensor& fr = t["frames"];
  if (!all_binary(fr.data())) return false;
  std::vector<std::size_t> labels;
  for (std::size_t f = 0; f < c.n; ++f) {
    std::size_t hits = 0;
    for (std::size_t v = 0; v < c.v; ++v)
      if (fr(f, v) == 1.0) {
        ++hits;
        labels.push_back(v);
      }
    if (hits != 1) return false;
  }
  return ctc_collapse(labels) == c.target;
}

inline bool valid_permutation(const Tensor& p) {
  const std::size_t n = p.extent(0);
  if (!all_binary(p.data())) return false;
  for (std::size_t i = 0; i < n; ++i) {
    double row = 0.0, col = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      row += p(i, j);
      col += p(j, i);
    }
    if (row != 1.0 || col != 1.0) return false;
  }
  return true;
}

inline bool valid_tree_crf(const StructureIndicator& t, const Config& c) {
  const Tensor& sp = t["spans"];
  if (!all_binary(sp.data())) return false;
  std::vector<Span> spans;
  for (std::size_t i = 0; i < c.n; ++i) {
    for (std::size_t j = 0; j < c.n; ++j) {
      std::size_t labels = 0;
      for (std::size_t l = 0; l < c.m; ++l) labels += sp(i, j, l) == 1.0;
      if (labels > 1) return false;
      if (labels == 1) spans.push_back({i, j});
    }
  }
  return is_binary_bracketing(c.n, spans);
}

// The PCFG structure is a bracketing (the sticky mask). Derivation detail, when present, must
// have one root, one preterminal per token and n-1 binary rules.
inline bool valid_pcfg(const StructureIndicator& t, const Config& c) {
  const Tensor& sticky = t["sticky"];
  if (!all_binary(sticky.data()) || !is_binary_bracketing(c.n, spans_of_mask(sticky))) return false;
  if (!t.contains("root")) return true;
  const auto total = [](std::span<const double> xs) {
    double s = 0.0;
    for (double x : xs) {
      if (x < 0.0 || x != std::floor(x)) return -1.0;
      s += x;
    }
    return s;
  };
  const double roots = total(t["root"].data()), rules = total(t["rules"].data()), ems = total(t["emissions"].data());
  if (roots == 0.0 && rules == 0.0 && ems == 0.0) return true;
  return roots == 1.0 && rules == static_cast<double>(c.n - 1) && ems == static_cast<double>(c.n);
}

}  // namespace detail

/// True when `t` has the family's layout and encodes one valid structure.
inline bool is_valid_structure(const StructuredDistribution& d, const StructureIndicator& t) {
  const Config& c = d.config();
  for (const auto& [name, shape] : potential_layout(d.family(), c)) {
    if (!t.contains(name)) {
      if (d.family() == Family::pcfg && name != "sticky") continue;
      return false;
    }
    if (t[name].shape() != shape) return false;
  }
  switch (d.family()) {
    case Family::linear_chain: return detail::valid_chain(t, c);
    case Family::semi_markov: return detail::valid_semi_markov(t, c);
    case Family::monotone_alignment: return detail::valid_alignment(t, c);
    case Family::ctc: return detail::valid_ctc(t, c);
    case Family::one_to_one: return detail::valid_permutation(t["scores"]);
    case Family::tree_crf: return detail::valid_tree_crf(t, c);
    case Family::pcfg: return detail::valid_pcfg(t, c);
    case Family::spanning_tree: {
      const auto heads = indicator_to_heads(t["adjacency"]);
      return heads && is_valid_tree(*heads, c.spanning);
    }
  }
  return false;
}

}  // namespace structdist
