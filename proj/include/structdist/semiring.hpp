#pragma once

#include <algorithm>
#include <concepts>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "structdist/numerics.hpp"
#include "structdist/tensor.hpp"

namespace structdist {

template <typename S>
concept Semiring = requires(double a, double b, std::span<const double> xs) {
  { S::zero() } -> std::convertible_to<double>;
  { S::one() } -> std::convertible_to<double>;
  { S::plus(a, b) } -> std::convertible_to<double>;
  { S::times(a, b) } -> std::convertible_to<double>;
  { S::sum(xs) } -> std::convertible_to<double>;
};

/// Sum-product in log space.
struct LogSemiring {
  static constexpr const char* name = "log";
  static constexpr double zero() { return kNegInf; }
  static constexpr double one() { return 0.0; }
  static double plus(double a, double b) { return log_add_exp(a, b); }
  static constexpr double times(double a, double b) { return a + b; }
  static double sum(std::span<const double> xs) { return logsumexp(xs); }
};

/// Viterbi (max-plus) semiring.
struct MaxPlusSemiring {
  static constexpr const char* name = "max-plus";
  static constexpr double zero() { return kNegInf; }
  static constexpr double one() { return 0.0; }
  static constexpr double plus(double a, double b) { return a < b ? b : a; }
  static constexpr double times(double a, double b) { return a + b; }
  static double sum(std::span<const double> xs) {
    double best = kNegInf;
    for (double x : xs) best = std::max(best, x);
    return best;
  }
};

namespace detail {

struct ContractionPlan {
  std::vector<std::string> inputs;
  std::string output;
  std::string summed;
  std::map<char, std::size_t> extents;
};

inline ContractionPlan plan_contraction(std::string_view pattern, std::span<const Tensor> operands) {
  ContractionPlan plan;
  const auto arrow = pattern.find("->");
  if (arrow == std::string_view::npos) throw InvalidArgument("contract: pattern needs '->'");
  std::string_view lhs = pattern.substr(0, arrow);
  plan.output = std::string(pattern.substr(arrow + 2));

  std::size_t start = 0;
  while (true) {
    const auto comma = lhs.find(',', start);
    plan.inputs.emplace_back(lhs.substr(start, comma == std::string_view::npos ? lhs.npos : comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  if (plan.inputs.size() != operands.size()) {
    throw InvalidArgument("contract: pattern names " + std::to_string(plan.inputs.size()) +
                          " operands, got " + std::to_string(operands.size()));
  }
  for (std::size_t k = 0; k < operands.size(); ++k) {
    const auto& axes = plan.inputs[k];
    if (axes.size() != operands[k].rank()) {
      throw InvalidArgument("contract: operand " + std::to_string(k) + " has rank " +
                            std::to_string(operands[k].rank()) + " but pattern '" + axes + "'");
    }
    for (std::size_t a = 0; a < axes.size(); ++a) {
      const char c = axes[a];
      const std::size_t ext = operands[k].extent(a);
      auto [it, inserted] = plan.extents.emplace(c, ext);
      if (!inserted && it->second != ext) {
        throw InvalidArgument(std::string("contract: axis '") + c + "' has inconsistent extents");
      }
    }
  }
  for (char c : plan.output) {
    if (!plan.extents.contains(c)) throw InvalidArgument(std::string("contract: unknown output axis '") + c + "'");
    if (std::count(plan.output.begin(), plan.output.end(), c) != 1) {
      throw InvalidArgument(std::string("contract: repeated output axis '") + c + "'");
    }
  }
  for (const auto& [c, ext] : plan.extents) {
    if (plan.output.find(c) == std::string::npos) plan.summed.push_back(c);
  }
  return plan;
}

// Advances a mixed-radix counter; returns false after wrapping around.
inline bool next_index(std::vector<std::size_t>& idx, const std::vector<std::size_t>& extents) {
  for (std::size_t a = idx.size(); a-- > 0;) {
    if (++idx[a] < extents[a]) return true;
    idx[a] = 0;
  }
  return false;
}

}  // namespace detail

/// Einsum-style contraction where + is replaced by the semiring's plus and * by its times.
/// `pattern` uses one letter per axis, e.g. "ij,jk->ik".
template <Semiring S>
Tensor semiring_contract(std::string_view pattern, std::span<const Tensor> operands) {
  const auto plan = detail::plan_contraction(pattern, operands);

  Shape out_shape;
  for (char c : plan.output) out_shape.push_back(plan.extents.at(c));
  std::vector<std::size_t> sum_extents;
  for (char c : plan.summed) sum_extents.push_back(plan.extents.at(c));

  // value of each letter for the current (output, summed) assignment
  std::map<char, std::size_t*> slot;
  std::vector<std::size_t> out_idx(plan.output.size(), 0);
  std::vector<std::size_t> sum_idx(plan.summed.size(), 0);
  for (std::size_t a = 0; a < plan.output.size(); ++a) slot[plan.output[a]] = &out_idx[a];
  for (std::size_t a = 0; a < plan.summed.size(); ++a) slot[plan.summed[a]] = &sum_idx[a];

  std::vector<std::vector<std::size_t*>> operand_slots(operands.size());
  for (std::size_t k = 0; k < operands.size(); ++k) {
    for (char c : plan.inputs[k]) operand_slots[k].push_back(slot.at(c));
  }

  Tensor out(out_shape, S::zero());
  const bool empty_out = shape_size(out_shape) == 0;
  const bool empty_sum = shape_size(Shape(sum_extents)) == 0;
  if (empty_out) return out;

  std::vector<double> terms;
  std::vector<std::size_t> idx;
  std::size_t flat = 0;
  do {
    terms.clear();
    if (!empty_sum) {
      std::fill(sum_idx.begin(), sum_idx.end(), 0);
      do {
        double prod = S::one();
        for (std::size_t k = 0; k < operands.size(); ++k) {
          idx.clear();
          for (auto* p : operand_slots[k]) idx.push_back(*p);
          prod = S::times(prod, operands[k].at(idx));
        }
        terms.push_back(prod);
      } while (detail::next_index(sum_idx, sum_extents));
    }
    out.data()[flat++] = S::sum(terms);
  } while (detail::next_index(out_idx, out_shape));
  return out;
}

template <Semiring S>
Tensor semiring_contract(std::string_view pattern, std::initializer_list<Tensor> operands) {
  return semiring_contract<S>(pattern, std::span<const Tensor>(operands.begin(), operands.size()));
}

}  // namespace structdist
