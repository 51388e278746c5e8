#pragma once

#include <algorithm>
#include <array>
#include <chrono>
#include <functional>
#include <ostream>
#include <string>
#include <vector>

#include "structdist/chain.hpp"
#include "structdist/constituency.hpp"
#include "structdist/hypergraph.hpp"
#include "structdist/rng.hpp"
#include "structdist/spanning.hpp"

namespace structdist::bench {

inline constexpr std::array<std::string_view, 4> kSuites = {"nonprojective-argmax", "projective-argmax", "chain",
                                                             "treecrf"};

struct Row {
  std::string suite;
  std::size_t n;
  std::string algorithm;
  double median_ms;
  std::size_t iterations;
};

struct Options {
  std::size_t min_iterations = 3;
  std::size_t max_iterations = 25;
  double budget_ms = 250.0;  // per (size, algorithm) cell
  std::uint64_t seed = 0;
};

inline Tensor random_tensor(Shape shape, Rng& rng) {
  Tensor t(std::move(shape));
  for (double& x : t.data()) x = 4.0 * rng.uniform() - 2.0;
  return t;
}

inline Tensor random_adjacency(std::size_t n, Rng& rng) {
  Tensor adj = random_tensor({n + 1, n + 1}, rng);
  for (std::size_t i = 0; i <= n; ++i) {
    adj(i, i) = kNegInf;
    adj(i, 0) = kNegInf;
  }
  return adj;
}

/// Median wall time of `work` over repeated runs; never reports zero.
inline std::pair<double, std::size_t> time_median(const std::function<void()>& work, const Options& opt) {
  std::vector<double> ms;
  double spent = 0.0;
  while (ms.size() < opt.min_iterations || (ms.size() < opt.max_iterations && spent < opt.budget_ms)) {
    const auto start = std::chrono::steady_clock::now();
    work();
    const auto stop = std::chrono::steady_clock::now();
    const double elapsed = std::chrono::duration<double, std::milli>(stop - start).count();
    ms.push_back(std::max(elapsed, 1e-6));
    spent += elapsed;
  }
  std::sort(ms.begin(), ms.end());
  const std::size_t k = ms.size();
  const double median = k % 2 == 1 ? ms[k / 2] : 0.5 * (ms[k / 2 - 1] + ms[k / 2]);
  return {median, k};
}

// Keeps results observable so the timed work cannot be optimized away.
inline volatile double sink = 0.0;

/// Timings for one suite over a size grid. Each size gets one random instance shared by the
/// compared algorithms.
inline std::vector<Row> run_suite(std::string_view suite, const std::vector<std::size_t>& sizes,
                                  const Options& opt = {}) {
  if (std::find(kSuites.begin(), kSuites.end(), suite) == kSuites.end()) {
    throw InvalidArgument("unknown bench suite '" + std::string(suite) + "'");
  }
  std::vector<Row> rows;
  Rng rng(RandomSeed{opt.seed});
  const auto add = [&](std::size_t n, std::string algorithm, const std::function<void()>& work) {
    const auto [median, iters] = time_median(work, opt);
    rows.push_back({std::string(suite), n, std::move(algorithm), median, iters});
  };
  for (std::size_t n : sizes) {
    if (n == 0) throw InvalidArgument("bench sizes must be positive");
    if (suite == "nonprojective-argmax") {
      const Tensor adj = random_adjacency(n, rng);
      add(n, "chu-liu-edmonds", [&] { sink = static_cast<double>(cle_argmax(adj, false)[1]); });
      add(n, "chu-liu-edmonds+reweighting", [&] { sink = static_cast<double>(cle_argmax(adj, true)[1]); });
    } else if (suite == "projective-argmax") {
      const Tensor adj = random_adjacency(n, rng);
      add(n, "eisner-max-plus", [&] { sink = static_cast<double>(eisner_argmax(adj, false)[1]); });
      add(n, "kuhlmann-arc-hybrid", [&] { sink = static_cast<double>(kuhlmann_argmax(adj, false)[1]); });
    } else if (suite == "chain") {
      const std::size_t m = 32;
      const LinearChainCRF chain{random_tensor({m}, rng), random_tensor({n - 1, m, m}, rng)};
      const auto dist = chain.to_distribution();
      add(n, "forward", [&] { sink = forward_log_partition(chain); });
      add(n, "forward-backward", [&] { sink = outside_marginals(chain_hypergraph(dist.config()), dist.theta())[0]; });
    } else {
      const std::size_t m = 4;
      const TreeCRF tree{random_tensor({n, n, m}, rng)};
      const auto dist = tree.to_distribution();
      add(n, "cky", [&] { sink = cky_log_partition(tree); });
      add(n, "cky-inside-outside",
          [&] { sink = outside_marginals(tree_crf_hypergraph(dist.config()), dist.theta())[0]; });
    }
  }
  return rows;
}

inline void write_csv(std::ostream& out, const std::vector<Row>& rows) {
  out << "suite,n,algorithm,median_ms,iterations\n";
  for (const auto& r : rows) {
    out << r.suite << ',' << r.n << ',' << r.algorithm << ',' << r.median_ms << ',' << r.iterations << '\n';
  }
}

}  // namespace structdist::bench
