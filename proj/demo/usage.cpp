#include <iostream>

#include "structdist.hpp"

using namespace structdist;

int main() {
  // A 3-position, 2-tag chain that prefers staying on the same tag.
  Tensor init({2}, 0.0);
  Tensor transitions({2, 2, 2}, 0.0);
  for (std::size_t t = 0; t < 2; ++t) {
    transitions(t, 0, 0) = 1.0;
    transitions(t, 1, 1) = 1.0;
  }
  const auto chain = LinearChainCRF{init, transitions}.to_distribution();
  std::cout << "chain logZ      " << log_partition(chain) << '\n';
  std::cout << "chain entropy   " << entropy(chain) << '\n';
  const auto best = argmax(chain);
  std::cout << "chain best score " << structure_score(chain, best) << " via "
            << algorithm_name(chain, Operation::argmax) << '\n';

  // Non-projective dependency trees over 4 words with one edge out of the root.
  Tensor adjacency({5, 5}, 0.0);
  adjacency(0, 2) = 2.0;
  adjacency(2, 1) = 1.0;
  adjacency(2, 4) = 1.0;
  adjacency(4, 3) = 0.5;
  SpanningTreeCRF trees{adjacency, SpanningFlags{.directed = true, .projective = false, .single_root_edge = true}};
  const auto dist = trees.to_distribution();
  std::cout << "trees logZ      " << log_partition(dist) << " via "
            << algorithm_name(dist, Operation::log_partition) << '\n';
  const auto heads = indicator_to_heads(argmax(dist)["adjacency"]);
  std::cout << "best heads     ";
  for (std::size_t d = 1; d < heads->size(); ++d) std::cout << ' ' << (*heads)[d];
  std::cout << '\n';
  const auto draw = sample(dist, RandomSeed{7});
  const auto sampled = indicator_to_heads(draw["adjacency"]);
  std::cout << "sampled heads  ";
  for (std::size_t d = 1; d < sampled->size(); ++d) std::cout << ' ' << (*sampled)[d];
  std::cout << "  log p = " << log_prob(dist, draw) << '\n';
}
