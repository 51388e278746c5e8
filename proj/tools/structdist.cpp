#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "structdist.hpp"
#include "structdist/bench.hpp"
#include "structdist/io.hpp"

namespace {

using structdist::io::Json;
using Document = nlohmann::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitMalformed = 2;
constexpr int kExitUnsupported = 3;

struct Args {
  std::string command;
  std::vector<std::string> inputs;
  std::optional<std::uint64_t> seed;
  std::size_t num = 1;
  std::vector<std::size_t> sizes{16, 32};
  std::string out;
  std::string sampler = "wilson";
};

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void emit(const Args& args, const std::string& text) {
  if (args.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream file(args.out);
  if (!file) throw structdist::InvalidArgument("cannot write '" + args.out + "'");
  file << text;
}

void expect_inputs(const Args& args, std::size_t count) {
  if (args.inputs.size() != count) {
    throw UsageError(args.command + " takes " + std::to_string(count) + " input file(s), got " +
                     std::to_string(args.inputs.size()));
  }
}

structdist::SpanningSampler parse_sampler(const std::string& name) {
  if (name == "wilson") return structdist::SpanningSampler::wilson;
  if (name == "colbourn") return structdist::SpanningSampler::colbourn;
  throw UsageError("unknown sampler '" + name + "' (expected wilson or colbourn)");
}

int run_bench(const Args& args) {
  if (args.inputs.empty()) throw UsageError("bench needs at least one suite name");
  std::vector<structdist::bench::Row> rows;
  structdist::bench::Options opt;
  if (args.seed) opt.seed = *args.seed;
  for (const auto& suite : args.inputs) {
    auto part = structdist::bench::run_suite(suite, args.sizes, opt);
    rows.insert(rows.end(), part.begin(), part.end());
  }
  std::ostringstream csv;
  structdist::bench::write_csv(csv, rows);
  emit(args, csv.str());
  return kExitOk;
}

int run_inference(const Args& args) {
  using namespace structdist;
  const bool two_inputs = args.command == "crossentropy" || args.command == "kl";
  expect_inputs(args, two_inputs ? 2 : 1);

  const auto problem = io::read_problem(args.inputs[0]);
  const StructuredDistribution& d = problem.distribution;
  std::optional<io::ProblemFile> second;
  if (two_inputs) {
    second = io::read_problem(args.inputs[1]);
    if (!same_factorization(d, second->distribution)) {
      throw InvalidArgument("both inputs must have the same family and config");
    }
  }
  const SpanningSampler sampler = parse_sampler(args.sampler);

  Document doc;
  doc["command"] = args.command;
  doc["inputs"] = args.inputs;
  doc["family"] = std::string(to_string(d.family()));
  doc["config"] = io::config_to_json(d.family(), d.config());

  const std::string& cmd = args.command;
  if (cmd == "logZ") {
    doc["algorithm"] = algorithm_name(d, Operation::log_partition);
    doc["result"] = io::number_to_json(log_partition(d));
  } else if (cmd == "marginals") {
    doc["algorithm"] = algorithm_name(d, Operation::marginals);
    doc["result"] = io::tensor_set_to_json(marginals(d));
  } else if (cmd == "argmax") {
    const auto best = argmax(d);
    doc["algorithm"] = algorithm_name(d, Operation::argmax);
    doc["score"] = io::number_to_json(structure_score(d, best));
    doc["result"] = io::tensor_set_to_json(best);
  } else if (cmd == "sample") {
    if (!args.seed) throw UsageError("sample requires --seed");
    doc["algorithm"] = algorithm_name(d, Operation::sample, sampler);
    doc["seed"] = *args.seed;
    doc["num"] = args.num;
    Document samples = Document::array();
    for (const auto& s : sample_many(d, RandomSeed{*args.seed}, args.num, sampler)) {
      samples.push_back(Document(io::tensor_set_to_json(s)));
    }
    doc["result"] = std::move(samples);
  } else if (cmd == "entropy") {
    doc["algorithm"] = algorithm_name(d, Operation::entropy);
    doc["result"] = io::number_to_json(entropy(d));
  } else if (cmd == "crossentropy") {
    doc["algorithm"] = algorithm_name(d, Operation::cross_entropy);
    doc["result"] = io::number_to_json(cross_entropy(d, second->distribution));
  } else if (cmd == "kl") {
    doc["algorithm"] = algorithm_name(d, Operation::kl_divergence);
    doc["result"] = io::number_to_json(kl_divergence(d, second->distribution));
  } else if (cmd == "logprob") {
    if (!problem.structure) throw InvalidArgument("logprob needs a \"structure\" entry in the input file");
    doc["algorithm"] = algorithm_name(d, Operation::log_prob);
    doc["result"] = io::number_to_json(log_prob(d, *problem.structure));
  } else {
    throw UsageError("unknown command '" + cmd + "'");
  }
  emit(args, doc.dump(2) + "\n");
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  Args args;
  CLI::App app{"Exact inference for structured distributions"};
  app.add_option("command", args.command,
                 "logZ | marginals | argmax | sample | entropy | crossentropy | kl | logprob | bench")
      ->required();
  app.add_option("inputs", args.inputs, "problem file(s), or suite names for bench");
  app.add_option("--seed", args.seed, "random seed (required by sample)");
  app.add_option("--num", args.num, "number of samples")->check(CLI::PositiveNumber);
  app.add_option("--n", args.sizes, "bench size grid, comma separated")->delimiter(',');
  app.add_option("--out", args.out, "write the document here instead of standard output");
  app.add_option("--sampler", args.sampler, "spanning-tree sampler: wilson (default) or colbourn");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitMalformed;
  }

  try {
    return args.command == "bench" ? run_bench(args) : run_inference(args);
  } catch (const structdist::Unsupported& e) {
    std::cerr << "structdist: " << e.what() << '\n';
    return kExitUnsupported;
  } catch (const UsageError& e) {
    std::cerr << "structdist: " << e.what() << '\n';
    return kExitMalformed;
  } catch (const structdist::InvalidArgument& e) {
    std::cerr << "structdist: " << e.what() << '\n';
    return kExitMalformed;
  } catch (const structdist::VacuousDistribution& e) {
    std::cerr << "structdist: " << e.what() << '\n';
    return kExitMalformed;
  } catch (const std::exception& e) {
    std::cerr << "structdist: " << e.what() << '\n';
    return kExitFailure;
  }
}
