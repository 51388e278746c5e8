#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>

#include "common/instances.hpp"
#include "common/process.hpp"
#include "structdist/io.hpp"

using namespace structdist;
using namespace structdist::testing;
using structdist::io::Json;

namespace {

std::filesystem::path scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "structdist_io_tests";
  std::filesystem::create_directories(dir);
  return dir / name;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream(path) << text;
}

std::size_t count_lines(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

}  // namespace

TEST(Io, TensorRoundTripWithInfinities) {
  const Tensor t({2, 2}, std::vector<double>{kNegInf, 0.1, -2.5, 1e-300});
  const Json j = io::tensor_to_json(t);
  EXPECT_EQ(j[0][0], "-inf");
  EXPECT_EQ(io::tensor_from_json(j), t);
  EXPECT_EQ(io::tensor_from_json(Json::parse("3.5")), Tensor::scalar(3.5));
}

TEST(Io, RejectsRaggedAndBadValues) {
  EXPECT_THROW(io::tensor_from_json(Json::parse("[[1, 2], [3]]")), InvalidArgument);
  EXPECT_THROW(io::tensor_from_json(Json::parse("[[1, 2], 3]")), InvalidArgument);
  EXPECT_THROW(io::tensor_from_json(Json::parse("[1, \"nan\"]")), InvalidArgument);
  EXPECT_THROW(io::tensor_from_json(Json::parse("[1, null]")), InvalidArgument);
}

TEST(Io, ProblemRoundTripPreservesLogPartition) {
  Rng rng({101});
  for (Family f : kAllFamilies) {
    const auto d = random_instance(f, random_config(f, rng), rng, 2.0);
    const auto path = scratch(std::string(to_string(f)) + ".json");
    io::write_problem(path.string(), d);
    const auto back = io::read_problem(path.string()).distribution;
    EXPECT_TRUE(same_factorization(d, back)) << to_string(f);
    EXPECT_EQ(back.potentials(), d.potentials()) << to_string(f);
    if (f != Family::one_to_one) {
      EXPECT_NEAR(log_partition(back), log_partition(d), 1e-12) << to_string(f);
    }
  }
}

TEST(Io, SingleStepChainKeepsEmptyTransitions) {
  const auto d = LinearChainCRF{Tensor({3}, 0.0), Tensor({0, 3, 3})}.to_distribution();
  const auto back = io::problem_from_json(io::problem_to_json(d)).distribution;
  EXPECT_NEAR(log_partition(back), std::log(3.0), 1e-12);
}

TEST(Io, MalformedDocuments) {
  EXPECT_THROW(io::problem_from_json(Json::parse(R"({"potentials": {}})")), InvalidArgument);
  EXPECT_THROW(io::problem_from_json(Json::parse(R"({"family": "nope", "potentials": {}})")), InvalidArgument);
  EXPECT_THROW(io::problem_from_json(Json::parse(R"({"family": "linear_chain", "potentials": {"init": [0]}})")),
               InvalidArgument);
  EXPECT_THROW(io::problem_from_json(Json::parse(
                   R"({"family": "linear_chain", "config": {"n": -1}, "potentials": {"init": [0], "transitions": []}})")),
               InvalidArgument);
}

TEST(Cli, LogZOfUniformChain) {
  const auto r = run_process(cli() + " logZ " + problem("chain_uniform.json"));
  ASSERT_EQ(r.exit_code, 0) << r.err;
  const Json doc = Json::parse(r.out);
  EXPECT_EQ(doc["command"], "logZ");
  EXPECT_EQ(doc["algorithm"], "forward");
  EXPECT_EQ(doc["config"]["n"], 3);
  EXPECT_NEAR(doc["result"].get<double>(), 3.0 * std::numbers::ln2, 1e-12);
}

TEST(Cli, ResultsEqualLibraryExactly) {
  const auto d = io::read_problem(problem("spanning.json")).distribution;
  const auto lz = Json::parse(run_process(cli() + " logZ " + problem("spanning.json")).out);
  EXPECT_EQ(lz["result"].get<double>(), log_partition(d));
  EXPECT_EQ(lz["algorithm"], "mtt-single-root");
  const auto h = Json::parse(run_process(cli() + " entropy " + problem("spanning.json")).out);
  EXPECT_EQ(h["result"].get<double>(), entropy(d));
  const auto mu = Json::parse(run_process(cli() + " marginals " + problem("spanning.json")).out);
  EXPECT_EQ(io::tensor_from_json(mu["result"]["adjacency"]), marginals(d)["adjacency"]);
  const auto best = Json::parse(run_process(cli() + " argmax " + problem("spanning.json")).out);
  EXPECT_EQ(best["algorithm"], "chu-liu-edmonds+reweighting");
  EXPECT_EQ(io::tensor_from_json(best["result"]["adjacency"]), argmax(d)["adjacency"]);
}

TEST(Cli, KlOfIdenticalInputsIsZero) {
  const auto r = run_process(cli() + " kl " + problem("spanning.json") + " " + problem("spanning.json"));
  ASSERT_EQ(r.exit_code, 0) << r.err;
  EXPECT_NEAR(Json::parse(r.out)["result"].get<double>(), 0.0, 1e-9);
  const auto ce = run_process(cli() + " crossentropy " + problem("chain_uniform.json") + " " + problem("chain_uniform.json"));
  EXPECT_NEAR(Json::parse(ce.out)["result"].get<double>(), 3.0 * std::numbers::ln2, 1e-12);
}

TEST(Cli, SampleIsReproducible) {
  const std::string cmd = cli() + " sample " + problem("spanning.json") + " --seed 7 --num 2";
  const auto a = run_process(cmd), b = run_process(cmd);
  ASSERT_EQ(a.exit_code, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
  const Json doc = Json::parse(a.out);
  EXPECT_EQ(doc["result"].size(), 2u);
  EXPECT_EQ(doc["seed"], 7);
  const auto colbourn = run_process(cmd + " --sampler colbourn");
  EXPECT_EQ(Json::parse(colbourn.out)["algorithm"], "colbourn-single-root");
}

TEST(Cli, LogProbUsesStructureField) {
  const auto r = run_process(cli() + " logprob " + problem("pcfg.json"));
  ASSERT_EQ(r.exit_code, 0) << r.err;
  EXPECT_NEAR(Json::parse(r.out)["result"].get<double>(), 0.0, 1e-12);  // two tokens have one bracketing
  const auto missing = run_process(cli() + " logprob " + problem("chain_uniform.json"));
  EXPECT_EQ(missing.exit_code, 2);
}

TEST(Cli, ExitCodes) {
  const auto unsupported = run_process(cli() + " logZ " + problem("matching.json"));
  EXPECT_EQ(unsupported.exit_code, 3);
  EXPECT_NE(unsupported.err.find("partition intractable for one-to-one matching"), std::string::npos);
  EXPECT_EQ(run_process(cli() + " argmax " + problem("matching.json")).exit_code, 0);

  EXPECT_EQ(run_process(cli() + " logZ /nonexistent/file.json").exit_code, 2);
  const auto bad = scratch("bad.json");
  write_text(bad, "{ not json");
  EXPECT_EQ(run_process(cli() + " logZ " + bad.string()).exit_code, 2);
  const auto wrong_shape = scratch("wrong_shape.json");
  write_text(wrong_shape, R"({"family": "linear_chain", "potentials": {"init": [0, 0], "transitions": [[[0]]]}})");
  EXPECT_EQ(run_process(cli() + " logZ " + wrong_shape.string()).exit_code, 2);
  EXPECT_EQ(run_process(cli() + " sample " + problem("spanning.json")).exit_code, 2);
  EXPECT_EQ(run_process(cli() + " frobnicate " + problem("spanning.json")).exit_code, 2);
  EXPECT_EQ(run_process(cli() + " kl " + problem("spanning.json") + " " + problem("chain_uniform.json")).exit_code, 2);
  EXPECT_EQ(run_process(cli() + " bench no-such-suite").exit_code, 2);
}

TEST(Cli, OutFlagWritesFile) {
  const auto out = scratch("logz.json");
  std::filesystem::remove(out);
  const auto r = run_process(cli() + " logZ " + problem("chain_uniform.json") + " --out " + out.string());
  ASSERT_EQ(r.exit_code, 0);
  EXPECT_TRUE(r.out.empty());
  std::ifstream in(out);
  EXPECT_EQ(Json::parse(in)["command"], "logZ");
}

TEST(Cli, BenchRowCounts) {
  const auto proj = run_process(cli() + " bench projective-argmax --n 16,32,64");
  ASSERT_EQ(proj.exit_code, 0) << proj.err;
  EXPECT_EQ(count_lines(proj.out), 7u);
  EXPECT_EQ(proj.out.substr(0, proj.out.find('\n')), "suite,n,algorithm,median_ms,iterations");
  const auto nonproj = run_process(cli() + " bench nonprojective-argmax --n 32");
  ASSERT_EQ(nonproj.exit_code, 0);
  EXPECT_EQ(count_lines(nonproj.out), 3u);
  EXPECT_NE(nonproj.out.find("chu-liu-edmonds+reweighting"), std::string::npos);
}
