#pragma once

#include <sys/wait.h>
#include <unistd.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace structdist::testing {

struct ProcessResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

/// Runs a shell command, capturing standard output and standard error separately.
inline ProcessResult run_process(const std::string& command) {
  static int counter = 0;
  const auto err_path =
      std::filesystem::temp_directory_path() / ("structdist_err_" + std::to_string(::getpid()) + "_" +
                                                std::to_string(counter++) + ".txt");
  ProcessResult r;
  FILE* pipe = ::popen((command + " 2>" + err_path.string()).c_str(), "r");
  if (pipe == nullptr) return r;
  std::array<char, 4096> buf{};
  std::size_t got = 0;
  while ((got = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), got);
  const int status = ::pclose(pipe);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  std::ifstream err(err_path);
  std::stringstream ss;
  ss << err.rdbuf();
  r.err = ss.str();
  std::filesystem::remove(err_path);
  return r;
}

inline std::string cli() { return STRUCTDIST_CLI_PATH; }
inline std::string problem(const std::string& name) { return std::string(STRUCTDIST_PROBLEMS_DIR) + "/" + name; }

}  // namespace structdist::testing
