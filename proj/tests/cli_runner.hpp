#pragma once

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <stdexcept>
#include <string>

namespace finecc::testing {

struct CliRun {
  int exit_code = -1;
  std::string out;
};

// Runs the built CLI with `args` (already shell-quoted), capturing stdout.
// Stderr is discarded.
inline CliRun run_cli(const std::string& args) {
  std::string cmd = std::string("\"") + FINECC_CLI_PATH + "\" " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) throw std::runtime_error("popen failed: " + cmd);
  CliRun r;
  std::array<char, 4096> buf;
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
  int status = pclose(pipe);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

inline std::string fixture_path(const std::string& name) {
  return std::string("\"") + FINECC_FIXTURE_DIR + "/" + name + "\"";
}

}  // namespace finecc::testing
