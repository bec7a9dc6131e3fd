// Runs the CLI binary through the shell and captures stdout, stderr and the exit code.
#pragma once

#include <sys/wait.h>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace equislice::testgen {

struct CliResult {
  int code = -1;
  std::string out;
  std::string err;
};

inline std::string shell_quote(const std::string& s) {
  std::string q = "'";
  for (char c : s) q += c == '\'' ? std::string("'\\''") : std::string(1, c);
  return q + "'";
}

inline CliResult run_cli(const std::vector<std::string>& args, const std::string& env = "") {
  static int counter = 0;
  const std::string err_path = "cli_stderr_" + std::to_string(++counter) + ".txt";
  std::string cmd = env.empty() ? "" : env + " ";
  cmd += shell_quote(EQUISLICE_CLI);
  for (auto& a : args) cmd += " " + shell_quote(a);
  cmd += " 2>" + err_path;
  CliResult r;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return r;
  char buf[4096];
  size_t n;
  while ((n = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
  const int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  std::ifstream in(err_path);
  std::stringstream ss;
  ss << in.rdbuf();
  r.err = ss.str();
  std::remove(err_path.c_str());
  return r;
}

// One invocation per command, used for exit-code and determinism checks.
inline std::vector<std::vector<std::string>> every_command() {
  return {
      {"poisson", "jacobi", "@sl2"},
      {"poisson", "jacobi", "@cyclic"},
      {"poisson", "degree", "@kleinian:3"},
      {"poisson", "center", "@counterex1", "--weight-min", "1", "--weight-max", "1"},
      {"poisson", "hp0", "@kleinian:2"},
      {"poisson", "gradings", "@sl2"},
      {"darboux", "normalize", "@counterex1"},
      {"darboux", "normalize", "@standard:2,2", "--scramble", "2", "--seed", "5", "--order", "5"},
      {"darboux", "slice", "@counterex2"},
      {"hypertoric", "unimodular", "@hyper-4x2"},
      {"hypertoric", "leaves", "@hyper-pair"},
      {"hypertoric", "decompose", "@hyper-4x2"},
      {"hypertoric", "verify", "@hyper-4x2"},
      {"quotient", "parabolics", "@zn:3"},
      {"quotient", "reflections", "@klein4"},
      {"quotient", "slice", "@klein4"},
      {"quotient", "sra", "@zn:2"},
      {"quantize", "build", "@D:1,2"},
      {"quantize", "normalform", "@sl2q", "--word", "f*e"},
      {"quantize", "central", "@sl2q"},
      {"quantize", "slice", "@sl2q-f"},
      {"quantize", "axiom", "@D:2,2"},
      {"selftest"},
  };
}

}  // namespace equislice::testgen
