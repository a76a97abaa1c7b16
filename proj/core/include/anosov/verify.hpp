#pragma once

// self-contained verification suites over the bundled fixtures, shared by the
// cli `verify` command and the acceptance harness. each check reports one
// measured value against one tolerance; exact (bitwise) checks carry a zero
// tolerance. suites are sized to finish in well under a minute each.

#include <string>
#include <vector>

namespace anosov {

struct CheckResult {
  std::string id;      // stable short name
  std::string detail;  // what was measured, with the key numbers inline
  double value = 0.0;  // the measured residual / bound slack
  double tolerance = 0.0;
  bool pass = false;
  double seconds = 0.0;
};

std::vector<CheckResult> verify_identities(int threads = 0);
std::vector<CheckResult> verify_certificates(int threads = 0);
std::vector<CheckResult> verify_oracles(int threads = 0);

const std::vector<std::string>& verify_suites();
std::vector<CheckResult> run_suite(const std::string& name, int threads = 0);

bool all_pass(const std::vector<CheckResult>& checks);
std::string report_json(const std::string& suite, const std::vector<CheckResult>& checks);

}  // namespace anosov
