// Acceptance suite: end-to-end checks of the library against its contract,
// one pass/fail line per criterion. Run all criteria with no arguments or a
// single one with --criterion N.

#include <cstring>
#include <functional>
#include <iostream>
#include <string>
#include <vector>

#include "criteria.hpp"

int main(int argc, char** argv) {
  int only = 0;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc) only = std::atoi(argv[++i]);
  }

  const auto& criteria = acceptance::all_criteria();
  int failures = 0;
  for (const auto& c : criteria) {
    if (only != 0 && c.number != only) continue;
    std::string detail;
    bool pass = false;
    try {
      pass = c.run(detail);
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    std::cout << (pass ? "[PASS]" : "[FAIL]") << " criterion " << c.number << ": " << c.name;
    if (!detail.empty()) std::cout << " — " << detail;
    std::cout << std::endl;
    if (!pass) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
