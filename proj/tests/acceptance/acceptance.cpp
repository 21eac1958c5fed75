// One line per acceptance criterion, at the tolerances the checks define.
// Exit status 0 only if every criterion passes.

#include <cstring>
#include <iostream>
#include <map>
#include <string>

#include "ifp/checks.hpp"
#include "ifp/model.hpp"

int main(int argc, char** argv) {
  ifp::checks::Options options;
  options.level = ifp::checks::Level::full;
  for (int i = 1; i + 1 < argc; ++i) {
    if (std::strcmp(argv[i], "--level") == 0 && std::strcmp(argv[i + 1], "quick") == 0) {
      options.level = ifp::checks::Level::quick;
    }
  }

  const auto results = ifp::checks::run_all(ifp::kFigureParams, options);
  std::map<int, bool> by_criterion;
  for (const auto& r : results) {
    std::cout << "  " << ifp::checks::format(r) << '\n';
    auto [it, inserted] = by_criterion.try_emplace(r.criterion, true);
    it->second = it->second && r.passed;
  }
  std::cout << '\n';
  for (const auto& [criterion, passed] : by_criterion) {
    std::cout << "criterion " << criterion << ": " << (passed ? "PASS" : "FAIL") << '\n';
  }
  return ifp::checks::all_passed(results) ? 0 : 1;
}
