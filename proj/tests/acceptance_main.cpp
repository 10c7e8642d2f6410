// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.
// Optional arguments restrict the run to the listed criterion ids.

#include <cstdlib>
#include <iostream>
#include <string>

#include "scatlab/acceptance.hpp"

int main(int argc, char** argv) {
  scatlab::AcceptanceSettings settings;
  for (int i = 1; i < argc; ++i) settings.only.insert(std::stoi(argv[i]));
  const auto results = scatlab::run_acceptance(
      settings, [](const scatlab::CriterionResult& r) { std::cout << scatlab::format_line(r) << std::endl; });
  int failed = 0;
  for (const auto& r : results) failed += r.pass ? 0 : 1;
  std::cout << (results.size() - failed) << "/" << results.size() << " criteria pass" << std::endl;
  return failed == 0 ? EXIT_SUCCESS : EXIT_FAILURE;
}
