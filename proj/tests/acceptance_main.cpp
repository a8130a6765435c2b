// Acceptance run: one PASS/FAIL line per criterion, followed by its measured values.
#include <cstdio>
#include <cstdlib>
#include <string>

#include "artfima/acceptance.hpp"

int main(int argc, char** argv) {
  artfima::acceptance::SuiteOptions opt;
  const std::string suite = argc > 1 ? argv[1] : "all";
  int failed = 0;
  for (int id : artfima::acceptance::suite_ids(suite)) {
    const auto r = artfima::acceptance::run_criterion(id, opt);
    std::printf("%s\n", artfima::acceptance::format_line(r).c_str());
    std::fflush(stdout);
    if (!r.passed()) ++failed;
  }
  std::printf("%d criteria failed\n", failed);
  return failed == 0 ? EXIT_SUCCESS : EXIT_FAILURE;
}
