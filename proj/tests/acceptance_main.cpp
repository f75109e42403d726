// Acceptance-suite runner: prints one pass/fail line per criterion and
// exits nonzero on any failure.

#include <cstdio>
#include <cstring>
#include <string>

#include "polyfold/acceptance.hpp"

int main(int argc, char** argv) {
  std::string suite = "fixtures";
  std::string filter;
  unsigned seed = 7;
  for (int i = 1; i < argc; ++i) {
    if (!std::strcmp(argv[i], "--suite") && i + 1 < argc) suite = argv[++i];
    else if (!std::strcmp(argv[i], "--filter") && i + 1 < argc) filter = argv[++i];
    else if (!std::strcmp(argv[i], "--seed") && i + 1 < argc) seed = unsigned(std::atoi(argv[++i]));
    else {
      std::fprintf(stderr, "usage: acceptance [--suite dir] [--filter substr] [--seed n]\n");
      return 2;
    }
  }
  auto results = polyfold::acceptance::run(suite, seed, filter);
  return polyfold::acceptance::report(results);
}
