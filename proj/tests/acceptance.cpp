// Shipped verification suite: runs the ten checks and prints one line each.
// Exit status 0 only when every check passes.

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <string>

#include "vshock/harness.hpp"

int main(int argc, char** argv) {
  std::string scratch = "acceptance_out";
  int jobs = 1;
  for (int i = 1; i < argc; ++i) {
    if (!std::strcmp(argv[i], "--jobs") && i + 1 < argc) {
      jobs = std::atoi(argv[++i]);
    } else if (!std::strcmp(argv[i], "--scratch") && i + 1 < argc) {
      scratch = argv[++i];
    } else {
      std::fprintf(stderr, "usage: %s [--jobs N] [--scratch DIR]\n", argv[0]);
      return 2;
    }
  }
  if (jobs < 1) jobs = 1;
  if (jobs > 256) jobs = 256;

  const auto outcomes = vshock::acceptance_suite(scratch, jobs, false);
  int passed = 0;
  for (const auto& o : outcomes) passed += o.pass ? 1 : 0;
  std::printf("%d/%zu checks passed\n", passed, outcomes.size());
  return passed == static_cast<int>(outcomes.size()) ? 0 : 1;
}
