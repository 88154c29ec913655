// Runs the eleven acceptance criteria and prints one line per criterion.
#include <cstdio>
#include <cstdlib>
#include <string>

#include "acceptance.h"

int main(int argc, char** argv) {
  roughwave::acceptance::Options options;
  for (int i = 1; i < argc; ++i) options.only.push_back(std::atoi(argv[i]));
  bool ok = true;
  roughwave::acceptance::RunAll(options, [&ok](const auto& r) {
    std::printf("%s\n", roughwave::acceptance::FormatLine(r).c_str());
    std::fflush(stdout);
    ok = ok && r.passed;
  });
  return ok ? 0 : 1;
}
