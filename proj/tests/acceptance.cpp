// Acceptance run: solves the quadratic map, runs every check with seed 1
// and prints one PASS/FAIL line per numbered criterion. Report-only extras
// are listed separately and never affect the exit status.
#include <cstdio>
#include <exception>
#include <vector>

#include "feig/feigenbaum_map.hpp"
#include "verification.hpp"

int main() {
  using namespace feig::verify;
  try {
    const feig::FeigenbaumMap map = feig::solve_feigenbaum(2, 40, 1e-12);
    std::vector<CheckResult> extras;
    int failed = 0, numbered = 0;
    run_suite(map, Suite::all, 1, [&](const CheckResult& r) {
      if (r.id == 0) {
        extras.push_back(r);
        return;
      }
      ++numbered;
      if (r.status != Status::pass) ++failed;
      std::printf("%s %2d %-30s %7.2fs %s\n", r.status == Status::pass ? "PASS" : "FAIL", r.id, r.name.c_str(),
                  r.seconds, r.measured.dump().c_str());
      std::fflush(stdout);
    });
    for (const CheckResult& r : extras) {
      std::printf("REPORT   %-30s %7.2fs %s\n", r.name.c_str(), r.seconds, r.measured.dump().c_str());
    }
    std::printf("%d/%d criteria passed\n", numbered - failed, numbered);
    return failed == 0 && numbered == 19 ? 0 : 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "acceptance: %s\n", e.what());
    return 1;
  }
}
