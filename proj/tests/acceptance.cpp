#include <cstdio>
#include <iostream>

#include "rwl/workbench.hpp"

// Runs every acceptance criterion against the bundled corpus; one line per criterion.
int main() {
  rwl::wb::SuiteOptions o{rwl::wb::default_corpus_dir(), 1};
  rwl::wb::AcceptanceSuite suite(o);
  int failed = 0;
  for (const auto& r : suite.run_all()) {
    std::printf("%s  criterion %2d  %-42s %7.2f s (limit %g s)  %s\n", r.pass() ? "PASS" : "FAIL", r.id, r.title.c_str(),
                r.seconds, r.time_limit_s, r.summary.c_str());
    for (const auto& rec : r.records)
      if (!rec.pass)
        std::printf("        %s: %s%s%s\n", rec.item.c_str(), rec.verdict.c_str(),
                    rec.budget.empty() ? "" : (" under " + rec.budget).c_str(), rec.detail.empty() ? "" : (" (" + rec.detail + ")").c_str());
    std::fflush(stdout);
    failed += !r.pass();
  }
  std::printf("%d/%d criteria passed\n", rwl::wb::kCriteria - failed, rwl::wb::kCriteria);
  return failed == 0 ? 0 : 1;
}
