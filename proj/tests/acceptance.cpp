// Acceptance battery: one line per criterion.  The optional argument is the
// path of the curvkit executable, used for the byte-identical report check.

#include "curvkit/suite.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

using namespace curvkit;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void line(bool pass, int id, const std::string& name, const std::string& text) {
  std::printf("[%s] %2d %-26s %s\n", pass ? "PASS" : "FAIL", id, name.c_str(), text.c_str());
  std::fflush(stdout);
}

}  // namespace

int main(int argc, char** argv) {
  SuiteOptions opt;
  opt.jobs = resolve_jobs(0);
  opt.progress = [](const std::string& s) { std::cerr << s << "\n"; };

  auto results = run_suite(opt);
  bool all = true;
  for (const auto& r : results) {
    bool in_time = r.seconds <= r.budget;
    bool ok = r.pass && in_time;
    std::ostringstream t;
    t.precision(2);
    t << std::fixed << r.summary << " [" << r.seconds << " s, budget " << r.budget << " s"
      << (in_time ? "" : " EXCEEDED") << "]";
    line(ok, r.id, r.name, t.str());
    all = all && ok;
  }

  // 10: two runs of the same configuration give identical bytes, in process
  // and through the command line.
  std::string first = dump(suite_report(results, opt));
  SuiteOptions quiet = opt;
  quiet.progress = nullptr;
  std::string second = dump(suite_report(run_suite(quiet), quiet));
  bool same = first == second;
  std::string how = "in-process reports " + std::string(same ? "identical" : "differ") + " (" +
                    std::to_string(first.size()) + " bytes)";
  if (argc > 1) {
    std::string exe = argv[1];
    std::string a = "acceptance_report_1.json", b = "acceptance_report_2.json";
    std::string cmd = "\"" + exe + "\" verify-suite --jobs " + std::to_string(opt.jobs) + " --out ";
    int ra = std::system((cmd + a + " 2> /dev/null").c_str());
    int rb = std::system((cmd + b + " 2> /dev/null").c_str());
    std::string fa = slurp(a), fb = slurp(b);
    bool cli_same = ra == 0 && rb == 0 && !fa.empty() && fa == fb && fa == first;
    how += ", verify-suite runs " + std::string(cli_same ? "identical to each other and to it" : "differ");
    same = same && cli_same;
  }
  line(same, 10, "determinism", how);
  all = all && same;

  std::printf("%s\n", all ? "ALL CRITERIA PASS" : "SOME CRITERIA FAIL");
  return all ? 0 : 1;
}
