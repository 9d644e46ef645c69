// Prints one PASS/FAIL line per criterion; exit status 1 if any fails.

#include <hstab/acceptance.hpp>

#include <cstdlib>
#include <iostream>

int main(int argc, char** argv) {
  hstab::AcceptanceOptions opt;
  if (argc > 1) opt.seed = std::strtoull(argv[1], nullptr, 10);
  auto first = hstab::run_acceptance(opt, [](const hstab::CriterionResult& c) {
    std::cout << hstab::format_line(c) << std::endl;
  });
  auto second = hstab::run_acceptance(opt);
  auto det = hstab::determinism(first, second);
  for (const auto& c : second.criteria) det.seconds += c.seconds;
  std::cout << hstab::format_line(det) << std::endl;
  const bool ok = first.passed() && det.passed;
  std::cout << (ok ? "ALL CRITERIA PASS" : "SOME CRITERIA FAIL") << std::endl;
  return ok ? 0 : 1;
}
