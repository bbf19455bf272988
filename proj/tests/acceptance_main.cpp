// Runs every acceptance criterion and prints one line per criterion. Exits 0
// when the set of failing criteria equals the known set below, so a change in
// either direction shows up as a test failure.

#include <iostream>
#include <set>

#include "finsler/acceptance.hpp"

int main() {
  const std::set<int> known_failures = {3, 5};
  std::set<int> failures;
  finsler::run_acceptance({}, [&failures](const finsler::CriterionResult& r) {
    std::cout << finsler::format_result(r) << std::endl;
    if (!r.pass) failures.insert(r.id);
  });
  if (failures != known_failures) {
    std::cout << "unexpected outcome: failing criteria differ from the known set {3, 5}" << std::endl;
    return 1;
  }
  std::cout << "outcome matches the known set (criteria 3 and 5 fail)" << std::endl;
  return 0;
}
