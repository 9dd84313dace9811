// A short walk through the library: ranks, a combinator, a satisfying-count
// extraction, and a diagonal run.

#include <iostream>

#include "rankkit/rankkit.hpp"

using namespace rankkit;
using namespace rankkit::literals;

int main() {
  std::cout << "rank of 0110 in Sigma*: " << rank_sigma_star("0110"_b) << "\n";
  std::cout << "shift(eps, 4) = " << shift(BStr{}, 4).str() << "\n";

  auto joined = evaluate("join(ends_in_1,even_length)");
  std::cout << joined.set.name << " ranks 0110 at " << *rank_value(*joined.set.ranker, "0110"_b)
            << "\n" << verify_strong(joined.set, 9).to_table();

  auto f = parse_formula("x0 | !x1");
  auto beacons = beacon_sets();
  std::cout << f.str() << " has " << extract_sat_count_A(*beacons.A.ranker, encode_formula(f))
            << " satisfying assignments (read from beacon ranks)\n";

  auto trace = diag_run(DiagMode::union_, catalog::shipped(), 256, 9);
  for (const auto& s : trace.stages)
    std::cout << "stage " << s.i << " " << s.phi << ": case " << s.case_taken << ", "
              << to_string(s.witness.kind) << "\n";
  std::cout << "diagonal trace verifies: " << std::boolalpha
            << diag_verify(trace, catalog::shipped()).clean() << "\n";
}
