// Builds the matroid code for N_A(2) over GF(2), checks it on every message,
// and compares its entropy point with the LP bound.
#include <iostream>

#include "lrineq/lrineq.hpp"

using namespace lrineq;

int main() {
  auto netw = network_A(2);
  auto code = solution_from_representation(VectorMatroid::from_ln(2, 2), netw);
  std::cout << "sources " << netw.size() << ", demands " << netw.demands().size() << ", r_cl " << r_cl(netw)
            << "\n";
  std::cout << "encoder (" << code.broadcast_length() << " x " << code.encoder().cols() << "):\n"
            << to_text(code.encoder());

  auto verdict = simulate(code, netw);
  std::cout << "simulation: " << (verdict.passed() ? "pass" : "FAIL") << " on " << verdict.tuples_checked
            << " tuples\n";

  auto point = entropy_point(code);
  std::cout << "entropy point: z{} = " << point[0] << ", z{S} = " << point.back() << "\n";

  auto result = bound(netw);
  std::cout << "LP bound b = " << result.b << " (" << result.solution.pivots << " pivots)\n";

  auto ext = retarget(extend_with_message(solution_from_representation(VectorMatroid::from_ln(2, 3), network_B(2)),
                                          network_B(2), "C"),
                      netw);
  std::cout << "GF(3) code with C sent uncoded: broadcast " << ext.broadcast_length() << ", "
            << (simulate(ext, netw).passed() ? "pass" : "FAIL") << "\n";
}
