// Evaluates both inequalities on the L_n subspace family over a few small
// fields and prints the terms that do not vanish.
#include <iostream>

#include "lrineq/lrineq.hpp"

using namespace lrineq;

namespace {

void show(const char* label, const TermList& terms, int n, std::uint64_t p) {
  auto family = ln_family(n, p);
  std::cout << label << " over GF(" << p << "), n = " << n << ": " << evaluate_terms(terms, family) << "\n";
  for (const auto& t : terms.terms) {
    TermList one{terms.variables, {{1, t.measure}}};
    auto v = evaluate_terms(one, family);
    if (v != 0) std::cout << "    " << t.coeff << " * " << measure_to_text(t.measure, terms.variables)
                          << " = " << t.coeff << " * " << v << "\n";
  }
}

}  // namespace

int main() {
  for (int n : {2, 3}) {
    for (std::uint64_t p : {2u, 3u, 5u}) {
      show("div   ", thm_div_terms(n), n, p);
      show("nondiv", thm_nondiv_terms(n), n, p);
    }
  }
}
