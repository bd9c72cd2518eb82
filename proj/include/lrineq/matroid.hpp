#pragma once

// Vector matroids over GF(p), circuit enumeration, and the circuit classes
// A_n / B_n of M(L_n).

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "lrineq/ffla.hpp"
#include "lrineq/ineq.hpp"

namespace lrineq {

inline constexpr std::size_t kDefaultCircuitCap = 20;

// (n+1)×(2n+3) matrix with columns A_i = e_i, B_k = 1 − e_k, C = 1.
inline FpMatrix ln_matrix(int n, std::uint64_t p) {
  detail::check_n(n);
  PrimeModulus mod(p);
  const auto rows = static_cast<std::size_t>(n + 1);
  FpMatrix m(mod, rows, 2 * rows + 1);
  for (std::size_t r = 0; r < rows; ++r) {
    m.set(r, r, 1);
    for (std::size_t k = 0; k < rows; ++k) m.set(r, rows + k, r == k ? 0 : 1);
    m.set(r, 2 * rows, 1);
  }
  return m;
}

class VectorMatroid {
 public:
  VectorMatroid(std::vector<std::string> labels, FpMatrix matrix)
      : labels_(std::move(labels)), matrix_(std::move(matrix)) {
    if (labels_.size() != matrix_.cols()) throw std::invalid_argument("matroid: one label per column");
    if (labels_.size() > 63) throw std::invalid_argument("matroid: ground set too large");
  }

  static VectorMatroid from_ln(int n, std::uint64_t p) {
    return VectorMatroid(ln_variables(n), ln_matrix(n, p));
  }

  const std::vector<std::string>& labels() const { return labels_; }
  const FpMatrix& matrix() const { return matrix_; }
  const PrimeModulus& modulus() const { return matrix_.modulus(); }
  std::size_t size() const { return labels_.size(); }
  SubsetMask ground() const { return size() == 64 ? ~SubsetMask{0} : (SubsetMask{1} << size()) - 1; }

  std::size_t index_of(const std::string& label) const {
    auto it = std::find(labels_.begin(), labels_.end(), label);
    if (it == labels_.end()) throw std::invalid_argument("unknown label '" + label + "'");
    return static_cast<std::size_t>(it - labels_.begin());
  }

  SubsetMask mask_of(const std::vector<std::string>& names) const {
    SubsetMask m = 0;
    for (const auto& n : names) m |= SubsetMask{1} << index_of(n);
    return m;
  }

  std::vector<std::string> names_of(SubsetMask m) const {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < size(); ++i)
      if (m >> i & 1) out.push_back(labels_[i]);
    return out;
  }

  std::size_t rank(SubsetMask subset) const {
    if (subset & ~ground()) throw std::invalid_argument("subset outside the ground set");
    if (subset == 0) return 0;
    std::vector<std::size_t> cols;
    for (std::size_t i = 0; i < size(); ++i)
      if (subset >> i & 1) cols.push_back(i);
    return lrineq::rank(matrix_.select_columns(cols));
  }
  std::size_t rank(const std::vector<std::string>& names) const { return rank(mask_of(names)); }
  std::size_t rank() const { return lrineq::rank(matrix_); }

  bool independent(SubsetMask s) const { return rank(s) == static_cast<std::size_t>(std::popcount(s)); }

  VectorMatroid delete_elements(SubsetMask removed) const {
    if (removed & ~ground()) throw std::invalid_argument("delete: unknown element");
    std::vector<std::size_t> keep;
    std::vector<std::string> names;
    for (std::size_t i = 0; i < size(); ++i) {
      if (removed >> i & 1) continue;
      keep.push_back(i);
      names.push_back(labels_[i]);
    }
    return VectorMatroid(std::move(names), matrix_.select_columns(keep));
  }
  VectorMatroid delete_elements(const std::vector<std::string>& names) const {
    return delete_elements(mask_of(names));
  }

 private:
  std::vector<std::string> labels_;
  FpMatrix matrix_;
};

// A set of label subsets (bitmasks over `labels`), kept sorted by (size, mask).
struct CircuitSet {
  std::vector<std::string> labels;
  std::vector<SubsetMask> circuits;

  bool contains(SubsetMask c) const {
    return std::find(circuits.begin(), circuits.end(), c) != circuits.end();
  }
  bool includes(const CircuitSet& other) const {
    return std::all_of(other.circuits.begin(), other.circuits.end(),
                       [&](SubsetMask c) { return contains(c); });
  }
  void normalize() {
    std::sort(circuits.begin(), circuits.end(), [](SubsetMask a, SubsetMask b) {
      auto pa = std::popcount(a), pb = std::popcount(b);
      return pa != pb ? pa < pb : a < b;
    });
    circuits.erase(std::unique(circuits.begin(), circuits.end()), circuits.end());
  }
};

// All minimal dependent sets, by increasing size; a dependent set containing
// an already found circuit is skipped.
inline CircuitSet circuits(const VectorMatroid& m, std::size_t cap = kDefaultCircuitCap) {
  if (m.size() > cap) {
    throw std::invalid_argument("ground set of " + std::to_string(m.size()) +
                                " elements exceeds the enumeration cap " + std::to_string(cap));
  }
  std::vector<std::vector<SubsetMask>> by_size(m.size() + 1);
  for (SubsetMask s = 1; s <= m.ground() && s != 0; ++s) by_size[std::popcount(s)].push_back(s);
  CircuitSet out{m.labels(), {}};
  for (const auto& layer : by_size) {
    for (auto s : layer) {
      bool has_circuit = std::any_of(out.circuits.begin(), out.circuits.end(),
                                     [s](SubsetMask c) { return (c & s) == c; });
      if (!has_circuit && !m.independent(s)) out.circuits.push_back(s);
    }
  }
  out.normalize();
  return out;
}

// Elements lying in no circuit.
inline SubsetMask coloops(const VectorMatroid& m, std::size_t cap = kDefaultCircuitCap) {
  SubsetMask covered = 0;
  for (auto c : circuits(m, cap).circuits) covered |= c;
  return m.ground() & ~covered;
}

namespace detail {
inline CircuitSet ln_class(int n, bool b_with_c) {
  check_n(n);
  LnMasks k{n};
  CircuitSet s{ln_variables(n), {}};
  s.circuits.push_back(k.a_all() | k.c());
  for (int i = 1; i <= n + 1; ++i) {
    s.circuits.push_back(k.a_except(i) | k.b(i));
    s.circuits.push_back(k.a(i) | k.b(i) | k.c());
  }
  s.circuits.push_back(b_with_c ? k.b_all() | k.c() : k.b_all());
  s.normalize();
  return s;
}
}  // namespace detail

// {A_[n+1]C, A_[n+1]-i B_i, A_i B_i C, B_[n+1]}: circuits of M(L_n) when char | n.
inline CircuitSet class_A(int n) { return detail::ln_class(n, false); }
// Same with B_[n+1]C in place of B_[n+1]: circuits when char ∤ n.
inline CircuitSet class_B(int n) { return detail::ln_class(n, true); }

struct ClassCheck {
  std::uint32_t prime = 0;
  bool divides = false;
  std::size_t rank = 0;
  std::size_t circuit_count = 0;
  bool class_A_ok = false;
  bool class_B_ok = false;
  CircuitSet found;

  // The inclusion predicted by divisibility holds.
  bool expected_ok() const { return divides ? class_A_ok : class_B_ok; }
};

inline std::vector<ClassCheck> verify_classes(int n, const std::vector<std::uint64_t>& primes,
                                              std::size_t cap = kDefaultCircuitCap) {
  auto a = class_A(n);
  auto b = class_B(n);
  std::vector<ClassCheck> out;
  for (auto p : primes) {
    auto m = VectorMatroid::from_ln(n, p);
    ClassCheck chk;
    chk.prime = m.modulus().value();
    chk.divides = m.modulus().divides(static_cast<std::uint64_t>(n));
    chk.rank = m.rank();
    chk.found = circuits(m, cap);
    chk.circuit_count = chk.found.circuits.size();
    chk.class_A_ok = chk.found.includes(a);
    chk.class_B_ok = chk.found.includes(b);
    out.push_back(std::move(chk));
  }
  return out;
}

// Primes whose matroids M(L_n, p) cover every matroid arising over the
// characteristic class (dividing n, or not dividing n). A square minor of the
// 0/1 matrix L_n is bounded by the Hadamard bound h = (n+2)^{(n+2)/2} / 2^{n+1},
// so all primes above h give the rational matroid; one of them represents the rest.
inline std::vector<std::uint64_t> class_primes(int n, bool divides) {
  detail::check_n(n);
  std::vector<std::uint64_t> out;
  const auto un = static_cast<std::uint64_t>(n);
  if (divides) {
    for (std::uint64_t p = 2; p <= un; ++p)
      if (is_prime(p) && un % p == 0) out.push_back(p);
    return out;
  }
  // (n+2)^{n+2} / 4^{n+1} bounds h^2.
  long double h2 = 1;
  for (int i = 0; i < n + 2; ++i) h2 *= static_cast<long double>(n + 2);
  for (int i = 0; i < n + 1; ++i) h2 /= 4;
  std::uint64_t p = 2;
  for (;; ++p) {
    if (!is_prime(p) || un % p == 0) continue;
    out.push_back(p);
    if (static_cast<long double>(p) * p > h2) break;
  }
  return out;
}

// Y dependent (resp. independent) in M(L_n, p) for every p in `primes`; the
// rank used for dependent sets is the maximum over the class.
struct ClassRankOracle {
  std::vector<VectorMatroid> matroids;

  ClassRankOracle(int n, const std::vector<std::uint64_t>& primes) {
    for (auto p : primes) matroids.push_back(VectorMatroid::from_ln(n, p));
    if (matroids.empty()) throw std::invalid_argument("empty characteristic class");
  }

  bool dependent_in_all(SubsetMask y) const {
    return std::all_of(matroids.begin(), matroids.end(), [&](const auto& m) { return !m.independent(y); });
  }
  bool independent_in_all(SubsetMask y) const {
    return std::all_of(matroids.begin(), matroids.end(), [&](const auto& m) { return m.independent(y); });
  }
  std::size_t max_rank(SubsetMask y) const {
    std::size_t r = 0;
    for (const auto& m : matroids) r = std::max(r, m.rank(y));
    return r;
  }
};

}  // namespace lrineq
