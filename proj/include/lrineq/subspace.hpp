#pragma once

// Subspaces of GF(p)^d in canonical RREF form, dimension-based information
// measures, canonical projections, and complementary-subspace constructions.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "lrineq/ffla.hpp"

namespace lrineq {

using SubsetMask = std::uint64_t;

class Subspace {
 public:
  using Scalar = FpMatrix::Scalar;

  static Subspace zero(PrimeModulus mod, std::size_t d) { return Subspace(FpMatrix(mod, 0, d)); }
  static Subspace full(PrimeModulus mod, std::size_t d) {
    return Subspace(FpMatrix::identity(mod, d));
  }

  static Subspace row_space(const FpMatrix& generators) {
    auto r = rref(generators);
    return Subspace(r.reduced.top_rows(r.rank));
  }

  static Subspace span(PrimeModulus mod, std::size_t d,
                       const std::vector<std::vector<std::int64_t>>& vectors) {
    return row_space(FpMatrix::from_rows(mod, d, vectors));
  }

  std::size_t dim() const { return basis_.rows(); }
  std::size_t ambient_dim() const { return basis_.cols(); }
  const PrimeModulus& modulus() const { return basis_.modulus(); }
  const FpMatrix& basis() const { return basis_; }
  bool is_zero() const { return dim() == 0; }

  bool same_ambient(const Subspace& o) const {
    return ambient_dim() == o.ambient_dim() && modulus() == o.modulus();
  }

  bool contains(std::span<const Scalar> v) const {
    if (v.size() != ambient_dim()) throw std::invalid_argument("vector outside ambient space");
    FpMatrix m = basis_;
    m.append_row(v);
    return rank(m) == dim();
  }

  bool contains(const Subspace& other) const {
    check_ambient(other);
    if (other.dim() > dim()) return false;
    FpMatrix parts[] = {basis_, other.basis_};
    return rank(FpMatrix::stack(parts, modulus(), ambient_dim())) == dim();
  }

  void check_ambient(const Subspace& o) const {
    if (!same_ambient(o)) throw std::invalid_argument("subspace ambient mismatch");
  }

  friend bool operator==(const Subspace&, const Subspace&) = default;

 private:
  explicit Subspace(FpMatrix basis) : basis_(std::move(basis)) {}
  FpMatrix basis_;
};

inline Subspace sum(const Subspace& a, const Subspace& b) {
  a.check_ambient(b);
  FpMatrix parts[] = {a.basis(), b.basis()};
  return Subspace::row_space(FpMatrix::stack(parts, a.modulus(), a.ambient_dim()));
}

inline Subspace sum(std::span<const Subspace> parts, PrimeModulus mod, std::size_t d) {
  std::vector<FpMatrix> bases;
  bases.reserve(parts.size());
  for (const auto& s : parts) {
    if (s.ambient_dim() != d || !(s.modulus() == mod)) {
      throw std::invalid_argument("subspace ambient mismatch");
    }
    bases.push_back(s.basis());
  }
  return Subspace::row_space(FpMatrix::stack(bases, mod, d));
}

// Zassenhaus: row-reduce [[a a]; [b 0]]; rows whose left half vanishes span
// a ∩ b in their right half.
inline Subspace intersect(const Subspace& a, const Subspace& b) {
  a.check_ambient(b);
  const auto d = a.ambient_dim();
  const auto& mod = a.modulus();
  FpMatrix z(mod, a.dim() + b.dim(), 2 * d);
  for (std::size_t i = 0; i < a.dim(); ++i) {
    auto r = z.row(i);
    for (std::size_t j = 0; j < d; ++j) r[j] = r[d + j] = a.basis()(i, j);
  }
  for (std::size_t i = 0; i < b.dim(); ++i) {
    auto r = z.row(a.dim() + i);
    for (std::size_t j = 0; j < d; ++j) r[j] = b.basis()(i, j);
  }
  auto red = rref(z);
  FpMatrix gens(mod, 0, d);
  for (std::size_t i = 0; i < red.rank; ++i) {
    if (red.pivot_columns[i] < d) continue;
    auto r = red.reduced.row(i);
    gens.append_row(r.subspan(d));
  }
  return Subspace::row_space(gens);
}

// codim_outer(inner) for inner ≤ outer.
inline std::size_t codim(const Subspace& outer, const Subspace& inner) {
  if (!outer.contains(inner)) throw std::invalid_argument("codim: inner is not contained in outer");
  return outer.dim() - inner.dim();
}

namespace detail {
// Greedily extend b by rows of `pool` (in order) until the span reaches target_dim.
inline Subspace extend_by_rows(const Subspace& b, const FpMatrix& pool, std::size_t target_dim) {
  const auto& mod = b.modulus();
  const auto d = b.ambient_dim();
  FpMatrix current = b.basis();
  FpMatrix added(mod, 0, d);
  std::size_t rk = b.dim();
  for (std::size_t i = 0; i < pool.rows() && rk < target_dim; ++i) {
    FpMatrix trial = current;
    trial.append_row(pool.row(i));
    if (rank(trial) > rk) {
      current = std::move(trial);
      added.append_row(pool.row(i));
      ++rk;
    }
  }
  return Subspace::row_space(added);
}
}  // namespace detail

// W with b ⊕ W = a. Built by extending b with the RREF basis rows of a in order.
inline Subspace complement_in(const Subspace& b, const Subspace& a) {
  if (!a.contains(b)) throw std::invalid_argument("complement_in: b is not a subspace of a");
  return detail::extend_by_rows(b, a.basis(), a.dim());
}

// W ≤ c with b ⊕ W = a, if one exists. Exists iff b + (a ∩ c) = a, which is
// the equality case codim_{a∩c}(b∩c) = codim_a(b).
inline std::optional<Subspace> complement_within(const Subspace& b, const Subspace& a,
                                                 const Subspace& c) {
  if (!a.contains(b)) throw std::invalid_argument("complement_within: b is not a subspace of a");
  a.check_ambient(c);
  auto ac = intersect(a, c);
  auto w = detail::extend_by_rows(b, ac.basis(), a.dim());
  if (b.dim() + w.dim() != a.dim()) return std::nullopt;
  return w;
}

// A decomposition ambient = parts[0] ⊕ ... ⊕ parts[k-1].
class DirectSumDecomposition {
 public:
  explicit DirectSumDecomposition(std::vector<Subspace> parts) : parts_(std::move(parts)) {
    if (parts_.empty()) throw std::invalid_argument("decomposition needs at least one part");
    const auto& mod = parts_.front().modulus();
    const auto d = parts_.front().ambient_dim();
    std::vector<FpMatrix> bases;
    std::size_t total = 0;
    for (const auto& p : parts_) {
      parts_.front().check_ambient(p);
      bases.push_back(p.basis());
      total += p.dim();
    }
    stacked_ = FpMatrix::stack(bases, mod, d);
    ambient_ = Subspace::row_space(stacked_);
    if (ambient_.dim() != total) throw std::invalid_argument("parts are not mutually complementary");
  }

  const std::vector<Subspace>& parts() const { return parts_; }
  const Subspace& ambient() const { return ambient_; }

  // Image of x under the projection onto ⊕_{i∈selected} parts_i along the others.
  Subspace project(const std::vector<std::size_t>& selected, const Subspace& x) const {
    if (!ambient_.contains(x)) throw std::invalid_argument("project: x is not inside the ambient");
    std::vector<bool> keep(parts_.size(), false);
    for (auto i : selected) {
      if (i >= parts_.size()) throw std::invalid_argument("project: part index out of range");
      keep[i] = true;
    }
    const auto& mod = ambient_.modulus();
    const auto d = ambient_.ambient_dim();
    if (x.is_zero()) return Subspace::zero(mod, d);
    // Coordinates: solve stacked^T · coeff = v^T for every basis vector v of x.
    auto coeffs = solve(stacked_.transpose(), x.basis().transpose());
    if (!coeffs) throw std::logic_error("project: coordinates not found");
    FpMatrix images(mod, x.dim(), d);
    std::size_t offset = 0;
    for (std::size_t part = 0; part < parts_.size(); ++part) {
      const auto& pb = parts_[part].basis();
      if (keep[part]) {
        for (std::size_t k = 0; k < x.dim(); ++k) {
          auto out = images.row(k);
          for (std::size_t r = 0; r < pb.rows(); ++r) {
            auto c = (*coeffs)(offset + r, k);
            if (c == 0) continue;
            for (std::size_t j = 0; j < d; ++j) out[j] = mod.add(out[j], mod.mul(c, pb(r, j)));
          }
        }
      }
      offset += pb.rows();
    }
    return Subspace::row_space(images);
  }

 private:
  std::vector<Subspace> parts_;
  FpMatrix stacked_{PrimeModulus(2), 0, 0};
  Subspace ambient_ = Subspace::zero(PrimeModulus(2), 0);
};

// Named subspaces sharing one ambient space. Measures take bitmasks over the
// variable order.
class SubspaceFamily {
 public:
  SubspaceFamily(std::vector<std::string> variables, std::vector<Subspace> members)
      : variables_(std::move(variables)), members_(std::move(members)) {
    if (variables_.size() != members_.size()) throw std::invalid_argument("family: size mismatch");
    if (variables_.size() > 63) throw std::invalid_argument("family: too many variables");
    if (members_.empty()) throw std::invalid_argument("family: no variables");
    for (const auto& m : members_) members_.front().check_ambient(m);
  }

  const std::vector<std::string>& variables() const { return variables_; }
  const std::vector<Subspace>& members() const { return members_; }
  const Subspace& at(std::size_t i) const { return members_.at(i); }
  const Subspace& at(const std::string& name) const { return members_[index_of(name)]; }
  std::size_t ambient_dim() const { return members_.front().ambient_dim(); }
  const PrimeModulus& modulus() const { return members_.front().modulus(); }

  std::size_t index_of(const std::string& name) const {
    for (std::size_t i = 0; i < variables_.size(); ++i)
      if (variables_[i] == name) return i;
    throw std::invalid_argument("unknown variable '" + name + "'");
  }

  SubsetMask mask_of(const std::vector<std::string>& names) const {
    SubsetMask m = 0;
    for (const auto& n : names) m |= SubsetMask{1} << index_of(n);
    return m;
  }

  Subspace span_of(SubsetMask mask) const {
    std::vector<FpMatrix> bases;
    for (std::size_t i = 0; i < members_.size(); ++i)
      if (mask >> i & 1) bases.push_back(members_[i].basis());
    if (mask >> members_.size()) throw std::invalid_argument("mask references unknown variable");
    return Subspace::row_space(FpMatrix::stack(bases, modulus(), ambient_dim()));
  }

  // H(X) = dim of the sum of the named subspaces; H(∅) = 0.
  std::size_t entropy(SubsetMask mask) const {
    if (mask == 0) return 0;
    std::vector<FpMatrix> bases;
    for (std::size_t i = 0; i < members_.size(); ++i)
      if (mask >> i & 1) bases.push_back(members_[i].basis());
    if (mask >> members_.size()) throw std::invalid_argument("mask references unknown variable");
    return rank(FpMatrix::stack(bases, modulus(), ambient_dim()));
  }
  std::size_t entropy(const std::vector<std::string>& names) const { return entropy(mask_of(names)); }

  std::size_t conditional_entropy(SubsetMask x, SubsetMask y) const {
    return entropy(x | y) - entropy(y);
  }
  std::size_t mutual_info(SubsetMask x, SubsetMask y) const {
    return entropy(x) + entropy(y) - entropy(x | y);
  }
  std::size_t cond_mutual_info(SubsetMask x, SubsetMask y, SubsetMask z) const {
    return entropy(x | z) + entropy(y | z) - entropy(x | y | z) - entropy(z);
  }

  std::size_t conditional_entropy(const std::vector<std::string>& x,
                                  const std::vector<std::string>& y) const {
    return conditional_entropy(mask_of(x), mask_of(y));
  }
  std::size_t mutual_info(const std::vector<std::string>& x, const std::vector<std::string>& y) const {
    return mutual_info(mask_of(x), mask_of(y));
  }
  std::size_t cond_mutual_info(const std::vector<std::string>& x, const std::vector<std::string>& y,
                               const std::vector<std::string>& z) const {
    return cond_mutual_info(mask_of(x), mask_of(y), mask_of(z));
  }

 private:
  std::vector<std::string> variables_;
  std::vector<Subspace> members_;
};

// Report for the complementary-subspace construction.
struct CodimReport {
  std::vector<std::size_t> a_codims;         // codim_{A_k}(A'_k)
  std::vector<std::size_t> a_intersections;  // I(A_[k-1]; A_k), with A_0 = 0
  std::size_t c_codim = 0;                   // codim_C(C̄)
  std::size_t c_bound = 0;                   // H(C|A_[n+1]) + Σ_i I(A_[n+1]-i; C)
  bool a_equalities_hold = false;
  bool c_bound_holds = false;
};

struct Construction {
  std::vector<Subspace> a_primes;
  Subspace c_bar;
  CodimReport report;
};

// From A_1..A_{n+1} and C, builds mutually complementary A'_1..A'_{n+1} with
// A'_k ≤ A_k spanning A_[n+1], and C̄ ≤ C ∩ A_[n+1] forming a direct sum with
// every A'_[n+1]-k.
inline Construction build_construction(const std::vector<Subspace>& a_parts, const Subspace& c) {
  if (a_parts.size() < 2) throw std::invalid_argument("build_construction: need at least two parts");
  const auto& mod = c.modulus();
  const auto d = c.ambient_dim();
  for (const auto& a : a_parts) c.check_ambient(a);
  const auto count = a_parts.size();

  CodimReport report;
  std::vector<Subspace> primes;
  auto prefix = Subspace::zero(mod, d);
  for (std::size_t k = 0; k < count; ++k) {
    auto next = sum(prefix, a_parts[k]);
    auto w = complement_within(prefix, next, a_parts[k]);
    if (!w) throw std::logic_error("build_construction: complement inside A_k not found");
    report.a_codims.push_back(a_parts[k].dim() - w->dim());
    report.a_intersections.push_back(intersect(prefix, a_parts[k]).dim());
    primes.push_back(std::move(*w));
    prefix = std::move(next);
  }
  const auto& a_all = prefix;

  auto sum_except = [&](const std::vector<Subspace>& parts, std::size_t skip) {
    std::vector<Subspace> keep;
    for (std::size_t i = 0; i < parts.size(); ++i)
      if (i != skip) keep.push_back(parts[i]);
    return sum(keep, mod, d);
  };

  auto current = intersect(c, a_all);
  for (std::size_t k = 0; k < count; ++k) {
    auto others = sum_except(primes, k);
    auto target = sum(current, others);
    auto w = complement_within(others, target, current);
    if (!w) throw std::logic_error("build_construction: complement inside C^(k-1) not found");
    current = std::move(*w);
  }

  report.c_codim = c.dim() - current.dim();
  std::size_t bound = sum(c, a_all).dim() - a_all.dim();
  for (std::size_t i = 0; i < count; ++i) bound += intersect(sum_except(a_parts, i), c).dim();
  report.c_bound = bound;
  report.a_equalities_hold = report.a_codims == report.a_intersections;
  report.c_bound_holds = report.c_codim <= report.c_bound;
  return {std::move(primes), std::move(current), std::move(report)};
}

// Dimension policy for random subspaces: uniform in [min_dim, max_dim]
// (clamped to the ambient dimension).
struct DimPolicy {
  std::size_t min_dim = 0;
  std::optional<std::size_t> max_dim;
};

// Row space of a uniformly random (dim × d) matrix; the result may have
// lower dimension than requested.
template <class Rng>
Subspace random_subspace(PrimeModulus mod, std::size_t d, Rng& rng, DimPolicy policy = {}) {
  auto hi = std::min(policy.max_dim.value_or(d), d);
  auto lo = std::min(policy.min_dim, hi);
  std::uniform_int_distribution<std::size_t> dim_dist(lo, hi);
  return Subspace::row_space(random_matrix(mod, dim_dist(rng), d, rng));
}

// Serialization: "ambient d" header followed by the basis in matrix text format.
inline std::string to_text(const Subspace& s) {
  return "ambient " + std::to_string(s.ambient_dim()) + "\n" + to_text(s.basis());
}

inline Subspace parse_subspace(const std::string& text) {
  std::istringstream in(text);
  std::string tag;
  std::size_t d = 0;
  if (!(in >> tag >> d) || tag != "ambient") throw std::invalid_argument("subspace text: bad header");
  auto m = read_matrix(in);
  if (m.cols() != d) throw std::invalid_argument("subspace text: basis width differs from ambient");
  return Subspace::row_space(m);
}

}  // namespace lrineq
