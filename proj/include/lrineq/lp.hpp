#pragma once

// Exact rational LPs over subset-indexed variables z_Y and the bounds
// b(N) = min z_∅ for index coding networks.

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "lrineq/ineq.hpp"
#include "lrineq/matroid.hpp"
#include "lrineq/netcode.hpp"
#include "lrineq/rational.hpp"

namespace lrineq {

inline constexpr std::size_t kDefaultSourceCap = 10;

enum class Relation { LessEq, GreaterEq, Equal };

struct LinearRow {
  std::vector<std::pair<std::size_t, Rational>> coeffs;  // sorted by variable, no zeros
  Relation relation = Relation::GreaterEq;
  Rational rhs;
  std::string tag;
  bool asserted = false;  // side constraint taken as given, not derived here

  bool operator==(const LinearRow&) const = default;
};

// Builds a row from (variable, coefficient) pairs, merging repeats.
inline LinearRow make_row(const std::vector<std::pair<std::size_t, Rational>>& terms, Relation rel, Rational rhs,
                          std::string tag = {}) {
  std::map<std::size_t, Rational> acc;
  for (const auto& [v, c] : terms) acc[v] += c;
  LinearRow row{{}, rel, std::move(rhs), std::move(tag), false};
  for (auto& [v, c] : acc)
    if (c != 0) row.coeffs.emplace_back(v, c);
  return row;
}

inline Rational evaluate_row(const LinearRow& row, const std::vector<Rational>& x) {
  Rational s = 0;
  for (const auto& [v, c] : row.coeffs) s += c * x.at(v);
  return s;
}

inline bool row_satisfied(const LinearRow& row, const std::vector<Rational>& x) {
  auto lhs = evaluate_row(row, x);
  switch (row.relation) {
    case Relation::LessEq: return lhs <= row.rhs;
    case Relation::GreaterEq: return lhs >= row.rhs;
    case Relation::Equal: return lhs == row.rhs;
  }
  return false;
}

// Minimize objective·x subject to rows and x ≥ 0. Subset problems have one
// variable z_Y per Y ⊆ S (index = bitmask) and objective z_∅.
class LPProblem {
 public:
  static LPProblem over_subsets(std::vector<std::string> sources, std::size_t cap = kDefaultSourceCap) {
    if (sources.size() > cap) {
      throw std::invalid_argument(std::to_string(sources.size()) + " sources exceed the LP cap of " +
                                  std::to_string(cap));
    }
    LPProblem lp;
    lp.variable_count_ = std::size_t{1} << sources.size();
    lp.sources_ = std::move(sources);
    lp.objective_ = {{0, Rational(1)}};
    return lp;
  }

  static LPProblem generic(std::vector<std::string> names, std::vector<std::pair<std::size_t, Rational>> objective) {
    LPProblem lp;
    lp.variable_count_ = names.size();
    lp.names_ = std::move(names);
    lp.objective_ = std::move(objective);
    for (const auto& [v, c] : lp.objective_)
      if (v >= lp.variable_count_) throw std::invalid_argument("objective references an undeclared variable");
    return lp;
  }

  bool subset_indexed() const { return names_.empty(); }
  const std::vector<std::string>& sources() const { return sources_; }
  std::size_t variable_count() const { return variable_count_; }
  const std::vector<LinearRow>& rows() const { return rows_; }
  const std::vector<std::pair<std::size_t, Rational>>& objective() const { return objective_; }

  std::string variable_name(std::size_t v) const {
    if (!subset_indexed()) return names_.at(v);
    std::string s = "z{";
    bool first = true;
    for (std::size_t i = 0; i < sources_.size(); ++i) {
      if (!(v >> i & 1)) continue;
      if (!first) s += ",";
      s += sources_[i];
      first = false;
    }
    return s + "}";
  }

  void add(LinearRow row) {
    for (const auto& [v, c] : row.coeffs)
      if (v >= variable_count_) throw std::invalid_argument("row references an undeclared variable");
    rows_.push_back(std::move(row));
  }
  void add(std::vector<LinearRow> rows) {
    for (auto& r : rows) add(std::move(r));
  }

 private:
  std::vector<std::string> sources_;
  std::vector<std::string> names_;
  std::size_t variable_count_ = 0;
  std::vector<std::pair<std::size_t, Rational>> objective_;
  std::vector<LinearRow> rows_;
};

enum class LPStatus { Optimal, Unbounded, Infeasible };

inline const char* to_string(LPStatus s) {
  switch (s) {
    case LPStatus::Optimal: return "optimal";
    case LPStatus::Unbounded: return "unbounded";
    case LPStatus::Infeasible: return "infeasible";
  }
  return "?";
}

struct LPSolution {
  LPStatus status = LPStatus::Infeasible;
  Rational optimum;
  std::vector<Rational> assignment;  // primal x
  std::vector<Rational> duals;       // one multiplier per row, sign as in the row's relation
  std::size_t pivots = 0;
};

namespace detail {

struct NormalizedRow {
  std::size_t source;  // index into the problem's rows
  Rational sign;       // +1 or −1 applied to reach "≥"
  bool equality;
};

enum class DualOutcome { Optimal, Unbounded, Infeasible };

struct DualResult {
  DualOutcome outcome = DualOutcome::Infeasible;
  std::vector<Rational> primal;
  std::vector<Rational> row_duals;
  Rational value;
  std::size_t pivots = 0;
};

using SparseColumn = std::vector<std::pair<std::size_t, Rational>>;

// Revised simplex for max profit·u s.t. M u = rhs, u ≥ 0, rhs ≥ 0, keeping an
// explicit dense basis inverse. Columns are sparse.
class RevisedSimplex {
 public:
  RevisedSimplex(std::vector<SparseColumn> columns, std::vector<Rational> rhs, std::vector<std::size_t> basis)
      : cols_(std::move(columns)), xb_(std::move(rhs)), basis_(std::move(basis)) {
    const auto m = xb_.size();
    binv_.assign(m, std::vector<Rational>(m));
    for (std::size_t i = 0; i < m; ++i) binv_[i][i] = 1;  // initial basis columns are unit vectors
  }

  std::size_t rows() const { return xb_.size(); }
  const std::vector<std::size_t>& basis() const { return basis_; }
  const std::vector<Rational>& basic_values() const { return xb_; }
  const std::vector<Rational>& prices() const { return pi_; }
  const Rational& value() const { return value_; }

  void set_profit(std::vector<Rational> profit) {
    profit_ = std::move(profit);
    const auto m = rows();
    pi_.assign(m, Rational(0));
    value_ = 0;
    for (std::size_t r = 0; r < m; ++r) {
      const auto& pb = profit_[basis_[r]];
      if (sgn(pb) == 0) continue;
      value_ += pb * xb_[r];
      for (std::size_t j = 0; j < m; ++j)
        if (sgn(binv_[r][j]) != 0) pi_[j] += pb * binv_[r][j];
    }
  }

  Rational reduced_profit(std::size_t c) const {
    Rational rc = profit_[c];
    for (const auto& [i, v] : cols_[c]) rc -= pi_[i] * v;
    return rc;
  }

  // Entry of B^{-1} a_c in row r.
  Rational entry(std::size_t r, std::size_t c) const {
    Rational s = 0;
    for (const auto& [i, v] : cols_[c]) s += binv_[r][i] * v;
    return s;
  }

  enum class Outcome { Optimal, Unbounded };

  // Bland's rule: lowest-index improving column; ties in the ratio test go to
  // the lowest-index basic variable.
  Outcome run(std::size_t usable_cols, std::size_t& pivots) {
    const auto m = rows();
    std::vector<Rational> d(m);
    Rational ratio, best, rc;
    for (;;) {
      std::size_t e = usable_cols;
      for (std::size_t c = 0; c < usable_cols; ++c) {
        rc = reduced_profit(c);
        if (sgn(rc) > 0) {
          e = c;
          break;
        }
      }
      if (e == usable_cols) return Outcome::Optimal;
      for (std::size_t r = 0; r < m; ++r) d[r] = entry(r, e);
      std::optional<std::size_t> leave;
      for (std::size_t r = 0; r < m; ++r) {
        if (sgn(d[r]) <= 0) continue;
        ratio = xb_[r] / d[r];
        if (!leave || ratio < best || (ratio == best && basis_[r] < basis_[*leave])) {
          leave = r;
          best = ratio;
        }
      }
      if (!leave) return Outcome::Unbounded;
      pivot(*leave, e, d, rc);
      ++pivots;
    }
  }

  // Makes column e basic in row r; d = B^{-1} a_e, rc = its reduced profit.
  void pivot(std::size_t r, std::size_t e, const std::vector<Rational>& d, const Rational& rc) {
    const auto m = rows();
    auto& pr = binv_[r];
    const Rational inv = 1 / d[r];
    std::vector<std::size_t> nz;
    for (std::size_t j = 0; j < m; ++j) {
      if (sgn(pr[j]) == 0) continue;
      pr[j] *= inv;
      nz.push_back(j);
    }
    xb_[r] *= inv;
    Rational tmp;
    for (std::size_t i = 0; i < m; ++i) {
      if (i == r || sgn(d[i]) == 0) continue;
      auto& row = binv_[i];
      for (auto j : nz) {
        mpq_mul(tmp.get_mpq_t(), d[i].get_mpq_t(), pr[j].get_mpq_t());
        mpq_sub(row[j].get_mpq_t(), row[j].get_mpq_t(), tmp.get_mpq_t());
      }
      mpq_mul(tmp.get_mpq_t(), d[i].get_mpq_t(), xb_[r].get_mpq_t());
      mpq_sub(xb_[i].get_mpq_t(), xb_[i].get_mpq_t(), tmp.get_mpq_t());
    }
    if (!pi_.empty()) {
      for (auto j : nz) pi_[j] += rc * pr[j];
      value_ += rc * xb_[r];
    }
    basis_[r] = e;
  }

 private:
  std::vector<SparseColumn> cols_;
  std::vector<Rational> xb_;
  std::vector<std::size_t> basis_;
  std::vector<std::vector<Rational>> binv_;
  std::vector<Rational> profit_;
  std::vector<Rational> pi_;
  Rational value_;
};

// Solves max b·y s.t. Aᵀy ≤ c over the normalized rows (y ≥ 0 for "≥" rows,
// free for equalities). The primal x is read off the slack reduced costs.
inline DualResult solve_dual(const LPProblem& lp, const std::vector<NormalizedRow>& rows,
                             const std::vector<Rational>& cost) {
  const auto nvar = lp.variable_count();
  struct DualColumn {
    std::size_t row;
    Rational sign;
  };
  std::vector<DualColumn> dual;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    dual.push_back({i, rows[i].sign});
    if (rows[i].equality) dual.push_back({i, -rows[i].sign});
  }
  const auto ndual = dual.size();
  // Constraint j is multiplied by flip[j] so that its right-hand side is ≥ 0;
  // flipped constraints start from an artificial column instead of the slack.
  std::vector<int> flip(nvar, 1);
  std::vector<std::size_t> artificial_rows;
  for (std::size_t j = 0; j < nvar; ++j) {
    if (sgn(cost[j]) < 0) {
      flip[j] = -1;
      artificial_rows.push_back(j);
    }
  }
  const auto slack0 = ndual, art0 = ndual + nvar;
  std::vector<SparseColumn> cols;
  cols.reserve(art0 + artificial_rows.size());
  std::vector<Rational> profit(art0 + artificial_rows.size());
  for (std::size_t d = 0; d < ndual; ++d) {
    const auto& row = lp.rows()[rows[dual[d].row].source];
    SparseColumn col;
    for (const auto& [v, c] : row.coeffs) col.emplace_back(v, dual[d].sign * c * flip[v]);
    cols.push_back(std::move(col));
    profit[d] = dual[d].sign * row.rhs;
  }
  for (std::size_t j = 0; j < nvar; ++j) cols.push_back({{j, Rational(flip[j])}});
  std::vector<std::size_t> basis(nvar);
  std::vector<Rational> rhs(nvar);
  for (std::size_t j = 0; j < nvar; ++j) {
    basis[j] = slack0 + j;
    rhs[j] = cost[j] * flip[j];
  }
  for (std::size_t a = 0; a < artificial_rows.size(); ++a) {
    cols.push_back({{artificial_rows[a], Rational(1)}});
    basis[artificial_rows[a]] = art0 + a;
  }

  DualResult res;
  RevisedSimplex sx(std::move(cols), std::move(rhs), std::move(basis));
  if (!artificial_rows.empty()) {
    std::vector<Rational> phase1(profit.size());
    for (std::size_t a = 0; a < artificial_rows.size(); ++a) phase1[art0 + a] = -1;
    sx.set_profit(phase1);
    sx.run(art0, res.pivots);
    if (sgn(sx.value()) < 0) {
      res.outcome = DualOutcome::Infeasible;
      return res;
    }
    // Artificials left in the basis sit at zero; pivot them out where possible.
    // Rows where no real column has a nonzero entry are redundant and keep
    // their artificial at zero for good.
    for (std::size_t r = 0; r < sx.rows(); ++r) {
      if (sx.basis()[r] < art0) continue;
      for (std::size_t c = 0; c < art0; ++c) {
        auto v = sx.entry(r, c);
        if (sgn(v) == 0) continue;
        std::vector<Rational> d(sx.rows());
        for (std::size_t i = 0; i < sx.rows(); ++i) d[i] = sx.entry(i, c);
        sx.pivot(r, c, d, sx.reduced_profit(c));
        ++res.pivots;
        break;
      }
    }
  }
  sx.set_profit(profit);
  if (sx.run(art0, res.pivots) == RevisedSimplex::Outcome::Unbounded) {
    res.outcome = DualOutcome::Unbounded;
    return res;
  }
  res.outcome = DualOutcome::Optimal;
  res.value = sx.value();
  // Reduced profit of slack j is −π_j·flip_j; the primal value is its negation.
  res.primal.resize(nvar);
  for (std::size_t j = 0; j < nvar; ++j) res.primal[j] = sx.prices()[j] * flip[j];
  std::vector<Rational> y(ndual);
  for (std::size_t r = 0; r < sx.rows(); ++r)
    if (sx.basis()[r] < ndual) y[sx.basis()[r]] = sx.basic_values()[r];
  res.row_duals.assign(rows.size(), Rational(0));
  for (std::size_t d = 0; d < ndual; ++d) {
    if (sgn(y[d]) == 0) continue;
    // Multiplier on the normalized "≥" row, then back to the original relation.
    const auto& nr = rows[dual[d].row];
    res.row_duals[dual[d].row] += (dual[d].sign == nr.sign ? y[d] : -y[d]) * nr.sign;
  }
  return res;
}

}  // namespace detail

// Exact optimum via revised simplex on the dual with Bland's rule. An optimal
// answer is returned only after the primal point, the dual multipliers and the
// equality of objectives have been re-checked in exact arithmetic.
inline LPSolution solve_min(const LPProblem& lp) {
  LPSolution sol;
  std::vector<detail::NormalizedRow> rows;
  for (std::size_t i = 0; i < lp.rows().size(); ++i) {
    const auto& row = lp.rows()[i];
    if (row.coeffs.empty()) {
      bool ok = row.relation == Relation::LessEq      ? row.rhs >= 0
                : row.relation == Relation::GreaterEq ? row.rhs <= 0
                                                      : row.rhs == 0;
      if (!ok) return sol;
      continue;
    }
    rows.push_back({i, Rational(row.relation == Relation::LessEq ? -1 : 1), row.relation == Relation::Equal});
  }
  std::vector<Rational> cost(lp.variable_count());
  for (const auto& [v, c] : lp.objective()) cost[v] += c;

  auto res = detail::solve_dual(lp, rows, cost);
  sol.pivots = res.pivots;
  if (res.outcome == detail::DualOutcome::Unbounded) {
    sol.status = LPStatus::Infeasible;
    return sol;
  }
  if (res.outcome == detail::DualOutcome::Infeasible) {
    // Primal is unbounded when feasible; a zero objective decides feasibility.
    auto feas = detail::solve_dual(lp, rows, std::vector<Rational>(lp.variable_count()));
    sol.pivots += feas.pivots;
    sol.status = feas.outcome == detail::DualOutcome::Optimal ? LPStatus::Unbounded : LPStatus::Infeasible;
    return sol;
  }

  sol.assignment = std::move(res.primal);
  for (const auto& x : sol.assignment)
    if (sgn(x) < 0) throw std::logic_error("simplex certificate: negative primal value");
  for (const auto& row : lp.rows())
    if (!row_satisfied(row, sol.assignment)) throw std::logic_error("simplex certificate: primal row violated");
  sol.duals.assign(lp.rows().size(), Rational(0));
  for (std::size_t i = 0; i < rows.size(); ++i) sol.duals[rows[i].source] = res.row_duals[i];
  std::vector<Rational> reduced = cost;
  Rational dual_value = 0;
  for (std::size_t i = 0; i < lp.rows().size(); ++i) {
    const auto& y = sol.duals[i];
    if (sgn(y) == 0) continue;
    const auto& row = lp.rows()[i];
    if ((row.relation == Relation::GreaterEq && sgn(y) < 0) || (row.relation == Relation::LessEq && sgn(y) > 0)) {
      throw std::logic_error("simplex certificate: dual multiplier of the wrong sign");
    }
    for (const auto& [v, c] : row.coeffs) reduced[v] -= y * c;
    dual_value += y * row.rhs;
  }
  for (const auto& r : reduced)
    if (sgn(r) < 0) throw std::logic_error("simplex certificate: negative reduced cost");
  Rational primal_value = 0;
  for (const auto& [v, c] : lp.objective()) primal_value += c * sol.assignment[v];
  if (primal_value != dual_value || primal_value != res.value) {
    throw std::logic_error("simplex certificate: duality gap");
  }
  sol.status = LPStatus::Optimal;
  sol.optimum = primal_value;
  return sol;
}

// Elemental Shannon rows: monotonicity z_{Y+i} − z_Y ≥ 0 and submodularity
// z_{Y+i} + z_{Y+j} − z_{Y+ij} − z_Y ≥ 0, for i, j ∉ Y.
inline std::vector<LinearRow> shannon_constraints(std::size_t sources, std::size_t cap = kDefaultSourceCap) {
  if (sources > cap) throw std::invalid_argument("shannon_constraints: source cap exceeded");
  std::vector<LinearRow> rows;
  const SubsetMask all = (SubsetMask{1} << sources) - 1;
  for (std::size_t i = 0; i < sources; ++i) {
    const SubsetMask bi = SubsetMask{1} << i;
    for (SubsetMask y = 0; y <= all; ++y) {
      if (y & bi) continue;
      rows.push_back(make_row({{y | bi, 1}, {y, -1}}, Relation::GreaterEq, 0, "monotone"));
    }
  }
  for (std::size_t i = 0; i < sources; ++i) {
    for (std::size_t j = i + 1; j < sources; ++j) {
      const SubsetMask bi = SubsetMask{1} << i, bj = SubsetMask{1} << j;
      for (SubsetMask y = 0; y <= all; ++y) {
        if (y & (bi | bj)) continue;
        rows.push_back(make_row({{y | bi, 1}, {y | bj, 1}, {y | bi | bj, -1}, {y, -1}}, Relation::GreaterEq, 0,
                                "submodular"));
      }
    }
  }
  return rows;
}

// z_S = |S| and z_Y − z_Z ≤ |Y − cl(Z)| for every Z ⊆ Y (one-step closure).
inline std::vector<LinearRow> flow_constraints(const IndexCodingNetwork& netw, std::size_t cap = kDefaultSourceCap) {
  if (netw.size() > cap) throw std::invalid_argument("flow_constraints: source cap exceeded");
  const auto all = netw.all_mask();
  std::vector<SubsetMask> cl(all + 1);
  for (SubsetMask z = 0; z <= all; ++z) cl[z] = closure(netw, z);
  std::vector<LinearRow> rows;
  rows.push_back(make_row({{all, 1}}, Relation::Equal, static_cast<long>(netw.size()), "total"));
  for (SubsetMask y = 0;; ++y) {
    for (SubsetMask z = y;; z = (z - 1) & y) {
      auto free_part = static_cast<long>(std::popcount(y & ~cl[z]));
      rows.push_back(make_row({{y, 1}, {z, -1}}, Relation::LessEq, free_part, "flow"));
      if (z == 0) break;
    }
    if (y == all) break;
  }
  return rows;
}

// Same polyhedron as flow_constraints from the rows with |Y − Z| = 1: by
// monotonicity of cl the single-element steps along any chain from Z to Y add
// up to at most |Y − cl(Z)|.
inline std::vector<LinearRow> compact_flow_constraints(const IndexCodingNetwork& netw,
                                                       std::size_t cap = kDefaultSourceCap) {
  if (netw.size() > cap) throw std::invalid_argument("flow_constraints: source cap exceeded");
  const auto all = netw.all_mask();
  std::vector<LinearRow> rows;
  rows.push_back(make_row({{all, 1}}, Relation::Equal, static_cast<long>(netw.size()), "total"));
  for (SubsetMask z = 0; z <= all; ++z) {
    const auto cl = closure(netw, z);
    for (std::size_t i = 0; i < netw.size(); ++i) {
      const SubsetMask bi = SubsetMask{1} << i;
      if (z & bi) continue;
      rows.push_back(make_row({{z | bi, 1}, {z, -1}}, Relation::LessEq, (cl & bi) ? 0 : 1, "flow"));
    }
  }
  return rows;
}

enum class NetworkShape { A, B };

// Which of N_{A_n}, N_{B_n} the network is (same sources, same demand set).
inline std::optional<std::pair<NetworkShape, int>> detect_shape(const IndexCodingNetwork& netw) {
  auto m = match_ln_variables(netw.sources());
  if (!m || m->second) return std::nullopt;
  const int n = m->first;
  auto same = [&](const IndexCodingNetwork& ref) {
    if (ref.demands().size() != netw.demands().size()) return false;
    return std::all_of(ref.demands().begin(), ref.demands().end(), [&](const Demand& d) { return netw.has_demand(d); });
  };
  if (same(network_A(n))) return std::pair{NetworkShape::A, n};
  if (same(network_B(n))) return std::pair{NetworkShape::B, n};
  return std::nullopt;
}

// Rows implied by the network's matroid over the characteristic class that
// solves it: dependent Y gives z_Y ≤ z_∅ + r(Y); independent Y gives
// |Y| + n + 2 ≤ z_Y ≤ |Y| + z_∅. Y = ∅ is skipped.
inline std::vector<LinearRow> matroid_side_constraints(const IndexCodingNetwork& netw, int n, bool divides) {
  if (netw.sources() != ln_variables(n)) throw std::invalid_argument("side constraints need the L_n labels");
  ClassRankOracle oracle(n, class_primes(n, divides));
  std::vector<LinearRow> rows;
  const auto all = netw.all_mask();
  for (SubsetMask y = 1; y <= all; ++y) {
    const long size = std::popcount(y);
    if (oracle.dependent_in_all(y)) {
      auto r = static_cast<long>(oracle.max_rank(y));
      rows.push_back(make_row({{y, 1}, {0, -1}}, Relation::LessEq, r, "dependent"));
      rows.back().asserted = true;
    } else if (oracle.independent_in_all(y)) {
      rows.push_back(make_row({{y, 1}}, Relation::GreaterEq, size + n + 2, "independent-lower"));
      rows.back().asserted = true;
      rows.push_back(make_row({{y, 1}, {0, -1}}, Relation::LessEq, size, "independent-upper"));
      rows.back().asserted = true;
    }
  }
  return rows;
}

inline std::vector<LinearRow> matroid_side_constraints(const IndexCodingNetwork& netw) {
  auto shape = detect_shape(netw);
  if (!shape) throw std::invalid_argument("side constraints: network is neither N_A nor N_B");
  return matroid_side_constraints(netw, shape->second, shape->first == NetworkShape::A);
}

// Source index for each role A_1..A_{n+1}, B_1..B_{n+1}, C.
using RoleMap = std::vector<std::size_t>;

inline RoleMap natural_roles(const IndexCodingNetwork& netw, int n) {
  RoleMap m;
  for (const auto& name : ln_variables(n)) m.push_back(netw.index_of(name));
  return m;
}

namespace detail {

inline void check_roles(const RoleMap& roles, int n, std::size_t sources) {
  if (roles.size() != static_cast<std::size_t>(2 * n + 3)) throw std::invalid_argument("role map needs 2n+3 entries");
  std::set<std::size_t> seen;
  for (auto r : roles) {
    if (r >= sources) throw std::invalid_argument("role map points outside the sources");
    if (!seen.insert(r).second) throw std::invalid_argument("role map is not injective");
  }
}

// Role-level masks pushed through a role map.
struct RoleMasks {
  int n;
  const RoleMap& roles;

  SubsetMask bit(std::size_t role) const { return SubsetMask{1} << roles[role]; }
  SubsetMask a(int i) const { return bit(static_cast<std::size_t>(i - 1)); }
  SubsetMask b(int i) const { return bit(static_cast<std::size_t>(n + i)); }
  SubsetMask c() const { return bit(static_cast<std::size_t>(2 * n + 2)); }
  SubsetMask a_range(int k) const {
    SubsetMask m = 0;
    for (int i = 1; i <= k; ++i) m |= a(i);
    return m;
  }
  SubsetMask a_all() const { return a_range(n + 1); }
  SubsetMask a_except(int i) const { return a_all() & ~a(i); }
  SubsetMask b_all() const {
    SubsetMask m = 0;
    for (int i = 1; i <= n + 1; ++i) m |= b(i);
    return m;
  }
  SubsetMask b_except(int i) const { return b_all() & ~b(i); }
};

using Terms = std::vector<std::pair<std::size_t, Rational>>;

// Row "rhs − lhs ≥ 0" from the two sides of "lhs ≤ rhs".
inline LinearRow side_difference(const Terms& lhs, const Terms& rhs, std::string tag) {
  Terms all = rhs;
  for (const auto& [v, c] : lhs) all.emplace_back(v, -c);
  return make_row(all, Relation::GreaterEq, 0, std::move(tag));
}

}  // namespace detail

// Scheme row satisfied under characteristics dividing n.
inline LinearRow scheme_constraint_div(int n, const RoleMap& roles, std::size_t sources) {
  detail::check_n(n);
  detail::check_roles(roles, n, sources);
  detail::RoleMasks r{n, roles};
  const long m = n;
  auto q = [](long v) { return Rational(v); };
  detail::Terms lhs, rhs;
  lhs.emplace_back(0, q(2 * m * m + 3 * m + 1));
  lhs.emplace_back(r.a_all() | r.b_all() | r.c(), q(2 * (m + 1)));
  lhs.emplace_back(r.b_all(), q(1));
  for (int i = 1; i <= n + 1; ++i) {
    lhs.emplace_back(r.a(i) | r.c(), q(1));
    lhs.emplace_back(r.a_except(i) | r.c(), q(m + 1));
  }
  lhs.emplace_back(r.a_all(), q(m + 2));

  rhs.emplace_back(r.a_all() | r.c(), q(1));
  for (int i = 1; i <= n; ++i) {
    rhs.emplace_back(r.a(i), q(m));
    rhs.emplace_back(r.a_except(i), q(m));
  }
  rhs.emplace_back(r.c(), q(m * m + 3 * m + 1));
  rhs.emplace_back(r.a_range(n), q(m + 1));
  rhs.emplace_back(r.a_all() | r.b_all(), q(m + 1));
  rhs.emplace_back(r.a(n + 1), q(m + 1));
  for (int i = 1; i <= n + 1; ++i) {
    rhs.emplace_back(r.a_all() | r.b_except(i) | r.c(), q(1));
    rhs.emplace_back(r.a_except(i) | r.b(i), q(1));
    rhs.emplace_back(r.a(i) | r.b(i) | r.c(), q(1));
  }
  return detail::side_difference(lhs, rhs, "scheme-div");
}

// Scheme row satisfied under characteristics not dividing n.
inline LinearRow scheme_constraint_nondiv(int n, const RoleMap& roles, std::size_t sources) {
  detail::check_n(n);
  detail::check_roles(roles, n, sources);
  detail::RoleMasks r{n, roles};
  const long m = n;
  auto q = [](long a, long b = 1) { return make_rational(a, b); };
  detail::Terms lhs, rhs;
  lhs.emplace_back(r.a_all() | r.b_all() | r.c(), q(2 * m + 3));
  for (int i = 1; i <= n + 1; ++i) {
    lhs.emplace_back(r.a_except(i) | r.c(), q(1));
    lhs.emplace_back(r.a(i) | r.b(i), q(1));
  }
  lhs.emplace_back(r.a_all(), q(m + 2));
  lhs.emplace_back(0, q(m * m * m + 2 * m * m + 2 * m + 2, m + 1));

  rhs.emplace_back(r.b_all(), q(1, m + 1));
  rhs.emplace_back(r.c() | r.a_all(), q(1));
  rhs.emplace_back(r.a_all() | r.b_all(), q(m + 1));
  for (int i = 1; i <= n + 1; ++i) rhs.emplace_back(r.a_all() | r.b_except(i) | r.c(), q(m + 2, m + 1));
  rhs.emplace_back(r.a_range(n), q(1));
  for (int i = 1; i <= n; ++i) rhs.emplace_back(r.a(i), q(m));
  rhs.emplace_back(r.a(n + 1), q(m + 1));
  rhs.emplace_back(r.c(), q(m));
  for (int i = 1; i <= n + 1; ++i) {
    rhs.emplace_back(r.a(i) | r.b(i) | r.c(), q(1));
    rhs.emplace_back(r.a_except(i) | r.b(i), q(1));
  }
  return detail::side_difference(lhs, rhs, "scheme-nondiv");
}

// Scheme rows for every simultaneous relabeling A_i, B_i -> A_σ(i), B_σ(i),
// duplicates removed.
inline std::vector<LinearRow> scheme_constraints_permuted(int n, bool divides, const RoleMap& roles,
                                                          std::size_t sources) {
  std::vector<int> perm(static_cast<std::size_t>(n + 1));
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<LinearRow> rows;
  do {
    RoleMap mapped(roles.size());
    for (int i = 0; i <= n; ++i) {
      mapped[static_cast<std::size_t>(i)] = roles[static_cast<std::size_t>(perm[static_cast<std::size_t>(i)])];
      mapped[static_cast<std::size_t>(n + 1 + i)] =
          roles[static_cast<std::size_t>(n + 1 + perm[static_cast<std::size_t>(i)])];
    }
    mapped.back() = roles.back();
    auto row = divides ? scheme_constraint_div(n, mapped, sources) : scheme_constraint_nondiv(n, mapped, sources);
    if (std::find(rows.begin(), rows.end(), row) == rows.end()) rows.push_back(std::move(row));
  } while (std::next_permutation(perm.begin(), perm.end()));
  return rows;
}

enum class SchemeKind { None, Div, NonDiv };

inline const char* to_string(SchemeKind s) {
  switch (s) {
    case SchemeKind::None: return "none";
    case SchemeKind::Div: return "div";
    case SchemeKind::NonDiv: return "nondiv";
  }
  return "?";
}

struct BoundOptions {
  SchemeKind scheme = SchemeKind::None;
  bool permute_roles = false;
  bool compact_flow = false;
  std::size_t source_cap = kDefaultSourceCap;
  std::optional<RoleMap> roles{};
};

struct BoundResult {
  LPSolution solution;
  Rational b;
  std::optional<Rational> B;  // nullopt when b = 0 (B infinite)
  std::size_t shannon_rows = 0;
  std::size_t flow_rows = 0;
  std::size_t side_rows = 0;
  std::size_t scheme_rows = 0;
};

// The full model used by bound(): Shannon + flow, plus side constraints and
// scheme rows when a scheme is requested.
inline LPProblem bound_model(const IndexCodingNetwork& netw, const BoundOptions& opt, BoundResult* counts = nullptr) {
  auto lp = LPProblem::over_subsets(netw.sources(), opt.source_cap);
  auto sh = shannon_constraints(netw.size(), opt.source_cap);
  auto fl = opt.compact_flow ? compact_flow_constraints(netw, opt.source_cap) : flow_constraints(netw, opt.source_cap);
  BoundResult local;
  auto& c = counts ? *counts : local;
  c.shannon_rows = sh.size();
  c.flow_rows = fl.size();
  lp.add(std::move(sh));
  lp.add(std::move(fl));
  if (opt.scheme != SchemeKind::None) {
    auto shape = detect_shape(netw);
    if (!shape) throw std::invalid_argument("scheme bounds need N_A or N_B");
    const int n = shape->second;
    auto side = matroid_side_constraints(netw, n, shape->first == NetworkShape::A);
    c.side_rows = side.size();
    lp.add(std::move(side));
    const bool div = opt.scheme == SchemeKind::Div;
    auto roles = opt.roles ? *opt.roles : natural_roles(netw, n);
    std::vector<LinearRow> scheme;
    if (opt.permute_roles) {
      scheme = scheme_constraints_permuted(n, div, roles, netw.size());
    } else {
      scheme.push_back(div ? scheme_constraint_div(n, roles, netw.size())
                           : scheme_constraint_nondiv(n, roles, netw.size()));
    }
    c.scheme_rows = scheme.size();
    lp.add(std::move(scheme));
  }
  return lp;
}

inline BoundResult bound(const IndexCodingNetwork& netw, const BoundOptions& opt = {}) {
  BoundResult res;
  auto lp = bound_model(netw, opt, &res);
  res.solution = solve_min(lp);
  if (res.solution.status != LPStatus::Optimal) {
    throw std::runtime_error(std::string("bound: LP is ") + to_string(res.solution.status));
  }
  res.b = res.solution.optimum;
  if (sgn(res.b) != 0) res.B = 1 / res.b;
  return res;
}

inline std::string rational_term(const Rational& c, const std::string& var, bool first) {
  std::string s;
  if (sgn(c) < 0) {
    s = first ? "-" : " - ";
  } else if (!first) {
    s = " + ";
  }
  return s + to_string(Rational(abs(c))) + " " + var;
}

// Text dump: sources, objective, then one row per line.
inline std::string to_text(const LPProblem& lp) {
  std::ostringstream out;
  if (lp.subset_indexed()) {
    out << "sources:";
    for (const auto& s : lp.sources()) out << ' ' << s;
    out << '\n';
  }
  out << "variables: " << lp.variable_count() << '\n';
  out << "minimize:";
  bool first = true;
  for (const auto& [v, c] : lp.objective()) {
    out << ' ' << rational_term(c, lp.variable_name(v), first);
    first = false;
  }
  out << '\n' << "rows: " << lp.rows().size() << '\n';
  for (const auto& row : lp.rows()) {
    out << '[' << row.tag << (row.asserted ? ",asserted" : "") << "] ";
    first = true;
    for (const auto& [v, c] : row.coeffs) {
      out << rational_term(c, lp.variable_name(v), first);
      first = false;
    }
    if (first) out << '0';
    out << (row.relation == Relation::LessEq ? " <= " : row.relation == Relation::GreaterEq ? " >= " : " = ")
        << to_string(row.rhs) << '\n';
  }
  return out.str();
}

}  // namespace lrineq
