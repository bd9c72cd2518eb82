#pragma once

// JSON encoding of the library's values (nlohmann::ordered_json, so key order
// is stable and reports are byte-identical across runs).

#include <json.hpp>

#include <cstdint>
#include <string>
#include <vector>

#include "lrineq/ffla.hpp"
#include "lrineq/ineq.hpp"
#include "lrineq/lp.hpp"
#include "lrineq/matroid.hpp"
#include "lrineq/netcode.hpp"
#include "lrineq/rational.hpp"
#include "lrineq/subspace.hpp"

namespace lrineq {

using Json = nlohmann::ordered_json;

inline Json rational_json(const Rational& r) { return to_string(r); }

inline Rational rational_from_json(const Json& j) {
  if (j.is_number_integer()) return Rational(static_cast<long>(j.get<std::int64_t>()));
  return parse_rational(j.get<std::string>());
}

inline Json rows_json(const FpMatrix& m) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) rows.push_back(std::vector<std::uint32_t>(m.row(i).begin(), m.row(i).end()));
  return rows;
}

inline Json to_json(const FpMatrix& m) {
  return Json{{"p", m.modulus().value()}, {"rows", m.rows()}, {"cols", m.cols()}, {"data", rows_json(m)}};
}

inline FpMatrix matrix_from_json(const Json& j) {
  PrimeModulus mod(j.at("p").get<std::uint64_t>());
  const auto rows = j.at("rows").get<std::size_t>();
  const auto cols = j.at("cols").get<std::size_t>();
  const auto& data = j.at("data");
  if (data.size() != rows) throw std::invalid_argument("matrix json: row count mismatch");
  std::vector<std::vector<std::int64_t>> r;
  for (const auto& row : data) r.push_back(row.get<std::vector<std::int64_t>>());
  auto m = FpMatrix::from_rows(mod, cols, r);
  return m;
}

inline Json to_json(const Subspace& s) {
  return Json{{"ambient", s.ambient_dim()}, {"dim", s.dim()}, {"basis", rows_json(s.basis())}};
}

inline Json to_json(const SubspaceFamily& f) {
  Json members = Json::array();
  for (std::size_t i = 0; i < f.variables().size(); ++i) {
    members.push_back(Json{{"name", f.variables()[i]}, {"basis", rows_json(f.at(i).basis())}});
  }
  return Json{{"p", f.modulus().value()}, {"ambient", f.ambient_dim()}, {"members", members}};
}

inline SubspaceFamily family_from_json(const Json& j) {
  PrimeModulus mod(j.at("p").get<std::uint64_t>());
  const auto d = j.at("ambient").get<std::size_t>();
  std::vector<std::string> names;
  std::vector<Subspace> members;
  for (const auto& m : j.at("members")) {
    names.push_back(m.at("name").get<std::string>());
    std::vector<std::vector<std::int64_t>> rows;
    for (const auto& r : m.at("basis")) rows.push_back(r.get<std::vector<std::int64_t>>());
    members.push_back(Subspace::row_space(FpMatrix::from_rows(mod, d, rows)));
  }
  return SubspaceFamily(std::move(names), std::move(members));
}

inline Json to_json(const VerificationReport& r) {
  Json v = Json::array();
  for (const auto& x : r.violations) {
    v.push_back(Json{{"trial", x.trial}, {"value", rational_json(x.value)}, {"family", to_json(x.family)}});
  }
  return Json{{"seed", r.seed},
              {"p", r.modulus},
              {"ambient_dim", r.ambient_dim},
              {"trials", r.trials},
              {"injected", r.injected},
              {"min_value", r.min_value ? rational_json(*r.min_value) : Json(nullptr)},
              {"violation_count", r.violations.size()},
              {"violations", v}};
}

inline Json to_json(const ProjectionReport& r) {
  Json measured = Json::object();
  for (const auto& [value, count] : r.measured) measured[std::to_string(value)] = count;
  Json mism = Json::array();
  for (const auto& m : r.mismatches) {
    mism.push_back(Json{{"trial", m.trial}, {"measured", m.measured}, {"expected", m.expected}});
  }
  return Json{{"n", r.n},
              {"p", r.modulus},
              {"block_dim", r.block_dim},
              {"seed", r.seed},
              {"trials", r.trials},
              {"degenerate", r.degenerate},
              {"projection_entropy_counts", measured},
              {"mismatches", mism},
              {"line_checks", r.line_checks},
              {"line_violations", r.line_violations},
              {"clean", r.clean()}};
}

inline Json circuit_names(const std::vector<std::string>& labels, SubsetMask c) {
  Json out = Json::array();
  for (std::size_t i = 0; i < labels.size(); ++i)
    if (c >> i & 1) out.push_back(labels[i]);
  return out;
}

inline Json to_json(const CircuitSet& cs) {
  Json out = Json::array();
  for (auto c : cs.circuits) out.push_back(circuit_names(cs.labels, c));
  return out;
}

inline Json to_json(const ClassCheck& c) {
  return Json{{"p", c.prime},        {"divides_n", c.divides},     {"rank", c.rank},
              {"circuit_count", c.circuit_count}, {"class_A_ok", c.class_A_ok}, {"class_B_ok", c.class_B_ok},
              {"expected_ok", c.expected_ok()},   {"circuits", to_json(c.found)}};
}

inline Json demand_json(const IndexCodingNetwork& netw, const Demand& d) {
  Json given = Json::array();
  for (auto g : d.given) given.push_back(netw.sources()[g]);
  return Json{{"want", netw.sources()[d.want]}, {"given", given}};
}

inline Json to_json(const IndexCodingNetwork& netw) {
  Json ds = Json::array();
  for (const auto& d : netw.demands()) ds.push_back(demand_json(netw, d));
  return Json{{"sources", netw.sources()}, {"demands", ds}};
}

inline IndexCodingNetwork network_from_json(const Json& j) {
  std::vector<std::pair<std::string, std::vector<std::string>>> ds;
  for (const auto& d : j.at("demands")) {
    ds.emplace_back(d.at("want").get<std::string>(), d.at("given").get<std::vector<std::string>>());
  }
  return IndexCodingNetwork::from_names(j.at("sources").get<std::vector<std::string>>(), ds);
}

// Decoder demands use source indices; the code does not carry names.
inline Json to_json(const LinearIndexCode& code) {
  Json decs = Json::array();
  for (const auto& d : code.decoders()) {
    decs.push_back(Json{{"want", d.demand.want}, {"given", d.demand.given}, {"matrix", rows_json(d.matrix)}});
  }
  return Json{{"p", code.modulus().value()},
              {"k", code.block_length()},
              {"sources", code.source_count()},
              {"n_broadcast", code.broadcast_length()},
              {"encoder", rows_json(code.encoder())},
              {"decoders", decs}};
}

inline LinearIndexCode code_from_json(const Json& j) {
  PrimeModulus mod(j.at("p").get<std::uint64_t>());
  const auto k = j.at("k").get<std::size_t>();
  const auto s = j.at("sources").get<std::size_t>();
  const auto nb = j.at("n_broadcast").get<std::size_t>();
  auto load = [&](const Json& rows, std::size_t expect_rows, std::size_t cols) {
    if (rows.size() != expect_rows) throw std::invalid_argument("code json: wrong number of matrix rows");
    std::vector<std::vector<std::int64_t>> r;
    for (const auto& row : rows) r.push_back(row.get<std::vector<std::int64_t>>());
    return FpMatrix::from_rows(mod, cols, r);
  };
  auto enc = load(j.at("encoder"), nb, k * s);
  std::vector<Decoder> decs;
  for (const auto& d : j.at("decoders")) {
    Demand dem{d.at("want").get<std::size_t>(), d.at("given").get<std::vector<std::size_t>>()};
    auto m = load(d.at("matrix"), k, nb + k * dem.given.size());
    decs.push_back({std::move(dem), std::move(m)});
  }
  return LinearIndexCode(k, s, std::move(enc), std::move(decs));
}

inline Json to_json(const SimulationVerdict& v, const IndexCodingNetwork& netw) {
  Json out{{"passed", v.passed()},
           {"exhaustive", v.exhaustive},
           {"tuples_checked", v.tuples_checked},
           {"failing_tuples", v.failing_tuples},
           {"shape_mismatch", v.shape_mismatch}};
  Json missing = Json::array();
  for (auto i : v.missing_decoders) missing.push_back(demand_json(netw, netw.demands()[i]));
  out["missing_decoders"] = missing;
  if (v.witness) {
    out["witness"] = Json{{"tuple", v.witness->tuple},
                          {"message", v.witness->message},
                          {"demand", demand_json(netw, netw.demands()[v.witness->demand])},
                          {"decoded", v.witness->decoded}};
  } else {
    out["witness"] = nullptr;
  }
  return out;
}

inline Json to_json(const CapacityReport& r) {
  Json entries = Json::array();
  for (const auto& e : r.entries) {
    entries.push_back(Json{{"key", e.key}, {"value", rational_json(e.value)}, {"description", e.description}});
  }
  return Json{{"n", r.n}, {"k", r.k}, {"formula_only", true}, {"entries", entries}};
}

inline Json to_json(const LPSolution& s, const LPProblem& lp) {
  Json out{{"status", to_string(s.status)}};
  if (s.status != LPStatus::Optimal) return out;
  out["b"] = rational_json(s.optimum);
  out["B"] = sgn(s.optimum) == 0 ? Json("inf") : rational_json(1 / s.optimum);
  Json a = Json::object();
  for (std::size_t v = 0; v < s.assignment.size(); ++v) a[lp.variable_name(v)] = rational_json(s.assignment[v]);
  out["assignment"] = a;
  out["pivots"] = s.pivots;
  return out;
}

inline Json to_json(const BoundResult& r, const LPProblem& lp) {
  auto out = to_json(r.solution, lp);
  out["rows"] = Json{{"shannon", r.shannon_rows},
                     {"flow", r.flow_rows},
                     {"side", r.side_rows},
                     {"side_provenance", r.side_rows ? "asserted" : "none"},
                     {"scheme", r.scheme_rows}};
  return out;
}

}  // namespace lrineq
