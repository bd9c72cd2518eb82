#pragma once

// Index coding networks (S, E*), closure, lexicographic products, explicit
// linear codes, and simulation of codes against networks.

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "lrineq/ffla.hpp"
#include "lrineq/matroid.hpp"
#include "lrineq/rational.hpp"

namespace lrineq {

// Receiver wanting source `want`, holding the sources in `given` (sorted).
struct Demand {
  std::size_t want = 0;
  std::vector<std::size_t> given;

  auto operator<=>(const Demand&) const = default;
  bool operator==(const Demand&) const = default;
};

class IndexCodingNetwork {
 public:
  IndexCodingNetwork(std::vector<std::string> sources, std::vector<Demand> demands)
      : sources_(std::move(sources)) {
    if (sources_.empty()) throw std::invalid_argument("network needs at least one source");
    std::set<std::string> seen;
    for (const auto& s : sources_)
      if (!seen.insert(s).second) throw std::invalid_argument("duplicate source '" + s + "'");
    std::set<Demand> have;
    for (auto& d : demands) {
      std::sort(d.given.begin(), d.given.end());
      d.given.erase(std::unique(d.given.begin(), d.given.end()), d.given.end());
      if (d.want >= sources_.size()) throw std::invalid_argument("demand on unknown source");
      for (auto g : d.given) {
        if (g >= sources_.size()) throw std::invalid_argument("side information names unknown source");
        if (g == d.want) {
          throw std::invalid_argument("demand for '" + sources_[d.want] + "' already holds it");
        }
      }
      if (have.insert(d).second) demands_.push_back(std::move(d));
    }
  }

  static IndexCodingNetwork from_names(
      std::vector<std::string> sources,
      const std::vector<std::pair<std::string, std::vector<std::string>>>& demands) {
    std::map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < sources.size(); ++i) index.emplace(sources[i], i);
    auto lookup = [&](const std::string& s) {
      auto it = index.find(s);
      if (it == index.end()) throw std::invalid_argument("unknown source '" + s + "'");
      return it->second;
    };
    std::vector<Demand> ds;
    for (const auto& [want, given] : demands) {
      Demand d{lookup(want), {}};
      for (const auto& g : given) d.given.push_back(lookup(g));
      ds.push_back(std::move(d));
    }
    return IndexCodingNetwork(std::move(sources), std::move(ds));
  }

  const std::vector<std::string>& sources() const { return sources_; }
  const std::vector<Demand>& demands() const { return demands_; }
  std::size_t size() const { return sources_.size(); }

  std::size_t index_of(const std::string& name) const {
    auto it = std::find(sources_.begin(), sources_.end(), name);
    if (it == sources_.end()) throw std::invalid_argument("unknown source '" + name + "'");
    return static_cast<std::size_t>(it - sources_.begin());
  }

  bool has_demand(const Demand& d) const {
    return std::find(demands_.begin(), demands_.end(), d) != demands_.end();
  }

  // Bitmask view; only for networks with at most 63 sources.
  SubsetMask mask_of(const std::vector<std::size_t>& members) const {
    check_mask_size();
    SubsetMask m = 0;
    for (auto i : members) m |= SubsetMask{1} << i;
    return m;
  }
  SubsetMask mask_of_names(const std::vector<std::string>& names) const {
    SubsetMask m = 0;
    for (const auto& n : names) m |= SubsetMask{1} << index_of(n);
    check_mask_size();
    return m;
  }
  SubsetMask all_mask() const {
    check_mask_size();
    return (SubsetMask{1} << size()) - 1;
  }
  std::vector<std::string> names_of(SubsetMask m) const {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < size(); ++i)
      if (m >> i & 1) out.push_back(sources_[i]);
    return out;
  }

  bool operator==(const IndexCodingNetwork&) const = default;

 private:
  void check_mask_size() const {
    if (size() > 63) throw std::invalid_argument("bitmask view needs at most 63 sources");
  }

  std::vector<std::string> sources_;
  std::vector<Demand> demands_;
};

// One demand (s, C − s) per circuit C and element s ∈ C.
inline IndexCodingNetwork network_from_circuits(const std::vector<std::string>& labels,
                                                const CircuitSet& cs) {
  std::vector<std::size_t> remap(cs.labels.size());
  for (std::size_t i = 0; i < cs.labels.size(); ++i) {
    auto it = std::find(labels.begin(), labels.end(), cs.labels[i]);
    if (it == labels.end()) throw std::invalid_argument("circuit element '" + cs.labels[i] + "' not a label");
    remap[i] = static_cast<std::size_t>(it - labels.begin());
  }
  std::vector<Demand> ds;
  for (auto c : cs.circuits) {
    if (cs.labels.size() < 64 && (c >> cs.labels.size()) != 0) {
      throw std::invalid_argument("circuit element outside labels");
    }
    for (std::size_t s = 0; s < cs.labels.size(); ++s) {
      if (!(c >> s & 1)) continue;
      Demand d{remap[s], {}};
      for (std::size_t t = 0; t < cs.labels.size(); ++t)
        if (t != s && (c >> t & 1)) d.given.push_back(remap[t]);
      ds.push_back(std::move(d));
    }
  }
  return IndexCodingNetwork(labels, std::move(ds));
}
inline IndexCodingNetwork network_from_circuits(const CircuitSet& cs) {
  return network_from_circuits(cs.labels, cs);
}

inline IndexCodingNetwork network_A(int n) { return network_from_circuits(class_A(n)); }
inline IndexCodingNetwork network_B(int n) { return network_from_circuits(class_B(n)); }

// One-step closure: Z plus every source some demand decodes from side info inside Z.
inline SubsetMask closure(const IndexCodingNetwork& netw, SubsetMask z) {
  if (z & ~netw.all_mask()) throw std::invalid_argument("closure: unknown source");
  SubsetMask out = z;
  for (const auto& d : netw.demands()) {
    SubsetMask y = netw.mask_of(d.given);
    if ((y & z) == y) out |= SubsetMask{1} << d.want;
  }
  return out;
}
inline std::vector<std::string> closure(const IndexCodingNetwork& netw, const std::vector<std::string>& z) {
  return netw.names_of(closure(netw, netw.mask_of_names(z)));
}

inline SubsetMask iterated_closure(const IndexCodingNetwork& netw, SubsetMask z) {
  for (;;) {
    auto next = closure(netw, z);
    if (next == z) return z;
    z = next;
  }
}

// min |T| whose iterated closure is every source.
inline std::size_t r_cl(const IndexCodingNetwork& netw, std::size_t max_sources = 24) {
  if (netw.size() > max_sources) throw std::invalid_argument("r_cl: too many sources for brute force");
  const auto all = netw.all_mask();
  for (std::size_t k = 0; k <= netw.size(); ++k) {
    // Gosper's hack over k-subsets.
    if (k == 0) {
      if (iterated_closure(netw, 0) == all) return 0;
      continue;
    }
    SubsetMask t = (SubsetMask{1} << k) - 1;
    while (t <= all) {
      if (iterated_closure(netw, t) == all) return k;
      SubsetMask c = t & (~t + 1), r = t + c;
      t = (((r ^ t) >> 2) / c) | r;
    }
  }
  return netw.size();
}

inline std::string pair_name(const std::string& a, const std::string& b) { return "(" + a + "," + b + ")"; }

// Sources S1×S2 ((s1,s2) at index s1·|S2| + s2); demand ((s1,s2), (Y1×S2) ∪ ({s1}×Y2))
// for every pair of demands.
inline IndexCodingNetwork lex_product(const IndexCodingNetwork& n1, const IndexCodingNetwork& n2) {
  const auto s2 = n2.size();
  std::vector<std::string> names;
  names.reserve(n1.size() * s2);
  for (const auto& a : n1.sources())
    for (const auto& b : n2.sources()) names.push_back(pair_name(a, b));
  std::vector<Demand> ds;
  ds.reserve(n1.demands().size() * n2.demands().size());
  for (const auto& d1 : n1.demands()) {
    for (const auto& d2 : n2.demands()) {
      Demand d{d1.want * s2 + d2.want, {}};
      for (auto t : d1.given)
        for (std::size_t u = 0; u < s2; ++u) d.given.push_back(t * s2 + u);
      for (auto u : d2.given) d.given.push_back(d1.want * s2 + u);
      ds.push_back(std::move(d));
    }
  }
  return IndexCodingNetwork(std::move(names), std::move(ds));
}

// N^{•k} = N • N^{•(k−1)}.
inline IndexCodingNetwork lex_power(const IndexCodingNetwork& netw, int k) {
  if (k < 1) throw std::invalid_argument("lexicographic power needs k >= 1");
  return k == 1 ? netw : lex_product(netw, lex_power(netw, k - 1));
}

// Every demand of `small` (by source names) is a demand of `big`.
inline bool demands_contained(const IndexCodingNetwork& small, const IndexCodingNetwork& big) {
  std::vector<std::size_t> remap;
  for (const auto& s : small.sources()) {
    auto it = std::find(big.sources().begin(), big.sources().end(), s);
    if (it == big.sources().end()) return false;
    remap.push_back(static_cast<std::size_t>(it - big.sources().begin()));
  }
  return std::all_of(small.demands().begin(), small.demands().end(), [&](const Demand& d) {
    Demand m{remap[d.want], {}};
    for (auto g : d.given) m.given.push_back(remap[g]);
    std::sort(m.given.begin(), m.given.end());
    return big.has_demand(m);
  });
}

// Decoder for one demand: k × (n_b + k·|given|) over [broadcast; side info].
struct Decoder {
  Demand demand;
  FpMatrix matrix;
};

// (k, n_b) linear code: source j owns message symbols j·k .. j·k+k−1.
class LinearIndexCode {
 public:
  LinearIndexCode(std::size_t block_length, std::size_t source_count, FpMatrix encoder,
                  std::vector<Decoder> decoders)
      : k_(block_length), sources_(source_count), encoder_(std::move(encoder)), decoders_(std::move(decoders)) {
    if (k_ == 0) throw std::invalid_argument("block length must be positive");
    if (encoder_.cols() != k_ * sources_) throw std::invalid_argument("encoder width must be k·|S|");
    for (const auto& d : decoders_) {
      if (!(d.matrix.modulus() == modulus())) throw std::invalid_argument("decoder over a different field");
      if (d.matrix.rows() != k_ || d.matrix.cols() != broadcast_length() + k_ * d.demand.given.size()) {
        throw std::invalid_argument("decoder shape does not match (k, n_b)");
      }
      if (d.demand.want >= sources_) throw std::invalid_argument("decoder for unknown source");
    }
  }

  const PrimeModulus& modulus() const { return encoder_.modulus(); }
  std::size_t block_length() const { return k_; }
  std::size_t broadcast_length() const { return encoder_.rows(); }
  std::size_t source_count() const { return sources_; }
  const FpMatrix& encoder() const { return encoder_; }
  const std::vector<Decoder>& decoders() const { return decoders_; }

  const Decoder* find_decoder(const Demand& d) const {
    for (const auto& dec : decoders_)
      if (dec.demand == d) return &dec;
    return nullptr;
  }

 private:
  std::size_t k_;
  std::size_t sources_;
  FpMatrix encoder_;
  std::vector<Decoder> decoders_;
};

namespace detail {

// Lexicographically least X with aX = b, column by column. Reversing the
// variable order makes the free variables the earliest ones; zeroing them
// leaves every later variable forced.
inline std::optional<FpMatrix> lex_least_solve(const FpMatrix& a, const FpMatrix& b) {
  std::vector<std::size_t> rev(a.cols());
  for (std::size_t i = 0; i < rev.size(); ++i) rev[i] = a.cols() - 1 - i;
  auto x = solve(a.select_columns(rev), b);
  if (!x) return std::nullopt;
  return x->select_rows(rev);
}

inline FpMatrix kron_identity(const FpMatrix& m, std::size_t t) {
  FpMatrix out(m.modulus(), m.rows() * t, m.cols() * t);
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      if (auto v = m(i, j))
        for (std::size_t l = 0; l < t; ++l) out.row(i * t + l)[j * t + l] = v;
  return out;
}

inline FpMatrix symbol_selector(PrimeModulus mod, std::size_t k, std::size_t sources,
                                const std::vector<std::size_t>& which) {
  FpMatrix sel(mod, k * which.size(), k * sources);
  for (std::size_t r = 0; r < which.size(); ++r)
    for (std::size_t a = 0; a < k; ++a) sel.set(r * k + a, which[r] * k + a, 1);
  return sel;
}

}  // namespace detail

// Lexicographically least decoder for `d`, or nullopt when the broadcast plus
// side info does not determine the wanted symbols.
inline std::optional<FpMatrix> synthesize_decoder(const FpMatrix& encoder, std::size_t k, std::size_t sources,
                                                  const Demand& d) {
  const auto& mod = encoder.modulus();
  const FpMatrix parts[] = {encoder, detail::symbol_selector(mod, k, sources, d.given)};
  auto observed = FpMatrix::stack(parts, mod, k * sources);
  auto want = detail::symbol_selector(mod, k, sources, {d.want});
  auto x = detail::lex_least_solve(observed.transpose(), want.transpose());
  if (!x) return std::nullopt;
  return x->transpose();
}

// Code with the given encoder and synthesized decoders for every demand of netw.
inline LinearIndexCode code_for_network(const FpMatrix& encoder, std::size_t k, const IndexCodingNetwork& netw) {
  std::vector<Decoder> decs;
  for (const auto& d : netw.demands()) {
    auto m = synthesize_decoder(encoder, k, netw.size(), d);
    if (!m) {
      throw std::invalid_argument("demand for '" + netw.sources()[d.want] +
                                  "' is not decodable from the broadcast and its side information");
    }
    decs.push_back({d, std::move(*m)});
  }
  return LinearIndexCode(k, netw.size(), encoder, std::move(decs));
}

inline LinearIndexCode retarget(const LinearIndexCode& code, const IndexCodingNetwork& netw) {
  if (code.source_count() != netw.size()) throw std::invalid_argument("retarget: source count mismatch");
  return code_for_network(code.encoder(), code.block_length(), netw);
}

// (1, |S| − r) code: broadcast the parity checks kernel(L)·x of the representation.
inline LinearIndexCode solution_from_representation(const VectorMatroid& m, const IndexCodingNetwork& netw) {
  if (m.labels() != netw.sources()) throw std::invalid_argument("matroid labels differ from network sources");
  try {
    return code_for_network(kernel(m.matrix()), 1, netw);
  } catch (const std::invalid_argument& e) {
    throw std::invalid_argument(std::string("representation does not solve the network: ") + e.what());
  }
}

// Appends the k message symbols of `source` to the broadcast.
inline LinearIndexCode extend_with_message(const LinearIndexCode& code, std::size_t source) {
  if (source >= code.source_count()) throw std::invalid_argument("extend: unknown source");
  const auto k = code.block_length();
  const auto nb = code.broadcast_length();
  auto sel = detail::symbol_selector(code.modulus(), k, code.source_count(), {source});
  const FpMatrix parts[] = {code.encoder(), sel};
  auto enc = FpMatrix::stack(parts, code.modulus(), code.encoder().cols());
  std::vector<Decoder> decs;
  for (const auto& d : code.decoders()) {
    FpMatrix m(code.modulus(), k, d.matrix.cols() + k);
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < d.matrix.cols(); ++j) m.row(i)[j < nb ? j : j + k] = d.matrix(i, j);
    decs.push_back({d.demand, std::move(m)});
  }
  return LinearIndexCode(k, code.source_count(), std::move(enc), std::move(decs));
}
inline LinearIndexCode extend_with_message(const LinearIndexCode& code, const IndexCodingNetwork& netw,
                                           const std::string& source) {
  return extend_with_message(code, netw.index_of(source));
}

// t independent copies of a (k, n_b) code: a (k·t, n_b·t) code.
inline LinearIndexCode repetition(const LinearIndexCode& code, std::size_t t) {
  if (t == 0) throw std::invalid_argument("repetition count must be positive");
  std::vector<Decoder> decs;
  for (const auto& d : code.decoders()) decs.push_back({d.demand, detail::kron_identity(d.matrix, t)});
  return LinearIndexCode(code.block_length() * t, code.source_count(), detail::kron_identity(code.encoder(), t),
                         std::move(decs));
}

// outer: (n, m) code for N1; inner: (k, n) code for N2. Result: (k, m) code for N1 • N2
// with encoder outer ∘ (inner applied to each N2-block).
inline LinearIndexCode compose_lex(const LinearIndexCode& outer, const LinearIndexCode& inner) {
  if (!(outer.modulus() == inner.modulus())) throw std::invalid_argument("compose_lex: codes over different fields");
  if (outer.block_length() != inner.broadcast_length()) {
    throw std::invalid_argument("compose_lex: outer block length must equal inner broadcast length");
  }
  const auto& mod = outer.modulus();
  const auto s1 = outer.source_count(), s2 = inner.source_count();
  const auto k = inner.block_length(), n = inner.broadcast_length(), m = outer.broadcast_length();
  const auto block = k * s2;

  FpMatrix spread(mod, n * s1, block * s1);
  for (std::size_t t = 0; t < s1; ++t)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < block; ++j) spread.row(t * n + i)[t * block + j] = inner.encoder()(i, j);
  auto enc = matmul(outer.encoder(), spread);

  std::vector<Decoder> decs;
  decs.reserve(outer.decoders().size() * inner.decoders().size());
  for (const auto& d1 : outer.decoders()) {
    for (const auto& d2 : inner.decoders()) {
      Demand d{d1.demand.want * s2 + d2.demand.want, {}};
      for (auto t : d1.demand.given)
        for (std::size_t u = 0; u < s2; ++u) d.given.push_back(t * s2 + u);
      for (auto u : d2.demand.given) d.given.push_back(d1.demand.want * s2 + u);
      std::sort(d.given.begin(), d.given.end());
      std::map<std::size_t, std::size_t> pos;
      for (std::size_t i = 0; i < d.given.size(); ++i) pos.emplace(d.given[i], i);
      const auto width = m + k * d.given.size();

      // [broadcast; inner broadcasts of the Y1 blocks] as a function of the input.
      const auto y1 = d1.demand.given.size();
      FpMatrix lift(mod, m + n * y1, width);
      for (std::size_t i = 0; i < m; ++i) lift.set(i, i, 1);
      for (std::size_t r = 0; r < y1; ++r) {
        auto t = d1.demand.given[r];
        for (std::size_t i = 0; i < n; ++i)
          for (std::size_t u = 0; u < s2; ++u)
            for (std::size_t a = 0; a < k; ++a)
              lift.row(m + r * n + i)[m + pos.at(t * s2 + u) * k + a] = inner.encoder()(i, u * k + a);
      }
      auto inner_bcast = matmul(d1.matrix, lift);

      // [inner broadcast of block s1; side info of (s1, Y2)].
      FpMatrix second(mod, n + k * d2.demand.given.size(), width);
      for (std::size_t i = 0; i < n; ++i)
        std::copy(inner_bcast.row(i).begin(), inner_bcast.row(i).end(), second.row(i).begin());
      for (std::size_t r = 0; r < d2.demand.given.size(); ++r) {
        auto src = d1.demand.want * s2 + d2.demand.given[r];
        for (std::size_t a = 0; a < k; ++a) second.set(n + r * k + a, m + pos.at(src) * k + a, 1);
      }
      decs.push_back({std::move(d), matmul(d2.matrix, second)});
    }
  }
  return LinearIndexCode(k, s1 * s2, std::move(enc), std::move(decs));
}

// (1, n_b^k) code for N^{•k} from a (1, n_b) code for N.
inline LinearIndexCode power_code(const LinearIndexCode& code, int k) {
  if (k < 1) throw std::invalid_argument("power needs k >= 1");
  if (code.block_length() != 1) throw std::invalid_argument("power_code expects a (1, n) code");
  if (k == 1) return code;
  auto inner = power_code(code, k - 1);
  return compose_lex(repetition(code, inner.broadcast_length()), inner);
}

// Keeps the first `length` broadcast symbols; demands that can no longer be
// decoded get a zero decoder.
inline LinearIndexCode truncate(const LinearIndexCode& code, const IndexCodingNetwork& netw, std::size_t length) {
  if (length > code.broadcast_length()) throw std::invalid_argument("truncate: longer than the broadcast");
  auto enc = code.encoder().top_rows(length);
  const auto k = code.block_length();
  std::vector<Decoder> decs;
  for (const auto& d : netw.demands()) {
    auto m = synthesize_decoder(enc, k, netw.size(), d);
    decs.push_back({d, m ? std::move(*m) : FpMatrix(code.modulus(), k, length + k * d.given.size())});
  }
  return LinearIndexCode(k, code.source_count(), std::move(enc), std::move(decs));
}

inline constexpr std::uint64_t kDefaultSimulationCap = 1'000'000;

struct SimulationOptions {
  std::uint64_t exhaustive_cap = kDefaultSimulationCap;
  std::uint64_t trials = 10'000;
  std::uint64_t seed = 0;
  unsigned workers = 1;
};

struct SimulationWitness {
  std::uint64_t tuple = 0;
  std::vector<FpMatrix::Scalar> message;
  std::size_t demand = 0;
  std::vector<FpMatrix::Scalar> decoded;
};

struct SimulationVerdict {
  bool exhaustive = false;
  std::uint64_t tuples_checked = 0;
  std::uint64_t failing_tuples = 0;
  std::vector<std::size_t> missing_decoders;
  bool shape_mismatch = false;
  std::optional<SimulationWitness> witness;

  bool passed() const { return !shape_mismatch && missing_decoders.empty() && failing_tuples == 0; }
};

// Associative; keeps the witness with the lowest tuple index.
inline SimulationVerdict merge(SimulationVerdict a, const SimulationVerdict& b) {
  a.tuples_checked += b.tuples_checked;
  a.failing_tuples += b.failing_tuples;
  if (b.witness && (!a.witness || b.witness->tuple < a.witness->tuple)) a.witness = b.witness;
  return a;
}

// Number of message tuples, saturating at cap+1.
inline std::uint64_t message_space(const LinearIndexCode& code, std::uint64_t cap) {
  std::uint64_t total = 1;
  const auto symbols = code.block_length() * code.source_count();
  for (std::size_t i = 0; i < symbols; ++i) {
    if (total > cap / code.modulus().value()) return cap + 1;
    total *= code.modulus().value();
  }
  return total;
}

// Exhaustive over all message tuples when there are at most exhaustive_cap of
// them, otherwise `trials` uniform samples (tuple i drawn from seed and i).
inline SimulationVerdict simulate(const LinearIndexCode& code, const IndexCodingNetwork& netw,
                                  const SimulationOptions& opt = {}) {
  SimulationVerdict verdict;
  if (code.source_count() != netw.size()) {
    verdict.shape_mismatch = true;
    return verdict;
  }
  std::vector<const Decoder*> decs;
  for (std::size_t i = 0; i < netw.demands().size(); ++i) {
    const auto* d = code.find_decoder(netw.demands()[i]);
    if (!d) verdict.missing_decoders.push_back(i);
    decs.push_back(d);
  }
  if (!verdict.missing_decoders.empty()) return verdict;

  const auto total = message_space(code, opt.exhaustive_cap);
  verdict.exhaustive = total <= opt.exhaustive_cap;
  const auto count = verdict.exhaustive ? total : opt.trials;
  const auto& mod = code.modulus();
  const auto p = mod.value();
  const auto k = code.block_length();
  const auto symbols = k * code.source_count();

  auto run = [&](std::uint64_t lo, std::uint64_t hi) {
    SimulationVerdict part;
    std::vector<FpMatrix::Scalar> x(symbols), input, out;
    std::uniform_int_distribution<std::uint32_t> digit(0, p - 1);
    for (std::uint64_t t = lo; t < hi; ++t) {
      if (verdict.exhaustive) {
        auto v = t;
        for (auto& s : x) {
          s = static_cast<FpMatrix::Scalar>(v % p);
          v /= p;
        }
      } else {
        std::seed_seq seq{static_cast<std::uint32_t>(opt.seed), static_cast<std::uint32_t>(opt.seed >> 32),
                          static_cast<std::uint32_t>(t), static_cast<std::uint32_t>(t >> 32)};
        std::mt19937_64 rng(seq);
        for (auto& s : x) s = digit(rng);
      }
      auto bcast = lrineq::apply(code.encoder(), x);
      bool ok = true;
      for (std::size_t di = 0; di < decs.size() && ok; ++di) {
        const auto& dem = decs[di]->demand;
        input.assign(bcast.begin(), bcast.end());
        for (auto g : dem.given)
          for (std::size_t a = 0; a < k; ++a) input.push_back(x[g * k + a]);
        out = lrineq::apply(decs[di]->matrix, input);
        if (!std::equal(out.begin(), out.end(), x.begin() + static_cast<std::ptrdiff_t>(dem.want * k))) {
          ok = false;
          if (!part.witness) part.witness = SimulationWitness{t, x, di, out};
        }
      }
      ++part.tuples_checked;
      if (!ok) ++part.failing_tuples;
    }
    return part;
  };

  const unsigned workers = std::max(1u, opt.workers);
  std::vector<SimulationVerdict> parts(workers);
  {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] { parts[w] = run(count * w / workers, count * (w + 1) / workers); });
    }
  }
  for (const auto& part : parts) verdict = merge(std::move(verdict), part);
  return verdict;
}

// z_Y = H(X_Y, broadcast)/k for every Y ⊆ S, indexed by bitmask.
inline std::vector<Rational> entropy_point(const LinearIndexCode& code, std::size_t max_sources = 16) {
  const auto s = code.source_count();
  if (s > max_sources) throw std::invalid_argument("entropy point: too many sources");
  const auto k = code.block_length();
  std::vector<Rational> z(std::size_t{1} << s);
  for (SubsetMask y = 0; y < z.size(); ++y) {
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < s; ++i)
      if (y >> i & 1) members.push_back(i);
    const FpMatrix parts[] = {code.encoder(), detail::symbol_selector(code.modulus(), k, s, members)};
    auto r = rank(FpMatrix::stack(parts, code.modulus(), k * s));
    z[y] = Rational(static_cast<long>(r), static_cast<long>(k));
    z[y].canonicalize();
  }
  return z;
}

struct ReportEntry {
  std::string key;
  std::string description;
  Rational value;
};

// Closed-form capacity and rate figures for N_{A_n}, N_{B_n} and their powers.
// Every value is formula evaluation; nothing is computed from a network.
struct CapacityReport {
  int n = 0;
  int k = 0;
  std::vector<ReportEntry> entries;

  const Rational& at(const std::string& key) const {
    for (const auto& e : entries)
      if (e.key == key) return e.value;
    throw std::out_of_range("no report entry '" + key + "'");
  }
};

inline Rational rational_pow(const Rational& base, int k) {
  Rational r = 1;
  for (int i = 0; i < k; ++i) r *= base;
  return r;
}

inline CapacityReport capacity_report(int n, int k) {
  detail::check_n(n);
  if (k < 1) throw std::invalid_argument("capacity report needs k >= 1");
  auto q = [](std::int64_t a, std::int64_t b) { return make_rational(a, b); };
  const std::int64_t m = n;
  const auto a_den = 5 * m * m + 12 * m + 7;
  const auto a_num = 5 * m * m * m + 22 * m * m + 31 * m + 15;
  const auto b_den = m * m + 6 * m + 7;
  const auto b_num = m * m * m + 8 * m * m + 19 * m + 15;
  CapacityReport r{n, k, {}};
  auto add = [&](std::string key, std::string what, Rational v) {
    r.entries.push_back({std::move(key), std::move(what), std::move(v)});
  };
  add("rate_bound", "B(N) = 1/(|S| - r) for N_A and N_B in their solvable characteristic", q(1, m + 2));
  add("block_length", "message block length (n+2)^k of the scaled power", rational_pow(q(m + 2, 1), k));
  add("solution_broadcast", "broadcast length (n+2)^k of the power solution", rational_pow(q(m + 2, 1), k));
  add("extended_broadcast", "broadcast length (n+3)^k of the extended power code", rational_pow(q(m + 3, 1), k));
  add("case_i.lower", "linear capacity of N_A^k[(n+2)^k], char not dividing n, lower", rational_pow(q(m + 2, m + 3), k));
  add("case_i.upper", "linear capacity of N_A^k[(n+2)^k], char not dividing n, upper",
      rational_pow(q(a_num - 1, a_num), k));
  add("case_i.lp_bound", "LP bound for N_A^k under the non-dividing scheme", rational_pow(q(a_num, a_den), k));
  add("case_i.unscaled_upper", "linear capacity of N_A^k, char not dividing n, upper",
      rational_pow(q(a_den, a_num), k));
  add("case_ii.lower", "linear capacity of N_B^k[(n+2)^k], char dividing n, lower", rational_pow(q(m + 2, m + 3), k));
  add("case_ii.upper", "linear capacity of N_B^k[(n+2)^k], char dividing n, upper",
      rational_pow(q(b_num - 1, b_num), k));
  add("case_ii.lp_bound", "LP bound for N_B^k under the dividing scheme", rational_pow(q(b_num, b_den), k));
  add("case_ii.unscaled_upper", "linear capacity of N_B^k, char dividing n, upper", rational_pow(q(b_den, b_num), k));
  add("routing.single", "routing capacity of the characteristic-set sequence (quoted, unverified)",
      rational_pow(q(m + 2, 2 * m + 3), k));
  add("routing.product", "routing capacity of the product sequence (quoted, unverified)",
      rational_pow(q(m * m + 2 * m + 4, 4 * m * m + 12 * m + 9), k));
  return r;
}

}  // namespace lrineq
