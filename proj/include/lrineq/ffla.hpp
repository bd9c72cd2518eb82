#pragma once

// Dense linear algebra over prime fields GF(p).

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <istream>
#include <optional>
#include <random>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace lrineq {

inline constexpr std::uint64_t kDefaultModulusLimit = std::uint64_t{1} << 31;

inline bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  if (n % 2 == 0) return n == 2;
  for (std::uint64_t d = 3; d * d <= n; d += 2) {
    if (n % d == 0) return false;
  }
  return true;
}

class PrimeModulus {
 public:
  using Scalar = std::uint32_t;

  explicit PrimeModulus(std::uint64_t p, std::uint64_t limit = kDefaultModulusLimit) {
    if (p < 2 || !is_prime(p)) {
      throw std::invalid_argument("modulus " + std::to_string(p) + " is not prime");
    }
    if (p >= limit) {
      throw std::invalid_argument("modulus " + std::to_string(p) + " exceeds limit " +
                                  std::to_string(limit));
    }
    p_ = static_cast<Scalar>(p);
  }

  Scalar value() const { return p_; }

  Scalar reduce(std::int64_t v) const {
    auto r = v % static_cast<std::int64_t>(p_);
    if (r < 0) r += p_;
    return static_cast<Scalar>(r);
  }
  Scalar add(Scalar a, Scalar b) const {
    std::uint64_t s = std::uint64_t{a} + b;
    return static_cast<Scalar>(s >= p_ ? s - p_ : s);
  }
  Scalar sub(Scalar a, Scalar b) const { return a >= b ? a - b : static_cast<Scalar>(a + (p_ - b)); }
  Scalar neg(Scalar a) const { return a == 0 ? 0 : p_ - a; }
  Scalar mul(Scalar a, Scalar b) const {
    return static_cast<Scalar>((std::uint64_t{a} * b) % p_);
  }
  Scalar pow(Scalar base, std::uint64_t e) const {
    Scalar result = 1 % p_;
    while (e > 0) {
      if (e & 1) result = mul(result, base);
      base = mul(base, base);
      e >>= 1;
    }
    return result;
  }
  Scalar inv(Scalar a) const {
    if (a % p_ == 0) throw std::domain_error("inverse of zero in GF(p)");
    return pow(a, p_ - 2);
  }
  bool divides(std::uint64_t n) const { return n % p_ == 0; }

  friend bool operator==(const PrimeModulus&, const PrimeModulus&) = default;

 private:
  Scalar p_ = 2;
};

class FpMatrix {
 public:
  using Scalar = PrimeModulus::Scalar;

  FpMatrix(PrimeModulus mod, std::size_t rows, std::size_t cols)
      : mod_(mod), rows_(rows), cols_(cols), data_(rows * cols, 0) {}

  // Entries may be any integers; they are reduced mod p.
  static FpMatrix from_rows(PrimeModulus mod, std::size_t cols,
                            const std::vector<std::vector<std::int64_t>>& rows) {
    FpMatrix m(mod, rows.size(), cols);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != cols) throw std::invalid_argument("ragged matrix rows");
      for (std::size_t j = 0; j < cols; ++j) m.set(i, j, rows[i][j]);
    }
    return m;
  }

  static FpMatrix identity(PrimeModulus mod, std::size_t n) {
    FpMatrix m(mod, n, n);
    for (std::size_t i = 0; i < n; ++i) m.data_[i * n + i] = 1;
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  const PrimeModulus& modulus() const { return mod_; }

  Scalar operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
  void set(std::size_t i, std::size_t j, std::int64_t v) { data_[i * cols_ + j] = mod_.reduce(v); }

  std::span<const Scalar> row(std::size_t i) const {
    return {data_.data() + i * cols_, cols_};
  }
  std::span<Scalar> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }

  bool is_zero() const {
    return std::all_of(data_.begin(), data_.end(), [](Scalar v) { return v == 0; });
  }

  FpMatrix transpose() const {
    FpMatrix t(mod_, cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t.data_[j * rows_ + i] = data_[i * cols_ + j];
    return t;
  }

  FpMatrix select_columns(std::span<const std::size_t> columns) const {
    FpMatrix out(mod_, rows_, columns.size());
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t k = 0; k < columns.size(); ++k)
        out.data_[i * columns.size() + k] = data_[i * cols_ + columns[k]];
    return out;
  }

  FpMatrix select_rows(std::span<const std::size_t> which) const {
    FpMatrix out(mod_, which.size(), cols_);
    for (std::size_t k = 0; k < which.size(); ++k)
      std::copy_n(data_.begin() + which[k] * cols_, cols_, out.data_.begin() + k * cols_);
    return out;
  }

  FpMatrix top_rows(std::size_t count) const {
    FpMatrix out(mod_, count, cols_);
    std::copy_n(data_.begin(), count * cols_, out.data_.begin());
    return out;
  }

  // Vertical concatenation; column counts and moduli must agree.
  static FpMatrix stack(std::span<const FpMatrix> parts, PrimeModulus mod, std::size_t cols) {
    std::size_t total = 0;
    for (const auto& p : parts) {
      if (p.cols_ != cols || !(p.mod_ == mod)) throw std::invalid_argument("stack: shape mismatch");
      total += p.rows_;
    }
    FpMatrix out(mod, total, cols);
    auto it = out.data_.begin();
    for (const auto& p : parts) it = std::copy(p.data_.begin(), p.data_.end(), it);
    return out;
  }

  void append_row(std::span<const Scalar> r) {
    if (r.size() != cols_) throw std::invalid_argument("append_row: width mismatch");
    data_.insert(data_.end(), r.begin(), r.end());
    ++rows_;
  }

  friend bool operator==(const FpMatrix&, const FpMatrix&) = default;

 private:
  PrimeModulus mod_;
  std::size_t rows_;
  std::size_t cols_;
  std::vector<Scalar> data_;
};

struct RrefResult {
  FpMatrix reduced;
  std::vector<std::size_t> pivot_columns;
  std::size_t rank = 0;
};

// Gauss-Jordan elimination. Pivot choice is the first nonzero entry in the
// column, so the output is reproducible (and the RREF is unique anyway).
inline RrefResult rref(const FpMatrix& m) {
  const auto& mod = m.modulus();
  FpMatrix r = m;
  std::vector<std::size_t> pivots;
  std::size_t lead = 0;
  for (std::size_t col = 0; col < r.cols() && lead < r.rows(); ++col) {
    std::size_t sel = lead;
    while (sel < r.rows() && r(sel, col) == 0) ++sel;
    if (sel == r.rows()) continue;
    if (sel != lead) {
      auto a = r.row(sel);
      auto b = r.row(lead);
      std::swap_ranges(a.begin(), a.end(), b.begin());
    }
    auto prow = r.row(lead);
    if (auto inv = mod.inv(prow[col]); inv != 1) {
      for (std::size_t j = col; j < r.cols(); ++j) prow[j] = mod.mul(prow[j], inv);
    }
    for (std::size_t i = 0; i < r.rows(); ++i) {
      if (i == lead) continue;
      auto row = r.row(i);
      auto f = row[col];
      if (f == 0) continue;
      for (std::size_t j = col; j < r.cols(); ++j) {
        if (prow[j] != 0) row[j] = mod.sub(row[j], mod.mul(f, prow[j]));
      }
    }
    pivots.push_back(col);
    ++lead;
  }
  auto rk = pivots.size();
  return {std::move(r), std::move(pivots), rk};
}

inline std::size_t rank(const FpMatrix& m) { return rref(m).rank; }

// Basis of the right null space {x : m x = 0}, one vector per row.
inline FpMatrix kernel(const FpMatrix& m) {
  const auto& mod = m.modulus();
  auto [r, pivots, rk] = rref(m);
  std::vector<bool> is_pivot(m.cols(), false);
  for (auto c : pivots) is_pivot[c] = true;
  FpMatrix out(mod, m.cols() - rk, m.cols());
  std::size_t k = 0;
  for (std::size_t f = 0; f < m.cols(); ++f) {
    if (is_pivot[f]) continue;
    auto v = out.row(k++);
    v[f] = 1;
    for (std::size_t i = 0; i < rk; ++i) v[pivots[i]] = mod.neg(r(i, f));
  }
  return out;
}

inline FpMatrix matmul(const FpMatrix& a, const FpMatrix& b) {
  if (!(a.modulus() == b.modulus())) throw std::invalid_argument("matmul: modulus mismatch");
  if (a.cols() != b.rows()) throw std::invalid_argument("matmul: dimension mismatch");
  const auto& mod = a.modulus();
  const std::uint64_t p = mod.value();
  FpMatrix c(mod, a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    auto out = c.row(i);
    std::vector<std::uint64_t> acc(b.cols(), 0);
    for (std::size_t k = 0; k < a.cols(); ++k) {
      std::uint64_t f = a(i, k);
      if (f == 0) continue;
      auto brow = b.row(k);
      for (std::size_t j = 0; j < b.cols(); ++j) acc[j] = (acc[j] + f * brow[j]) % p;
    }
    for (std::size_t j = 0; j < b.cols(); ++j) out[j] = static_cast<FpMatrix::Scalar>(acc[j]);
  }
  return c;
}

// y = m x for a column vector x.
inline std::vector<FpMatrix::Scalar> apply(const FpMatrix& m, std::span<const FpMatrix::Scalar> x) {
  if (x.size() != m.cols()) throw std::invalid_argument("apply: dimension mismatch");
  const std::uint64_t p = m.modulus().value();
  std::vector<FpMatrix::Scalar> y(m.rows(), 0);
  for (std::size_t i = 0; i < m.rows(); ++i) {
    std::uint64_t acc = 0;
    auto r = m.row(i);
    for (std::size_t j = 0; j < m.cols(); ++j) acc = (acc + std::uint64_t{r[j]} * x[j]) % p;
    y[i] = static_cast<FpMatrix::Scalar>(acc);
  }
  return y;
}

// Some X with a X = b, or nullopt when the system is inconsistent.
// Free variables are set to zero.
inline std::optional<FpMatrix> solve(const FpMatrix& a, const FpMatrix& b) {
  if (a.rows() != b.rows()) throw std::invalid_argument("solve: row mismatch");
  const auto& mod = a.modulus();
  FpMatrix aug(mod, a.rows(), a.cols() + b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    auto r = aug.row(i);
    std::copy(a.row(i).begin(), a.row(i).end(), r.begin());
    std::copy(b.row(i).begin(), b.row(i).end(), r.begin() + static_cast<std::ptrdiff_t>(a.cols()));
  }
  auto [r, pivots, rk] = rref(aug);
  if (rk > 0 && pivots.back() >= a.cols()) return std::nullopt;
  FpMatrix x(mod, a.cols(), b.cols());
  for (std::size_t i = 0; i < rk; ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) x.row(pivots[i])[j] = r(i, a.cols() + j);
  return x;
}

template <class Rng>
FpMatrix random_matrix(PrimeModulus mod, std::size_t rows, std::size_t cols, Rng& rng) {
  FpMatrix m(mod, rows, cols);
  std::uniform_int_distribution<std::uint32_t> dist(0, mod.value() - 1);
  for (std::size_t i = 0; i < rows; ++i)
    for (auto& v : m.row(i)) v = dist(rng);
  return m;
}

template <class Rng>
FpMatrix random_invertible(PrimeModulus mod, std::size_t n, Rng& rng) {
  for (;;) {
    auto m = random_matrix(mod, n, n, rng);
    if (rank(m) == n) return m;
  }
}

// Text format: "p rows cols" then row-major entries, whitespace separated.
inline std::string to_text(const FpMatrix& m) {
  std::ostringstream os;
  os << m.modulus().value() << ' ' << m.rows() << ' ' << m.cols() << '\n';
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) os << (j ? " " : "") << m(i, j);
    os << '\n';
  }
  return os.str();
}

inline FpMatrix read_matrix(std::istream& in) {
  std::int64_t p = 0, rows = -1, cols = -1;
  if (!(in >> p >> rows >> cols) || rows < 0 || cols < 0) {
    throw std::invalid_argument("matrix text: bad header, expected 'p rows cols'");
  }
  PrimeModulus mod(static_cast<std::uint64_t>(p));
  FpMatrix m(mod, static_cast<std::size_t>(rows), static_cast<std::size_t>(cols));
  for (std::int64_t i = 0; i < rows; ++i) {
    for (std::int64_t j = 0; j < cols; ++j) {
      std::int64_t v;
      if (!(in >> v)) throw std::invalid_argument("matrix text: truncated entries");
      m.set(static_cast<std::size_t>(i), static_cast<std::size_t>(j), v);
    }
  }
  return m;
}

inline FpMatrix parse_matrix(const std::string& text) {
  std::istringstream in(text);
  return read_matrix(in);
}

}  // namespace lrineq
