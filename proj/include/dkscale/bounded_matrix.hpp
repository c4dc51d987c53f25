#pragma once

#include <algorithm>
#include <numeric>
#include <queue>
#include <utility>
#include <stdexcept>
#include <string>
#include <vector>

#include "rational.hpp"

namespace dkscale {

/// Row sums, column sums and a uniform entry cap: find a nonnegative integer
/// matrix with those line sums and every entry <= cap.
struct BoundedMatrixInstance {
  std::vector<Count> row_sums;
  std::vector<Count> col_sums;
  Count cap = 0;
};

/// Dense row-major matrix of counts.
class CountMatrix {
 public:
  CountMatrix() = default;
  CountMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, 0) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  Count& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  Count operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  Count row_sum(std::size_t i) const {
    return std::accumulate(data_.begin() + static_cast<std::ptrdiff_t>(i * cols_),
                           data_.begin() + static_cast<std::ptrdiff_t>((i + 1) * cols_), Count{0});
  }
  Count col_sum(std::size_t j) const {
    Count s = 0;
    for (std::size_t i = 0; i < rows_; ++i) s += (*this)(i, j);
    return s;
  }

  friend bool operator==(const CountMatrix&, const CountMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Count> data_;
};

struct FeasibilityResult {
  enum class Failure { None, NegativeInput, SumMismatch, PrefixViolation };

  bool feasible = true;
  Failure failure = Failure::None;
  Count row_total = 0;
  Count col_total = 0;
  std::size_t prefix = 0;     // violating t (1-based)
  Count prefix_demand = 0;    // sum of the t largest column sums
  Count prefix_supply = 0;    // sum_i min(r_i, t * cap)

  explicit operator bool() const { return feasible; }
};

/// Realizability test. With columns sorted in decreasing order, a matrix
/// exists iff the totals agree and every prefix of t columns can be fed by
/// the rows, each row giving at most cap per column.
inline FeasibilityResult graphical(const BoundedMatrixInstance& inst) {
  FeasibilityResult r;
  auto any_negative = [](const std::vector<Count>& v) {
    return std::any_of(v.begin(), v.end(), [](Count x) { return x < 0; });
  };
  r.row_total = std::accumulate(inst.row_sums.begin(), inst.row_sums.end(), Count{0});
  r.col_total = std::accumulate(inst.col_sums.begin(), inst.col_sums.end(), Count{0});
  if (inst.cap < 0 || any_negative(inst.row_sums) || any_negative(inst.col_sums)) {
    r.feasible = false;
    r.failure = FeasibilityResult::Failure::NegativeInput;
    return r;
  }
  if (r.row_total != r.col_total) {
    r.feasible = false;
    r.failure = FeasibilityResult::Failure::SumMismatch;
    return r;
  }
  std::vector<Count> cols = inst.col_sums;
  std::sort(cols.begin(), cols.end(), std::greater<>());
  Count demand = 0;
  for (std::size_t t = 1; t <= cols.size(); ++t) {
    demand += cols[t - 1];
    if (cols[t - 1] == 0) break;  // later prefixes add no demand
    Count supply = 0;
    const Count per_row = static_cast<Count>(t) * inst.cap;
    for (Count ri : inst.row_sums) supply += std::min(ri, per_row);
    if (demand > supply) {
      r.feasible = false;
      r.failure = FeasibilityResult::Failure::PrefixViolation;
      r.prefix = t;
      r.prefix_demand = demand;
      r.prefix_supply = supply;
      return r;
    }
  }
  return r;
}

class ConstructionError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Throws ConstructionError unless m has the instance's line sums and
/// entries in [0, cap].
inline void check_construction(const BoundedMatrixInstance& inst, const CountMatrix& m) {
  if (m.rows() != inst.row_sums.size() || m.cols() != inst.col_sums.size())
    throw ConstructionError("construction invariant breach: shape");
  for (std::size_t i = 0; i < m.rows(); ++i) {
    if (m.row_sum(i) != inst.row_sums[i])
      throw ConstructionError("construction invariant breach: row " + std::to_string(i));
    for (std::size_t j = 0; j < m.cols(); ++j)
      if (m(i, j) < 0 || m(i, j) > inst.cap)
        throw ConstructionError("construction invariant breach: entry bound");
  }
  for (std::size_t j = 0; j < m.cols(); ++j)
    if (m.col_sum(j) != inst.col_sums[j])
      throw ConstructionError("construction invariant breach: column " + std::to_string(j));
}

/// Greedy fill: rows by decreasing sum; each row hands out its units one at
/// a time to the column with the largest remaining demand (ties to the lower
/// index), never more than cap into one cell. Leveling the columns this way
/// keeps the remainder feasible; filling whole cells up to cap does not.
inline CountMatrix construct(const BoundedMatrixInstance& inst) {
  if (auto f = graphical(inst); !f)
    throw std::invalid_argument("construct called on an infeasible instance");

  const std::size_t nr = inst.row_sums.size();
  const std::size_t nc = inst.col_sums.size();
  CountMatrix m(nr, nc);
  std::vector<Count> col_left = inst.col_sums;

  std::vector<std::size_t> row_order(nr);
  std::iota(row_order.begin(), row_order.end(), 0);
  std::stable_sort(row_order.begin(), row_order.end(),
                   [&](std::size_t x, std::size_t y) { return inst.row_sums[x] > inst.row_sums[y]; });

  // max-heap on (remaining demand, -index)
  using Slot = std::pair<Count, std::ptrdiff_t>;
  for (auto i : row_order) {
    std::priority_queue<Slot> open;
    for (std::size_t j = 0; j < nc; ++j)
      if (col_left[j] > 0 && inst.cap > 0) open.push({col_left[j], -static_cast<std::ptrdiff_t>(j)});
    for (Count left = inst.row_sums[i]; left > 0 && !open.empty(); --left) {
      auto [demand, neg] = open.top();
      open.pop();
      const auto j = static_cast<std::size_t>(-neg);
      ++m(i, j);
      --col_left[j];
      if (col_left[j] > 0 && m(i, j) < inst.cap) open.push({col_left[j], neg});
    }
  }
  check_construction(inst, m);
  return m;
}

/// Brute-force existence check by depth-first enumeration of every cell
/// value. Test oracle only; refuses instances with more than 1e7 candidate
/// matrices.
inline bool enumerate_feasible(const BoundedMatrixInstance& inst) {
  const std::size_t nr = inst.row_sums.size();
  const std::size_t nc = inst.col_sums.size();
  if (inst.cap < 0) return false;
  double space = 1.0;
  for (std::size_t c = 0; c < nr * nc; ++c) {
    space *= static_cast<double>(inst.cap + 1);
    if (space > 1e7) throw std::length_error("instance too large to enumerate");
  }
  std::vector<Count> row_left = inst.row_sums;
  std::vector<Count> col_left = inst.col_sums;

  auto dfs = [&](auto&& self, std::size_t cell) -> bool {
    if (cell == nr * nc) {
      return std::all_of(row_left.begin(), row_left.end(), [](Count x) { return x == 0; }) &&
             std::all_of(col_left.begin(), col_left.end(), [](Count x) { return x == 0; });
    }
    const std::size_t i = cell / nc;
    const std::size_t j = cell % nc;
    const Count hi = std::min({inst.cap, row_left[i], col_left[j]});
    for (Count v = 0; v <= hi; ++v) {
      row_left[i] -= v;
      col_left[j] -= v;
      // A line's last cell must meet its sum exactly.
      bool ok = (j + 1 < nc || row_left[i] == 0) && (i + 1 < nr || col_left[j] == 0);
      bool found = ok && self(self, cell + 1);
      row_left[i] += v;
      col_left[j] += v;
      if (found) return true;
    }
    return false;
  };
  if (nr == 0 || nc == 0) {
    auto zero = [](const std::vector<Count>& v) {
      return std::all_of(v.begin(), v.end(), [](Count x) { return x == 0; });
    };
    return zero(inst.row_sums) && zero(inst.col_sums);
  }
  return dfs(dfs, 0);
}

}  // namespace dkscale
