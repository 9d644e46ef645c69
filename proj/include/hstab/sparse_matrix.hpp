#pragma once

// Sparse integer matrices stored by column, with the textual triplet
// exchange format:   rows cols nnz \n (r c v \n)*   (zero-indexed).

#include <hstab/errors.hpp>
#include <hstab/integer.hpp>

#include <algorithm>
#include <istream>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

namespace hstab {

struct Triplet {
  std::size_t row = 0;
  std::size_t col = 0;
  Integer value;
};

using SparseColumn = std::vector<std::pair<std::uint32_t, Integer>>;  // sorted by row

class SparseIntMatrix {
 public:
  SparseIntMatrix() = default;
  SparseIntMatrix(std::size_t rows, std::size_t cols) : rows_(rows), columns_(cols) {}

  // Duplicate positions are summed; zeros dropped.
  static SparseIntMatrix from_triplets(std::size_t rows, std::size_t cols,
                                       std::vector<Triplet> entries) {
    SparseIntMatrix m(rows, cols);
    for (auto& t : entries) {
      if (t.row >= rows || t.col >= cols)
        throw InvalidInput("triplet (" + std::to_string(t.row) + "," + std::to_string(t.col) +
                           ") outside " + std::to_string(rows) + "x" + std::to_string(cols));
      m.columns_[t.col].emplace_back(static_cast<std::uint32_t>(t.row), std::move(t.value));
    }
    for (auto& c : m.columns_) canonicalize(c);
    return m;
  }

  static SparseIntMatrix diagonal(const std::vector<Integer>& d, std::size_t rows,
                                  std::size_t cols) {
    std::vector<Triplet> t;
    for (std::size_t i = 0; i < d.size(); ++i) t.push_back({i, i, d[i]});
    return from_triplets(rows, cols, std::move(t));
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return columns_.size(); }
  std::size_t nonzeros() const {
    std::size_t n = 0;
    for (const auto& c : columns_) n += c.size();
    return n;
  }
  bool is_zero() const { return nonzeros() == 0; }

  const SparseColumn& column(std::size_t j) const { return columns_.at(j); }
  const std::vector<SparseColumn>& columns() const { return columns_; }

  // Sets column j (entries may be unsorted / duplicated).
  void set_column(std::size_t j, SparseColumn c) {
    for (const auto& e : c)
      if (e.first >= rows_) throw InvalidInput("row index out of range");
    canonicalize(c);
    columns_.at(j) = std::move(c);
  }
  void append_column(SparseColumn c) {
    columns_.emplace_back();
    set_column(columns_.size() - 1, std::move(c));
  }

  Integer at(std::size_t r, std::size_t c) const {
    const auto& col = columns_.at(c);
    auto it = std::lower_bound(col.begin(), col.end(), r,
                               [](const auto& e, std::size_t x) { return e.first < x; });
    if (it != col.end() && it->first == r) return it->second;
    return 0;
  }

  // Entries in canonical (column, row) order.
  std::vector<Triplet> triplets() const {
    std::vector<Triplet> out;
    for (std::size_t j = 0; j < columns_.size(); ++j)
      for (const auto& [r, v] : columns_[j]) out.push_back({r, j, v});
    return out;
  }

  SparseIntMatrix transpose() const {
    std::vector<Triplet> t;
    for (std::size_t j = 0; j < columns_.size(); ++j)
      for (const auto& [r, v] : columns_[j]) t.push_back({j, r, v});
    return from_triplets(cols(), rows_, std::move(t));
  }

  // this * other
  SparseIntMatrix multiply(const SparseIntMatrix& other) const {
    if (cols() != other.rows())
      throw InvalidInput("shape mismatch in product: " + std::to_string(cols()) + " vs " +
                         std::to_string(other.rows()));
    SparseIntMatrix out(rows_, other.cols());
    std::vector<Integer> acc(rows_);
    std::vector<std::uint32_t> touched;
    std::vector<char> mark(rows_, 0);
    for (std::size_t j = 0; j < other.cols(); ++j) {
      touched.clear();
      for (const auto& [k, b] : other.columns_[j])
        for (const auto& [i, a] : columns_[k]) {
          if (!mark[i]) {
            mark[i] = 1;
            touched.push_back(i);
            acc[i] = 0;
          }
          acc[i] += a * b;
        }
      SparseColumn c;
      std::sort(touched.begin(), touched.end());
      for (auto i : touched) {
        mark[i] = 0;
        if (acc[i] != 0) c.emplace_back(i, acc[i]);
      }
      out.columns_[j] = std::move(c);
    }
    return out;
  }

  // Product with a dense column vector.
  std::vector<Integer> apply(const std::vector<Integer>& x) const {
    if (x.size() != cols()) throw InvalidInput("vector length mismatch");
    std::vector<Integer> y(rows_);
    for (std::size_t j = 0; j < cols(); ++j) {
      if (x[j] == 0) continue;
      for (const auto& [i, a] : columns_[j]) y[i] += a * x[j];
    }
    return y;
  }

  friend bool operator==(const SparseIntMatrix& a, const SparseIntMatrix& b) {
    return a.rows_ == b.rows_ && a.columns_ == b.columns_;
  }

  void write(std::ostream& os) const {
    os << rows_ << ' ' << cols() << ' ' << nonzeros() << '\n';
    for (std::size_t j = 0; j < columns_.size(); ++j)
      for (const auto& [r, v] : columns_[j]) os << r << ' ' << j << ' ' << v << '\n';
  }

  static SparseIntMatrix read(std::istream& is) {
    std::size_t rows = 0, cols = 0, nnz = 0;
    if (!(is >> rows >> cols >> nnz)) throw InvalidInput("matrix header `rows cols nnz` expected");
    std::vector<Triplet> t;
    t.reserve(nnz);
    for (std::size_t k = 0; k < nnz; ++k) {
      std::size_t r = 0, c = 0;
      std::string v;
      if (!(is >> r >> c >> v))
        throw InvalidInput("matrix entry " + std::to_string(k) + " missing");
      try {
        t.push_back({r, c, Integer(v)});
      } catch (const std::exception&) {
        throw InvalidInput("bad matrix value `" + v + "`");
      }
    }
    return from_triplets(rows, cols, std::move(t));
  }

 private:
  static void canonicalize(SparseColumn& c) {
    std::sort(c.begin(), c.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    SparseColumn out;
    out.reserve(c.size());
    for (auto& e : c) {
      if (!out.empty() && out.back().first == e.first)
        out.back().second += e.second;
      else
        out.push_back(std::move(e));
    }
    out.erase(std::remove_if(out.begin(), out.end(), [](const auto& e) { return e.second == 0; }),
              out.end());
    c = std::move(out);
  }

  std::size_t rows_ = 0;
  std::vector<SparseColumn> columns_;
};

}  // namespace hstab
