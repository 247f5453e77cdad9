#include "reflectlab/matrix_fl.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace reflectlab {

namespace {

bool is_prime(long n) {
  if (n < 2) return false;
  for (long d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

long reduce(long v, long l) {
  long r = v % l;
  return r < 0 ? r + l : r;
}

}  // namespace

MatrixFl::MatrixFl(long l, std::size_t rows, std::size_t cols)
    : l_(l), rows_(rows), cols_(cols), e_(rows * cols, 0) {
  if (!is_prime(l)) {
    throw std::invalid_argument("MatrixFl: modulus " + std::to_string(l) +
                                " is not prime");
  }
}

MatrixFl MatrixFl::identity(long l, std::size_t n) {
  MatrixFl m(l, n, n);
  for (std::size_t i = 0; i < n; ++i) m.e_[i * n + i] = 1 % l;
  return m;
}

MatrixFl MatrixFl::from_rows(long l,
                             const std::vector<std::vector<long>>& rows) {
  std::size_t r = rows.size();
  std::size_t c = r == 0 ? 0 : rows[0].size();
  for (const auto& row : rows) {
    if (row.size() != c)
      throw std::invalid_argument("MatrixFl::from_rows: ragged rows");
  }
  MatrixFl m(l, r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) m.e_[i * c + j] = reduce(rows[i][j], l);
  return m;
}

MatrixFl MatrixFl::permutation(long l, const std::vector<int>& perm) {
  std::size_t n = perm.size();
  std::vector<bool> seen(n, false);
  MatrixFl m(l, n, n);
  for (std::size_t j = 0; j < n; ++j) {
    int i = perm[j];
    if (i < 0 || static_cast<std::size_t>(i) >= n || seen[i])
      throw std::invalid_argument("MatrixFl::permutation: not a permutation");
    seen[i] = true;
    m.e_[static_cast<std::size_t>(i) * n + j] = 1 % l;
  }
  return m;
}

long MatrixFl::at(std::size_t i, std::size_t j) const {
  if (i >= rows_ || j >= cols_)
    throw std::invalid_argument("MatrixFl::at: index out of range");
  return e_[i * cols_ + j];
}

void MatrixFl::set(std::size_t i, std::size_t j, long v) {
  if (i >= rows_ || j >= cols_)
    throw std::invalid_argument("MatrixFl::set: index out of range");
  e_[i * cols_ + j] = reduce(v, l_);
}

bool MatrixFl::operator==(const MatrixFl& o) const {
  return l_ == o.l_ && rows_ == o.rows_ && cols_ == o.cols_ && e_ == o.e_;
}

void MatrixFl::check_same_field(const MatrixFl& o, const char* op) const {
  if (l_ != o.l_)
    throw std::invalid_argument(std::string("MatrixFl::") + op +
                                ": mixed moduli " + std::to_string(l_) +
                                " vs " + std::to_string(o.l_));
}

MatrixFl MatrixFl::transpose() const {
  MatrixFl t(l_, cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j)
      t.e_[j * rows_ + i] = e_[i * cols_ + j];
  return t;
}

MatrixFl MatrixFl::mul(const MatrixFl& o) const {
  check_same_field(o, "mul");
  if (cols_ != o.rows_)
    throw std::invalid_argument("MatrixFl::mul: dimension mismatch");
  MatrixFl r(l_, rows_, o.cols_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t k = 0; k < cols_; ++k) {
      long a = e_[i * cols_ + k];
      if (a == 0) continue;
      for (std::size_t j = 0; j < o.cols_; ++j) {
        r.e_[i * o.cols_ + j] =
            (r.e_[i * o.cols_ + j] + a * o.e_[k * o.cols_ + j]) % l_;
      }
    }
  return r;
}

MatrixFl MatrixFl::add(const MatrixFl& o) const {
  check_same_field(o, "add");
  if (rows_ != o.rows_ || cols_ != o.cols_)
    throw std::invalid_argument("MatrixFl::add: dimension mismatch");
  MatrixFl r(l_, rows_, cols_);
  for (std::size_t i = 0; i < e_.size(); ++i) r.e_[i] = (e_[i] + o.e_[i]) % l_;
  return r;
}

MatrixFl MatrixFl::sub(const MatrixFl& o) const {
  check_same_field(o, "sub");
  if (rows_ != o.rows_ || cols_ != o.cols_)
    throw std::invalid_argument("MatrixFl::sub: dimension mismatch");
  MatrixFl r(l_, rows_, cols_);
  for (std::size_t i = 0; i < e_.size(); ++i)
    r.e_[i] = reduce(e_[i] - o.e_[i], l_);
  return r;
}

MatrixFl MatrixFl::scale(long c) const {
  long cc = reduce(c, l_);
  MatrixFl r(l_, rows_, cols_);
  for (std::size_t i = 0; i < e_.size(); ++i) r.e_[i] = (e_[i] * cc) % l_;
  return r;
}

std::vector<long> MatrixFl::apply(const std::vector<long>& v) const {
  if (v.size() != cols_)
    throw std::invalid_argument("MatrixFl::apply: dimension mismatch");
  std::vector<long> out(rows_, 0);
  for (std::size_t i = 0; i < rows_; ++i) {
    long acc = 0;
    for (std::size_t j = 0; j < cols_; ++j)
      acc = (acc + e_[i * cols_ + j] * reduce(v[j], l_)) % l_;
    out[i] = acc;
  }
  return out;
}

MatrixFl MatrixFl::kron(const MatrixFl& o) const {
  check_same_field(o, "kron");
  MatrixFl r(l_, rows_ * o.rows_, cols_ * o.cols_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) {
      long a = e_[i * cols_ + j];
      if (a == 0) continue;
      for (std::size_t p = 0; p < o.rows_; ++p)
        for (std::size_t q = 0; q < o.cols_; ++q) {
          r.e_[(i * o.rows_ + p) * r.cols_ + (j * o.cols_ + q)] =
              (a * o.e_[p * o.cols_ + q]) % l_;
        }
    }
  return r;
}

MatrixFl MatrixFl::hstack(const MatrixFl& o) const {
  check_same_field(o, "hstack");
  if (rows_ != o.rows_)
    throw std::invalid_argument("MatrixFl::hstack: row count mismatch");
  MatrixFl r(l_, rows_, cols_ + o.cols_);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = 0; j < cols_; ++j)
      r.e_[i * r.cols_ + j] = e_[i * cols_ + j];
    for (std::size_t j = 0; j < o.cols_; ++j)
      r.e_[i * r.cols_ + cols_ + j] = o.e_[i * o.cols_ + j];
  }
  return r;
}

MatrixFl MatrixFl::vstack(const MatrixFl& o) const {
  check_same_field(o, "vstack");
  if (cols_ != o.cols_)
    throw std::invalid_argument("MatrixFl::vstack: column count mismatch");
  MatrixFl r(l_, rows_ + o.rows_, cols_);
  std::copy(e_.begin(), e_.end(), r.e_.begin());
  std::copy(o.e_.begin(), o.e_.end(), r.e_.begin() + e_.size());
  return r;
}

long MatrixFl::inv_mod(long a, long l) {
  a = reduce(a, l);
  if (a == 0) throw std::invalid_argument("inv_mod: zero residue");
  long t = 0, new_t = 1, r = l, new_r = a;
  while (new_r != 0) {
    long q = r / new_r;
    long tmp = t - q * new_t;
    t = new_t;
    new_t = tmp;
    tmp = r - q * new_r;
    r = new_r;
    new_r = tmp;
  }
  return reduce(t, l);
}

MatrixFl::Rref MatrixFl::rref() const {
  MatrixFl m = *this;
  std::vector<std::size_t> pivots;
  std::size_t row = 0;
  for (std::size_t col = 0; col < cols_ && row < rows_; ++col) {
    std::size_t sel = row;
    while (sel < rows_ && m.e_[sel * cols_ + col] == 0) ++sel;
    if (sel == rows_) continue;
    for (std::size_t j = 0; j < cols_; ++j)
      std::swap(m.e_[sel * cols_ + j], m.e_[row * cols_ + j]);
    long inv = inv_mod(m.e_[row * cols_ + col], l_);
    for (std::size_t j = 0; j < cols_; ++j)
      m.e_[row * cols_ + j] = (m.e_[row * cols_ + j] * inv) % l_;
    for (std::size_t i = 0; i < rows_; ++i) {
      if (i == row) continue;
      long f = m.e_[i * cols_ + col];
      if (f == 0) continue;
      for (std::size_t j = 0; j < cols_; ++j) {
        m.e_[i * cols_ + j] =
            reduce(m.e_[i * cols_ + j] - f * m.e_[row * cols_ + j], l_);
      }
    }
    pivots.push_back(col);
    ++row;
  }
  return Rref{std::move(m), pivots.size(), std::move(pivots)};
}

std::size_t MatrixFl::rank() const { return rref().rank; }

bool MatrixFl::is_invertible() const {
  return rows_ == cols_ && rank() == rows_;
}

std::optional<MatrixFl> MatrixFl::inverse() const {
  if (rows_ != cols_) return std::nullopt;
  Rref r = hstack(identity(l_, rows_)).rref();
  for (std::size_t i = 0; i < rows_; ++i)
    if (r.reduced.at(i, i) != 1 % l_) return std::nullopt;
  MatrixFl inv(l_, rows_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < rows_; ++j)
      inv.e_[i * rows_ + j] = r.reduced.at(i, cols_ + j);
  return inv;
}

std::vector<std::vector<long>> MatrixFl::kernel_basis() const {
  Rref r = rref();
  std::vector<bool> is_pivot(cols_, false);
  for (std::size_t p : r.pivot_cols) is_pivot[p] = true;
  std::vector<std::vector<long>> basis;
  for (std::size_t free = 0; free < cols_; ++free) {
    if (is_pivot[free]) continue;
    std::vector<long> v(cols_, 0);
    v[free] = 1;
    for (std::size_t k = 0; k < r.pivot_cols.size(); ++k) {
      // pivot row k: x_pivot = -sum(entries at free columns)
      v[r.pivot_cols[k]] = reduce(-r.reduced.at(k, free), l_);
    }
    basis.push_back(std::move(v));
  }
  return basis;
}

std::vector<std::vector<long>> MatrixFl::image_basis() const {
  Rref r = transpose().rref();
  std::vector<std::vector<long>> basis;
  for (std::size_t i = 0; i < r.rank; ++i) {
    std::vector<long> v(rows_);
    for (std::size_t j = 0; j < rows_; ++j) v[j] = r.reduced.at(i, j);
    basis.push_back(std::move(v));
  }
  return basis;
}

std::optional<std::vector<long>> MatrixFl::solve(
    const std::vector<long>& b) const {
  if (b.size() != rows_)
    throw std::invalid_argument("MatrixFl::solve: dimension mismatch");
  MatrixFl bm(l_, rows_, 1);
  for (std::size_t i = 0; i < rows_; ++i) bm.e_[i] = reduce(b[i], l_);
  Rref r = hstack(bm).rref();
  // Inconsistent iff a pivot lands in the appended column.
  for (std::size_t p : r.pivot_cols)
    if (p == cols_) return std::nullopt;
  std::vector<long> x(cols_, 0);
  for (std::size_t k = 0; k < r.pivot_cols.size(); ++k)
    x[r.pivot_cols[k]] = r.reduced.at(k, cols_);
  return x;
}

std::string MatrixFl::str() const {
  std::ostringstream os;
  os << rows_ << "x" << cols_ << " mod " << l_ << "\n";
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = 0; j < cols_; ++j)
      os << (j ? " " : "[") << e_[i * cols_ + j];
    os << "]\n";
  }
  return os.str();
}

}  // namespace reflectlab
