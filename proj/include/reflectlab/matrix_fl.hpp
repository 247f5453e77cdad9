#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace reflectlab {

class MatrixFl;

// Result of row reduction; `reduced` is in reduced row echelon form.
struct RrefResult;

// Dense matrix over the prime field F_l with runtime modulus l.
// Entries are stored row-major, always reduced into [0, l).
// Immutable in spirit: operations return new matrices.
class MatrixFl {
 public:
  using Rref = RrefResult;

  MatrixFl(long l, std::size_t rows, std::size_t cols);
  static MatrixFl identity(long l, std::size_t n);
  static MatrixFl from_rows(long l,
                            const std::vector<std::vector<long>>& rows);
  // Permutation matrix: column j maps to row perm[j] (e_j -> e_perm[j]).
  static MatrixFl permutation(long l, const std::vector<int>& perm);

  long modulus() const { return l_; }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  long at(std::size_t i, std::size_t j) const;
  void set(std::size_t i, std::size_t j, long v);  // reduces mod l

  bool operator==(const MatrixFl& o) const;

  MatrixFl transpose() const;
  MatrixFl mul(const MatrixFl& o) const;
  MatrixFl add(const MatrixFl& o) const;
  MatrixFl sub(const MatrixFl& o) const;
  MatrixFl scale(long c) const;
  std::vector<long> apply(const std::vector<long>& v) const;  // A*v
  MatrixFl kron(const MatrixFl& o) const;  // Kronecker product
  MatrixFl hstack(const MatrixFl& o) const;
  MatrixFl vstack(const MatrixFl& o) const;

  Rref rref() const;
  std::size_t rank() const;
  bool is_invertible() const;
  std::optional<MatrixFl> inverse() const;

  // Independent vectors v with A v = 0; count = cols - rank.
  std::vector<std::vector<long>> kernel_basis() const;
  // Basis of the column space; count = rank.
  std::vector<std::vector<long>> image_basis() const;
  // Some x with A x = b, or nullopt when inconsistent.
  std::optional<std::vector<long>> solve(const std::vector<long>& b) const;

  std::string str() const;  // debugging aid

  // Modular inverse of a nonzero residue (extended Euclid).
  static long inv_mod(long a, long l);

 private:
  void check_same_field(const MatrixFl& o, const char* op) const;

  long l_;
  std::size_t rows_, cols_;
  std::vector<long> e_;
};

struct RrefResult {
  MatrixFl reduced;
  std::size_t rank;
  std::vector<std::size_t> pivot_cols;
};

}  // namespace reflectlab
