// Exact integer linear algebra: dense matrices over Z, echelon and Smith
// forms, kernels, saturations and lattice membership.
#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstddef>
#include <initializer_list>
#include <optional>
#include <string>
#include <concepts>
#include <vector>

namespace nzs {

using Int = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;
using IntVector = std::vector<Int>;

class IntMatrix {
public:
    IntMatrix() = default;
    IntMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
    IntMatrix(std::initializer_list<std::initializer_list<long>> rows);

    static IntMatrix identity(std::size_t n);
    static IntMatrix from_columns(const std::vector<IntVector>& cols, std::size_t rows);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool empty() const { return rows_ == 0 || cols_ == 0; }

    Int& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const Int& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    IntVector column(std::size_t c) const;
    IntVector row(std::size_t r) const;
    void set_column(std::size_t c, const IntVector& v);

    IntMatrix transpose() const;
    IntMatrix columns(std::size_t first, std::size_t count) const;
    IntMatrix rows_range(std::size_t first, std::size_t count) const;
    bool is_zero() const;

    bool operator==(const IntMatrix& o) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Int> data_;
};

IntMatrix operator*(const IntMatrix& a, const IntMatrix& b);
IntVector operator*(const IntMatrix& a, const IntVector& v);
IntMatrix operator+(const IntMatrix& a, const IntMatrix& b);
IntMatrix operator-(const IntMatrix& a, const IntMatrix& b);
IntMatrix scaled(const Int& s, const IntMatrix& a);
// Exact scalar type only, so that unrelated expression types never try to convert.
template <class S>
    requires std::same_as<S, Int>
IntMatrix operator*(const S& s, const IntMatrix& a)
{
    return scaled(s, a);
}
IntMatrix hconcat(const IntMatrix& a, const IntMatrix& b);
IntMatrix vconcat(const IntMatrix& a, const IntMatrix& b);
IntMatrix block_diagonal(const std::vector<IntMatrix>& blocks);

IntVector add(const IntVector& a, const IntVector& b);
IntVector sub(const IntVector& a, const IntVector& b);
IntVector scale(const Int& s, const IntVector& a);
Int dot(const IntVector& a, const IntVector& b);
bool is_zero(const IntVector& v);

// x^T A y
Int bilinear(const IntVector& x, const IntMatrix& a, const IntVector& y);

// V * A = R with V unimodular and R in row echelon form (pivots positive,
// entries above pivots reduced). Vinv is kept alongside.
struct RowEchelon {
    IntMatrix R;
    IntMatrix V;
    IntMatrix Vinv;
    std::size_t rank = 0;
    std::vector<std::size_t> pivot_cols;
};
RowEchelon row_echelon(const IntMatrix& a);

// U * A * V = D, D diagonal with d_1 | d_2 | ... and nonnegative entries.
struct SmithForm {
    IntMatrix D;
    IntMatrix U;
    IntMatrix V;
    std::vector<Int> diagonal;  // nonzero invariant factors
    std::size_t rank() const { return diagonal.size(); }
};
SmithForm smith_normal_form(const IntMatrix& a);

std::size_t rank(const IntMatrix& a);

// Columns form a Z-basis of {x in Z^cols : A x = 0}.
IntMatrix kernel_basis(const IntMatrix& a);
// Rows y with y A = 0, as columns of the returned matrix.
IntMatrix left_kernel_basis(const IntMatrix& a);
// Z-basis (columns) of the lattice generated by the columns of a.
IntMatrix image_basis(const IntMatrix& a);
// Z-basis of (Q-span of columns) ∩ Z^rows.
IntMatrix saturation(const IntMatrix& gens);

// Integer solution of A x = b if one exists.
std::optional<IntVector> solve_integer(const IntMatrix& a, const IntVector& b);
// Rational solution of A x = b if one exists.
std::optional<std::vector<Rational>> solve_rational(const IntMatrix& a, const IntVector& b);

bool in_lattice(const IntMatrix& basis, const IntVector& v);
bool in_rational_span(const IntMatrix& gens, const IntVector& v);
bool same_lattice(const IntMatrix& a, const IntMatrix& b);

// Invariant factors > 1 of the lattice spanned by gens inside its saturation.
std::vector<Int> torsion_factors(const IntMatrix& gens);

// Unimodular W with W * K = [I; 0]; K must have saturated, independent columns.
struct Complement {
    IntMatrix projection;  // last rows of W: kills K, onto Z^(d-k)
    IntMatrix section;     // columns of W^{-1}: projection * section = I
};
Complement complement_of(const IntMatrix& k);

std::string to_string(const IntVector& v);
long to_long(const Int& x);

}  // namespace nzs
