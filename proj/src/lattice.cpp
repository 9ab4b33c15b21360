#include "nzs/lattice.hpp"

#include <algorithm>
#include <stdexcept>
#include <utility>

namespace nzs {

IntMatrix::IntMatrix(std::initializer_list<std::initializer_list<long>> rows)
{
    rows_ = rows.size();
    cols_ = rows_ ? rows.begin()->size() : 0;
    data_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
        if (r.size() != cols_) throw std::invalid_argument("ragged matrix literal");
        for (long x : r) data_.emplace_back(x);
    }
}

IntMatrix IntMatrix::identity(std::size_t n)
{
    IntMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
}

IntMatrix IntMatrix::from_columns(const std::vector<IntVector>& cols, std::size_t rows)
{
    IntMatrix m(rows, cols.size());
    for (std::size_t c = 0; c < cols.size(); ++c) m.set_column(c, cols[c]);
    return m;
}

IntVector IntMatrix::column(std::size_t c) const
{
    IntVector v(rows_);
    for (std::size_t r = 0; r < rows_; ++r) v[r] = (*this)(r, c);
    return v;
}

IntVector IntMatrix::row(std::size_t r) const
{
    return IntVector(data_.begin() + r * cols_, data_.begin() + (r + 1) * cols_);
}

void IntMatrix::set_column(std::size_t c, const IntVector& v)
{
    if (v.size() != rows_) throw std::invalid_argument("column length mismatch");
    for (std::size_t r = 0; r < rows_; ++r) (*this)(r, c) = v[r];
}

IntMatrix IntMatrix::transpose() const
{
    IntMatrix t(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
    return t;
}

IntMatrix IntMatrix::columns(std::size_t first, std::size_t count) const
{
    IntMatrix m(rows_, count);
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t c = 0; c < count; ++c) m(r, c) = (*this)(r, first + c);
    return m;
}

IntMatrix IntMatrix::rows_range(std::size_t first, std::size_t count) const
{
    IntMatrix m(count, cols_);
    for (std::size_t r = 0; r < count; ++r)
        for (std::size_t c = 0; c < cols_; ++c) m(r, c) = (*this)(first + r, c);
    return m;
}

bool IntMatrix::is_zero() const
{
    return std::all_of(data_.begin(), data_.end(), [](const Int& x) { return x == 0; });
}

IntMatrix operator*(const IntMatrix& a, const IntMatrix& b)
{
    if (a.cols() != b.rows()) throw std::invalid_argument("matrix product shape mismatch");
    IntMatrix m(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const Int& x = a(i, k);
            if (x == 0) continue;
            for (std::size_t j = 0; j < b.cols(); ++j)
                if (b(k, j) != 0) m(i, j) += x * b(k, j);
        }
    return m;
}

IntVector operator*(const IntMatrix& a, const IntVector& v)
{
    if (a.cols() != v.size()) throw std::invalid_argument("matrix-vector shape mismatch");
    IntVector out(a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k)
            if (a(i, k) != 0 && v[k] != 0) out[i] += a(i, k) * v[k];
    return out;
}

IntMatrix operator+(const IntMatrix& a, const IntMatrix& b)
{
    if (a.rows() != b.rows() || a.cols() != b.cols()) throw std::invalid_argument("shape mismatch");
    IntMatrix m(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) m(i, j) = a(i, j) + b(i, j);
    return m;
}

IntMatrix operator-(const IntMatrix& a, const IntMatrix& b)
{
    if (a.rows() != b.rows() || a.cols() != b.cols()) throw std::invalid_argument("shape mismatch");
    IntMatrix m(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) m(i, j) = a(i, j) - b(i, j);
    return m;
}

IntMatrix scaled(const Int& s, const IntMatrix& a)
{
    IntMatrix m = a;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) m(i, j) *= s;
    return m;
}

IntMatrix hconcat(const IntMatrix& a, const IntMatrix& b)
{
    if (a.cols() == 0) return b;
    if (b.cols() == 0) return a;
    if (a.rows() != b.rows()) throw std::invalid_argument("hconcat row mismatch");
    IntMatrix m(a.rows(), a.cols() + b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) m(i, j) = a(i, j);
        for (std::size_t j = 0; j < b.cols(); ++j) m(i, a.cols() + j) = b(i, j);
    }
    return m;
}

IntMatrix vconcat(const IntMatrix& a, const IntMatrix& b)
{
    return hconcat(a.transpose(), b.transpose()).transpose();
}

IntMatrix block_diagonal(const std::vector<IntMatrix>& blocks)
{
    std::size_t r = 0, c = 0;
    for (const auto& b : blocks) {
        r += b.rows();
        c += b.cols();
    }
    IntMatrix m(r, c);
    std::size_t r0 = 0, c0 = 0;
    for (const auto& b : blocks) {
        for (std::size_t i = 0; i < b.rows(); ++i)
            for (std::size_t j = 0; j < b.cols(); ++j) m(r0 + i, c0 + j) = b(i, j);
        r0 += b.rows();
        c0 += b.cols();
    }
    return m;
}

IntVector add(const IntVector& a, const IntVector& b)
{
    IntVector out(a);
    for (std::size_t i = 0; i < a.size(); ++i) out[i] += b[i];
    return out;
}

IntVector sub(const IntVector& a, const IntVector& b)
{
    IntVector out(a);
    for (std::size_t i = 0; i < a.size(); ++i) out[i] -= b[i];
    return out;
}

IntVector scale(const Int& s, const IntVector& a)
{
    IntVector out(a);
    for (auto& x : out) x *= s;
    return out;
}

Int dot(const IntVector& a, const IntVector& b)
{
    Int s = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] != 0 && b[i] != 0) s += a[i] * b[i];
    return s;
}

bool is_zero(const IntVector& v)
{
    return std::all_of(v.begin(), v.end(), [](const Int& x) { return x == 0; });
}

Int bilinear(const IntVector& x, const IntMatrix& a, const IntVector& y)
{
    return dot(x, a * y);
}

namespace {

// Row operations applied to R and V, with the inverse column operation on Vinv.
struct RowOps {
    IntMatrix& R;
    IntMatrix& V;
    IntMatrix& Vinv;

    void swap_rows(std::size_t a, std::size_t b)
    {
        if (a == b) return;
        for (std::size_t c = 0; c < R.cols(); ++c) std::swap(R(a, c), R(b, c));
        for (std::size_t c = 0; c < V.cols(); ++c) std::swap(V(a, c), V(b, c));
        for (std::size_t r = 0; r < Vinv.rows(); ++r) std::swap(Vinv(r, a), Vinv(r, b));
    }
    void negate_row(std::size_t a)
    {
        for (std::size_t c = 0; c < R.cols(); ++c) R(a, c) = -R(a, c);
        for (std::size_t c = 0; c < V.cols(); ++c) V(a, c) = -V(a, c);
        for (std::size_t r = 0; r < Vinv.rows(); ++r) Vinv(r, a) = -Vinv(r, a);
    }
    // row a += q * row b
    void add_row(std::size_t a, std::size_t b, const Int& q)
    {
        if (q == 0) return;
        for (std::size_t c = 0; c < R.cols(); ++c)
            if (R(b, c) != 0) R(a, c) += q * R(b, c);
        for (std::size_t c = 0; c < V.cols(); ++c)
            if (V(b, c) != 0) V(a, c) += q * V(b, c);
        for (std::size_t r = 0; r < Vinv.rows(); ++r)
            if (Vinv(r, a) != 0) Vinv(r, b) -= q * Vinv(r, a);
    }
};

Int floor_div(const Int& a, const Int& b)
{
    Int q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) q -= 1;
    return q;
}

}  // namespace

RowEchelon row_echelon(const IntMatrix& a)
{
    RowEchelon out{a, IntMatrix::identity(a.rows()), IntMatrix::identity(a.rows()), 0, {}};
    RowOps ops{out.R, out.V, out.Vinv};
    IntMatrix& R = out.R;
    std::size_t pr = 0;
    for (std::size_t col = 0; col < R.cols() && pr < R.rows(); ++col) {
        while (true) {
            std::size_t best = R.rows();
            for (std::size_t r = pr; r < R.rows(); ++r)
                if (R(r, col) != 0 && (best == R.rows() || abs(R(r, col)) < abs(R(best, col)))) best = r;
            if (best == R.rows()) break;
            ops.swap_rows(pr, best);
            bool clean = true;
            for (std::size_t r = pr + 1; r < R.rows(); ++r) {
                if (R(r, col) == 0) continue;
                Int q = R(r, col) / R(pr, col);
                ops.add_row(r, pr, -q);
                if (R(r, col) != 0) clean = false;
            }
            if (clean) break;
        }
        if (R(pr, col) == 0) continue;
        if (R(pr, col) < 0) ops.negate_row(pr);
        for (std::size_t r = 0; r < pr; ++r) {
            Int q = floor_div(R(r, col), R(pr, col));
            ops.add_row(r, pr, -q);
        }
        out.pivot_cols.push_back(col);
        ++pr;
    }
    out.rank = pr;
    return out;
}

SmithForm smith_normal_form(const IntMatrix& a)
{
    const std::size_t m = a.rows(), n = a.cols();
    IntMatrix D = a;
    IntMatrix U = IntMatrix::identity(m);
    IntMatrix V = IntMatrix::identity(n);

    auto row_add = [&](std::size_t dst, std::size_t src, const Int& q) {
        for (std::size_t c = 0; c < n; ++c)
            if (D(src, c) != 0) D(dst, c) += q * D(src, c);
        for (std::size_t c = 0; c < m; ++c)
            if (U(src, c) != 0) U(dst, c) += q * U(src, c);
    };
    auto col_add = [&](std::size_t dst, std::size_t src, const Int& q) {
        for (std::size_t r = 0; r < m; ++r)
            if (D(r, src) != 0) D(r, dst) += q * D(r, src);
        for (std::size_t r = 0; r < n; ++r)
            if (V(r, src) != 0) V(r, dst) += q * V(r, src);
    };
    auto row_swap = [&](std::size_t x, std::size_t y) {
        if (x == y) return;
        for (std::size_t c = 0; c < n; ++c) std::swap(D(x, c), D(y, c));
        for (std::size_t c = 0; c < m; ++c) std::swap(U(x, c), U(y, c));
    };
    auto col_swap = [&](std::size_t x, std::size_t y) {
        if (x == y) return;
        for (std::size_t r = 0; r < m; ++r) std::swap(D(r, x), D(r, y));
        for (std::size_t r = 0; r < n; ++r) std::swap(V(r, x), V(r, y));
    };

    SmithForm out;
    for (std::size_t t = 0; t < std::min(m, n); ++t) {
        // smallest nonzero entry in the trailing block
        std::size_t pr = m, pc = n;
        for (std::size_t r = t; r < m; ++r)
            for (std::size_t c = t; c < n; ++c)
                if (D(r, c) != 0 && (pr == m || abs(D(r, c)) < abs(D(pr, pc)))) {
                    pr = r;
                    pc = c;
                }
        if (pr == m) break;
        row_swap(t, pr);
        col_swap(t, pc);
        while (true) {
            bool done = true;
            for (std::size_t r = t + 1; r < m; ++r) {
                if (D(r, t) == 0) continue;
                row_add(r, t, -(D(r, t) / D(t, t)));
                if (D(r, t) != 0) {
                    done = false;
                    if (abs(D(r, t)) < abs(D(t, t))) row_swap(r, t);
                }
            }
            for (std::size_t c = t + 1; c < n; ++c) {
                if (D(t, c) == 0) continue;
                col_add(c, t, -(D(t, c) / D(t, t)));
                if (D(t, c) != 0) {
                    done = false;
                    if (abs(D(t, c)) < abs(D(t, t))) col_swap(c, t);
                }
            }
            if (!done) continue;
            // divisibility of the trailing block
            std::size_t bad = m;
            for (std::size_t r = t + 1; r < m && bad == m; ++r)
                for (std::size_t c = t + 1; c < n; ++c)
                    if (D(r, c) % D(t, t) != 0) {
                        bad = r;
                        break;
                    }
            if (bad == m) break;
            row_add(t, bad, 1);
        }
        if (D(t, t) < 0) {
            for (std::size_t c = 0; c < n; ++c) D(t, c) = -D(t, c);
            for (std::size_t c = 0; c < m; ++c) U(t, c) = -U(t, c);
        }
        out.diagonal.push_back(D(t, t));
    }
    out.D = std::move(D);
    out.U = std::move(U);
    out.V = std::move(V);
    return out;
}

std::size_t rank(const IntMatrix& a)
{
    if (a.empty()) return 0;
    return row_echelon(a).rank;
}

IntMatrix left_kernel_basis(const IntMatrix& a)
{
    if (a.cols() == 0) return IntMatrix::identity(a.rows());
    RowEchelon e = row_echelon(a);
    return e.V.rows_range(e.rank, a.rows() - e.rank).transpose();
}

IntMatrix kernel_basis(const IntMatrix& a)
{
    return left_kernel_basis(a.transpose());
}

IntMatrix image_basis(const IntMatrix& a)
{
    if (a.cols() == 0) return IntMatrix(a.rows(), 0);
    RowEchelon e = row_echelon(a.transpose());
    return e.R.rows_range(0, e.rank).transpose();
}

IntMatrix saturation(const IntMatrix& gens)
{
    if (gens.cols() == 0) return IntMatrix(gens.rows(), 0);
    IntMatrix y = left_kernel_basis(gens);
    if (y.cols() == 0) return IntMatrix::identity(gens.rows());
    return kernel_basis(y.transpose());
}

std::optional<IntVector> solve_integer(const IntMatrix& a, const IntVector& b)
{
    if (b.size() != a.rows()) throw std::invalid_argument("solve_integer shape mismatch");
    if (a.cols() == 0) {
        if (is_zero(b)) return IntVector{};
        return std::nullopt;
    }
    SmithForm s = smith_normal_form(a);
    IntVector ub = s.U * b;
    IntVector y(a.cols());
    for (std::size_t i = 0; i < ub.size(); ++i) {
        if (i < s.rank()) {
            if (ub[i] % s.diagonal[i] != 0) return std::nullopt;
            y[i] = ub[i] / s.diagonal[i];
        } else if (ub[i] != 0) {
            return std::nullopt;
        }
    }
    return s.V * y;
}

std::optional<std::vector<Rational>> solve_rational(const IntMatrix& a, const IntVector& b)
{
    if (b.size() != a.rows()) throw std::invalid_argument("solve_rational shape mismatch");
    SmithForm s = smith_normal_form(a);
    IntVector ub = s.U * b;
    std::vector<Rational> y(a.cols());
    for (std::size_t i = 0; i < ub.size(); ++i) {
        if (i < s.rank())
            y[i] = Rational(ub[i], s.diagonal[i]);
        else if (ub[i] != 0)
            return std::nullopt;
    }
    std::vector<Rational> x(a.cols());
    for (std::size_t r = 0; r < a.cols(); ++r)
        for (std::size_t c = 0; c < a.cols(); ++c)
            if (s.V(r, c) != 0) x[r] += Rational(s.V(r, c)) * y[c];
    return x;
}

bool in_lattice(const IntMatrix& basis, const IntVector& v)
{
    return solve_integer(basis, v).has_value();
}

bool in_rational_span(const IntMatrix& gens, const IntVector& v)
{
    if (gens.cols() == 0) return is_zero(v);
    IntMatrix y = left_kernel_basis(gens);
    return is_zero(y.transpose() * v);
}

bool same_lattice(const IntMatrix& a, const IntMatrix& b)
{
    if (a.rows() != b.rows()) return false;
    for (std::size_t c = 0; c < a.cols(); ++c)
        if (!in_lattice(b, a.column(c))) return false;
    for (std::size_t c = 0; c < b.cols(); ++c)
        if (!in_lattice(a, b.column(c))) return false;
    return true;
}

std::vector<Int> torsion_factors(const IntMatrix& gens)
{
    std::vector<Int> out;
    if (gens.empty()) return out;
    for (const Int& d : smith_normal_form(gens).diagonal)
        if (d > 1) out.push_back(d);
    return out;
}

Complement complement_of(const IntMatrix& k)
{
    const std::size_t d = k.rows(), r = k.cols();
    RowEchelon e = row_echelon(k);
    if (e.rank != r) throw std::invalid_argument("complement_of: dependent columns");
    for (std::size_t i = 0; i < r; ++i)
        if (e.R(i, i) != 1) throw std::invalid_argument("complement_of: lattice not saturated");
    // reduced echelon with unit pivots in columns 0..r-1 is [I; 0]
    Complement c;
    c.projection = e.V.rows_range(r, d - r);
    c.section = e.Vinv.columns(r, d - r);
    return c;
}

std::string to_string(const IntVector& v)
{
    std::string s = "[";
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += ",";
        s += v[i].str();
    }
    return s + "]";
}

long to_long(const Int& x)
{
    return x.convert_to<long>();
}

}  // namespace nzs
