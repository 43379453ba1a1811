#pragma once

// Small dense linear algebra for quadratic forms and lattices. Dimensions are
// expected to stay in the single or low double digits; nothing here is blocked
// or vectorised.

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace cimmino {

using Vector = std::vector<double>;

/// Square row-major matrix.
class Matrix {
public:
    Matrix() = default;
    explicit Matrix(std::size_t n) : n_(n), a_(n * n, 0.0) {}

    static Matrix identity(std::size_t n);
    static Matrix diagonal(std::span<const double> d);
    static Matrix diagonal(std::initializer_list<double> d);
    /// Throws DimensionMismatch for ragged or non-square input.
    static Matrix from_rows(const std::vector<std::vector<double>>& rows);
    static Matrix from_rows(std::initializer_list<std::initializer_list<double>> rows);

    std::size_t dim() const noexcept { return n_; }

    double& operator()(std::size_t i, std::size_t j) noexcept { return a_[i * n_ + j]; }
    double operator()(std::size_t i, std::size_t j) const noexcept { return a_[i * n_ + j]; }

    std::span<const double> row(std::size_t i) const noexcept { return {a_.data() + i * n_, n_}; }
    std::span<const double> data() const noexcept { return a_; }

    Matrix transpose() const;
    Matrix scaled(double c) const;

    friend bool operator==(const Matrix&, const Matrix&) = default;

private:
    std::size_t n_ = 0;
    std::vector<double> a_;
};

Matrix operator*(const Matrix& a, const Matrix& b);
Vector operator*(const Matrix& a, std::span<const double> x);

double dot(std::span<const double> u, std::span<const double> v);
double norm2(std::span<const double> u);
double max_abs(const Matrix& a) noexcept;
double norm1(const Matrix& a) noexcept;
double norm_inf(const Matrix& a) noexcept;

/// Exactly symmetric matrix. Construction rejects inputs whose asymmetry
/// exceeds tol::symmetry (relative to max(1, max|a_ij|)) and then averages
/// the two triangles.
class SymMatrix {
public:
    SymMatrix() = default;
    explicit SymMatrix(const Matrix& m);
    SymMatrix(std::initializer_list<std::initializer_list<double>> rows)
        : SymMatrix(Matrix::from_rows(rows)) {}

    static SymMatrix identity(std::size_t n) { return SymMatrix(Matrix::identity(n)); }
    static SymMatrix diagonal(std::initializer_list<double> d) { return SymMatrix(Matrix::diagonal(d)); }
    static SymMatrix zero(std::size_t n) { return SymMatrix(Matrix(n)); }

    std::size_t dim() const noexcept { return m_.dim(); }
    double operator()(std::size_t i, std::size_t j) const noexcept { return m_(i, j); }
    const Matrix& matrix() const noexcept { return m_; }
    SymMatrix scaled(double c) const { return SymMatrix(m_.scaled(c)); }
    double trace() const noexcept;

    friend bool operator==(const SymMatrix&, const SymMatrix&) = default;

private:
    Matrix m_;
};

/// Positive-definite form with its Cholesky factor, determinant and inverse.
/// Built only through cholesky().
class SPDForm {
public:
    const SymMatrix& base() const noexcept { return base_; }
    const Matrix& chol() const noexcept { return chol_; }  // lower triangular, base = L L^T
    double det() const noexcept { return det_; }
    const SymMatrix& inv() const noexcept { return inv_; }
    std::size_t dim() const noexcept { return base_.dim(); }

    /// Rigorous bounds on the extreme eigenvalues: 1/||Q^-1||_inf and ||Q||_inf.
    double lambda_min_lower() const noexcept { return lambda_min_; }
    double lambda_max_upper() const noexcept { return lambda_max_; }

    /// The form c*Q for c > 0, derived without refactoring.
    SPDForm scaled(double c) const;
    /// Q^-1 as a form of its own.
    SPDForm inverse_form() const;

private:
    friend SPDForm cholesky(const SymMatrix& q);
    SymMatrix base_;
    Matrix chol_;
    double det_ = 0.0;
    SymMatrix inv_;
    double lambda_min_ = 0.0;
    double lambda_max_ = 0.0;
};

/// L = gen * Z^n with |det gen| > 0.
class Lattice {
public:
    explicit Lattice(Matrix gen);
    static Lattice integer(std::size_t n) { return Lattice(Matrix::identity(n)); }

    const Matrix& gen() const noexcept { return gen_; }
    const Matrix& dual_gen() const noexcept { return dual_gen_; }
    double volume() const noexcept { return volume_; }
    std::size_t dim() const noexcept { return gen_.dim(); }

private:
    Matrix gen_;
    Matrix dual_gen_;
    double volume_;
};

/// LU factorisation with partial pivoting (P A = L U, unit lower L).
struct LUFactors {
    Matrix lu;
    std::vector<std::size_t> perm;
    int sign = 1;

    double det() const noexcept;
    Vector solve(std::span<const double> b) const;
};

/// Throws SingularMatrix on an exactly zero pivot.
LUFactors lu_decompose(const Matrix& a);
double determinant(const Matrix& a);
/// Throws SingularMatrix when |det a| <= tol::singular_det.
Matrix inverse(const Matrix& a);
Vector lu_solve(const Matrix& a, std::span<const double> b);

double qeval(const SymMatrix& q, std::span<const double> x);
SPDForm cholesky(const SymMatrix& q);
/// A^T Q A, symmetric by construction.
SymMatrix gram_transform(const SymMatrix& q, const Matrix& a);
Lattice dual_lattice(const Lattice& l);
/// Tr(Q^-1 B).
double trace_product(const SPDForm& q, const SymMatrix& b);
/// (u v^T + v u^T) / 2, so that q(x) = <u,x><v,x> and trace = <u,v>.
SymMatrix sym_outer(std::span<const double> u, std::span<const double> v);

Vector unit_vector(std::size_t n, std::size_t i);

}  // namespace cimmino
