#include "cimmino/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "cimmino/error.hpp"
#include "cimmino/tolerances.hpp"

namespace cimmino {

namespace {

void require_same_dim(std::size_t a, std::size_t b, const char* what) {
    if (a != b) {
        throw Error(ErrorKind::DimensionMismatch,
                    std::string(what) + ": " + std::to_string(a) + " vs " + std::to_string(b));
    }
}

}  // namespace

Matrix Matrix::identity(std::size_t n) {
    Matrix m(n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

Matrix Matrix::diagonal(std::span<const double> d) {
    Matrix m(d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return m;
}

Matrix Matrix::diagonal(std::initializer_list<double> d) {
    return diagonal(std::span<const double>(d.begin(), d.size()));
}

Matrix Matrix::from_rows(const std::vector<std::vector<double>>& rows) {
    const std::size_t n = rows.size();
    if (n == 0) throw Error(ErrorKind::DimensionMismatch, "empty matrix");
    Matrix m(n);
    for (std::size_t i = 0; i < n; ++i) {
        require_same_dim(rows[i].size(), n, "matrix row length");
        std::copy(rows[i].begin(), rows[i].end(), m.a_.begin() + static_cast<std::ptrdiff_t>(i * n));
    }
    return m;
}

Matrix Matrix::from_rows(std::initializer_list<std::initializer_list<double>> rows) {
    std::vector<std::vector<double>> v;
    for (const auto& r : rows) v.emplace_back(r);
    return from_rows(v);
}

Matrix Matrix::transpose() const {
    Matrix t(n_);
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t j = 0; j < n_; ++j) t(j, i) = (*this)(i, j);
    return t;
}

Matrix Matrix::scaled(double c) const {
    Matrix m = *this;
    for (double& x : m.a_) x *= c;
    return m;
}

Matrix operator*(const Matrix& a, const Matrix& b) {
    require_same_dim(a.dim(), b.dim(), "matrix product");
    const std::size_t n = a.dim();
    Matrix c(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k) {
            const double aik = a(i, k);
            for (std::size_t j = 0; j < n; ++j) c(i, j) += aik * b(k, j);
        }
    return c;
}

Vector operator*(const Matrix& a, std::span<const double> x) {
    require_same_dim(a.dim(), x.size(), "matrix-vector product");
    Vector y(a.dim(), 0.0);
    for (std::size_t i = 0; i < a.dim(); ++i) y[i] = dot(a.row(i), x);
    return y;
}

double dot(std::span<const double> u, std::span<const double> v) {
    require_same_dim(u.size(), v.size(), "dot");
    double s = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) s += u[i] * v[i];
    return s;
}

double norm2(std::span<const double> u) { return std::sqrt(dot(u, u)); }

double max_abs(const Matrix& a) noexcept {
    double m = 0.0;
    for (double x : a.data()) m = std::max(m, std::abs(x));
    return m;
}

double norm1(const Matrix& a) noexcept {
    double best = 0.0;
    for (std::size_t j = 0; j < a.dim(); ++j) {
        double s = 0.0;
        for (std::size_t i = 0; i < a.dim(); ++i) s += std::abs(a(i, j));
        best = std::max(best, s);
    }
    return best;
}

double norm_inf(const Matrix& a) noexcept {
    double best = 0.0;
    for (std::size_t i = 0; i < a.dim(); ++i) {
        double s = 0.0;
        for (double x : a.row(i)) s += std::abs(x);
        best = std::max(best, s);
    }
    return best;
}

SymMatrix::SymMatrix(const Matrix& m) : m_(m) {
    const std::size_t n = m.dim();
    if (n == 0) throw Error(ErrorKind::DimensionMismatch, "empty symmetric matrix");
    const double scale = std::max(1.0, max_abs(m));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            if (!std::isfinite(m(i, j)) || !std::isfinite(m(j, i)))
                throw Error(ErrorKind::InvalidArgument, "non-finite matrix entry");
            if (std::abs(m(i, j) - m(j, i)) > tol::symmetry * scale)
                throw Error(ErrorKind::NotSymmetric,
                            "entries (" + std::to_string(i) + "," + std::to_string(j) + ") differ");
            const double avg = 0.5 * (m(i, j) + m(j, i));
            m_(i, j) = avg;
            m_(j, i) = avg;
        }
    for (std::size_t i = 0; i < n; ++i)
        if (!std::isfinite(m(i, i))) throw Error(ErrorKind::InvalidArgument, "non-finite matrix entry");
}

double SymMatrix::trace() const noexcept {
    double t = 0.0;
    for (std::size_t i = 0; i < dim(); ++i) t += m_(i, i);
    return t;
}

double qeval(const SymMatrix& q, std::span<const double> x) {
    require_same_dim(q.dim(), x.size(), "qeval");
    const std::size_t n = x.size();
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double r = 0.0;
        for (std::size_t j = 0; j < n; ++j) r += q(i, j) * x[j];
        s += r * x[i];
    }
    return s;
}

SPDForm cholesky(const SymMatrix& q) {
    const std::size_t n = q.dim();
    const double threshold = static_cast<double>(n) * tol::cholesky_pivot * max_abs(q.matrix());
    Matrix l(n);
    for (std::size_t j = 0; j < n; ++j) {
        double d = q(j, j);
        for (std::size_t k = 0; k < j; ++k) d -= l(j, k) * l(j, k);
        if (!(d > threshold))
            throw Error(ErrorKind::NotPositiveDefinite, "pivot " + std::to_string(j) + " is not positive");
        const double ljj = std::sqrt(d);
        l(j, j) = ljj;
        for (std::size_t i = j + 1; i < n; ++i) {
            double s = q(i, j);
            for (std::size_t k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
            l(i, j) = s / ljj;
        }
    }

    double det = 1.0;
    for (std::size_t i = 0; i < n; ++i) det *= l(i, i) * l(i, i);

    // Inverse through L^-1: Q^-1 = L^-T L^-1.
    Matrix linv(n);
    for (std::size_t j = 0; j < n; ++j) {
        linv(j, j) = 1.0 / l(j, j);
        for (std::size_t i = j + 1; i < n; ++i) {
            double s = 0.0;
            for (std::size_t k = j; k < i; ++k) s -= l(i, k) * linv(k, j);
            linv(i, j) = s / l(i, i);
        }
    }
    Matrix inv(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) {
            double s = 0.0;
            for (std::size_t k = j; k < n; ++k) s += linv(k, i) * linv(k, j);
            inv(i, j) = s;
            inv(j, i) = s;
        }

    SPDForm f;
    f.base_ = q;
    f.chol_ = std::move(l);
    f.det_ = det;
    f.inv_ = SymMatrix(inv);
    f.lambda_min_ = 1.0 / norm_inf(inv);
    f.lambda_max_ = norm_inf(q.matrix());
    return f;
}

SPDForm SPDForm::scaled(double c) const {
    if (!(c > 0.0)) throw Error(ErrorKind::InvalidArgument, "form scale must be positive");
    SPDForm f = *this;
    f.base_ = base_.scaled(c);
    f.chol_ = chol_.scaled(std::sqrt(c));
    f.det_ = det_ * std::pow(c, static_cast<double>(dim()));
    f.inv_ = inv_.scaled(1.0 / c);
    f.lambda_min_ = lambda_min_ * c;
    f.lambda_max_ = lambda_max_ * c;
    return f;
}

SPDForm SPDForm::inverse_form() const { return cholesky(inv_); }

SymMatrix gram_transform(const SymMatrix& q, const Matrix& a) {
    require_same_dim(q.dim(), a.dim(), "gram_transform");
    const std::size_t n = a.dim();
    Matrix qa = q.matrix() * a;
    Matrix g(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) {
            double s = 0.0;
            for (std::size_t k = 0; k < n; ++k) s += a(k, i) * qa(k, j);
            g(i, j) = s;
            g(j, i) = s;
        }
    return SymMatrix(g);
}

Lattice::Lattice(Matrix gen) : gen_(std::move(gen)) {
    const double d = determinant(gen_);
    volume_ = std::abs(d);
    if (!(volume_ > tol::singular_det)) throw Error(ErrorKind::SingularMatrix, "lattice generator is singular");
    dual_gen_ = inverse(gen_.transpose());
}

Lattice dual_lattice(const Lattice& l) { return Lattice(l.dual_gen()); }

double trace_product(const SPDForm& q, const SymMatrix& b) {
    require_same_dim(q.dim(), b.dim(), "trace_product");
    double t = 0.0;
    for (std::size_t i = 0; i < b.dim(); ++i)
        for (std::size_t j = 0; j < b.dim(); ++j) t += q.inv()(i, j) * b(j, i);
    return t;
}

SymMatrix sym_outer(std::span<const double> u, std::span<const double> v) {
    require_same_dim(u.size(), v.size(), "sym_outer");
    const std::size_t n = u.size();
    Matrix m(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) m(i, j) = 0.5 * (u[i] * v[j] + v[i] * u[j]);
    return SymMatrix(m);
}

Vector unit_vector(std::size_t n, std::size_t i) {
    Vector e(n, 0.0);
    e.at(i) = 1.0;
    return e;
}

LUFactors lu_decompose(const Matrix& a) {
    const std::size_t n = a.dim();
    LUFactors f{a, std::vector<std::size_t>(n), 1};
    std::iota(f.perm.begin(), f.perm.end(), std::size_t{0});
    Matrix& m = f.lu;
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t p = k;
        for (std::size_t i = k + 1; i < n; ++i)
            if (std::abs(m(i, k)) > std::abs(m(p, k))) p = i;
        if (m(p, k) == 0.0) throw Error(ErrorKind::SingularMatrix, "zero pivot in LU");
        if (p != k) {
            for (std::size_t j = 0; j < n; ++j) std::swap(m(k, j), m(p, j));
            std::swap(f.perm[k], f.perm[p]);
            f.sign = -f.sign;
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            m(i, k) /= m(k, k);
            const double lik = m(i, k);
            for (std::size_t j = k + 1; j < n; ++j) m(i, j) -= lik * m(k, j);
        }
    }
    return f;
}

double LUFactors::det() const noexcept {
    double d = sign;
    for (std::size_t i = 0; i < lu.dim(); ++i) d *= lu(i, i);
    return d;
}

Vector LUFactors::solve(std::span<const double> b) const {
    require_same_dim(lu.dim(), b.size(), "LU solve");
    const std::size_t n = lu.dim();
    Vector x(n);
    for (std::size_t i = 0; i < n; ++i) {
        double s = b[perm[i]];
        for (std::size_t j = 0; j < i; ++j) s -= lu(i, j) * x[j];
        x[i] = s;
    }
    for (std::size_t i = n; i-- > 0;) {
        double s = x[i];
        for (std::size_t j = i + 1; j < n; ++j) s -= lu(i, j) * x[j];
        x[i] = s / lu(i, i);
    }
    return x;
}

double determinant(const Matrix& a) {
    try {
        return lu_decompose(a).det();
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::SingularMatrix) return 0.0;
        throw;
    }
}

Matrix inverse(const Matrix& a) {
    const LUFactors f = lu_decompose(a);
    if (!(std::abs(f.det()) > tol::singular_det)) throw Error(ErrorKind::SingularMatrix, "matrix is singular");
    const std::size_t n = a.dim();
    Matrix inv(n);
    for (std::size_t j = 0; j < n; ++j) {
        const Vector col = f.solve(unit_vector(n, j));
        for (std::size_t i = 0; i < n; ++i) inv(i, j) = col[i];
    }
    return inv;
}

Vector lu_solve(const Matrix& a, std::span<const double> b) {
    const LUFactors f = lu_decompose(a);
    if (!(std::abs(f.det()) > tol::singular_det)) throw Error(ErrorKind::SingularMatrix, "matrix is singular");
    return f.solve(b);
}

}  // namespace cimmino
