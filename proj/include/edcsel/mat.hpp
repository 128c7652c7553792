#pragma once

#include <cstddef>
#include <initializer_list>
#include <string>
#include <vector>

namespace edcsel {

// Dense row-major matrix sized for small covariance-model algebra
// (typical dimensions 1..16). Not meant for large-scale work.
class Mat {
  public:
    Mat() = default;
    Mat(long rows, long cols);
    Mat(std::initializer_list<std::initializer_list<double>> rows);

    static Mat zeros(long rows, long cols);
    static Mat identity(long n);

    long rows() const { return rows_; }
    long cols() const { return cols_; }
    bool square() const { return rows_ == cols_; }

    double& operator()(long i, long j) { return a_[static_cast<std::size_t>(i * cols_ + j)]; }
    double operator()(long i, long j) const { return a_[static_cast<std::size_t>(i * cols_ + j)]; }

    double* data() { return a_.data(); }
    const double* data() const { return a_.data(); }

    Mat transpose() const;
    double trace() const;
    double frobenius_norm() const;
    double max_abs() const;

    // Relative symmetry test: max |M - M'| <= tol * max(|M|, 1e-300).
    bool is_symmetric(double rel_tol = 1e-10) const;
    bool all_finite() const;

    Mat& operator+=(const Mat& rhs);
    Mat& operator-=(const Mat& rhs);
    Mat& operator*=(double s);

    friend Mat operator+(Mat lhs, const Mat& rhs) { return lhs += rhs; }
    friend Mat operator-(Mat lhs, const Mat& rhs) { return lhs -= rhs; }
    friend Mat operator*(Mat lhs, double s) { return lhs *= s; }
    friend Mat operator*(double s, Mat rhs) { return rhs *= s; }
    friend Mat operator*(const Mat& lhs, const Mat& rhs);

    bool operator==(const Mat& rhs) const = default;

    std::string str() const;

  private:
    long rows_ = 0;
    long cols_ = 0;
    std::vector<double> a_;
};

Mat matmul(const Mat& a, const Mat& b);
std::vector<double> matvec(const Mat& a, const std::vector<double>& x);

// Half-vectorization: stacks the lower triangle column by column
// (column j contributes rows j..m-1). Input must be square and
// symmetric within rel_tol.
std::vector<double> vech(const Mat& m, double rel_tol = 1e-10);

// Full column-stacking vectorization.
std::vector<double> vec(const Mat& m);

// Duplication matrix D_m (m^2 x m(m+1)/2) and its left pseudoinverse
// D_m^+ = (D_m' D_m)^{-1} D_m', satisfying vec(A) = D_m vech(A) and
// vech(A) = D_m^+ vec(A) for symmetric A.
struct DuplicationPair {
    Mat d;
    Mat dplus;
};
DuplicationPair duplication_matrix(long m);

Mat kronecker(const Mat& a, const Mat& b);

// Largest eigenvalue magnitude of a square matrix.
double spectral_radius(const Mat& m);

// Eigenvalues of a symmetric matrix, ascending. Householder
// tridiagonalization followed by implicit-shift QL.
std::vector<double> sym_eigenvalues(const Mat& m);

// Full symmetric eigendecomposition: returns eigenvalues ascending and
// fills `vectors` with eigenvectors as columns.
std::vector<double> sym_eigen(const Mat& m, Mat& vectors);

// Eigenvalue magnitudes of a general square matrix (Hessenberg
// reduction + Francis double-shift QR). Returned unordered.
std::vector<double> eigenvalue_moduli(const Mat& m);

// Symmetric positive definite square root. Rejects inputs whose
// smallest eigenvalue is <= 1e-12 * trace.
Mat pd_sqrt(const Mat& h);

// LU factorization with partial pivoting for small square systems.
class Lu {
  public:
    explicit Lu(const Mat& m);

    bool singular() const { return singular_; }
    double det() const { return det_; }
    // Ratio of largest to smallest |pivot|; cheap conditioning proxy.
    double pivot_ratio() const { return pivot_ratio_; }

    std::vector<double> solve(const std::vector<double>& b) const;
    Mat inverse() const;

  private:
    long n_ = 0;
    Mat lu_;
    std::vector<long> perm_;
    bool singular_ = false;
    double det_ = 0.0;
    double pivot_ratio_ = 0.0;
};

} // namespace edcsel
