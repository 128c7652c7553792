#include "edcsel/mat.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace edcsel {

namespace {

double hypot2(double a, double b) { return std::hypot(a, b); }

double sign_with(double a, double b) { return b >= 0.0 ? std::fabs(a) : -std::fabs(a); }

} // namespace

Mat::Mat(long rows, long cols) : rows_(rows), cols_(cols) {
    if (rows < 1 || cols < 1) throw std::invalid_argument("Mat: rows and cols must be >= 1");
    a_.assign(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols), 0.0);
}

Mat::Mat(std::initializer_list<std::initializer_list<double>> rows) {
    rows_ = static_cast<long>(rows.size());
    if (rows_ == 0) throw std::invalid_argument("Mat: empty initializer");
    cols_ = static_cast<long>(rows.begin()->size());
    if (cols_ == 0) throw std::invalid_argument("Mat: empty row");
    a_.reserve(static_cast<std::size_t>(rows_ * cols_));
    for (const auto& r : rows) {
        if (static_cast<long>(r.size()) != cols_) throw std::invalid_argument("Mat: ragged initializer");
        a_.insert(a_.end(), r.begin(), r.end());
    }
}

Mat Mat::zeros(long rows, long cols) { return Mat(rows, cols); }

Mat Mat::identity(long n) {
    Mat m(n, n);
    for (long i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

Mat Mat::transpose() const {
    Mat t(cols_, rows_);
    for (long i = 0; i < rows_; ++i)
        for (long j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
}

double Mat::trace() const {
    double s = 0.0;
    for (long i = 0; i < std::min(rows_, cols_); ++i) s += (*this)(i, i);
    return s;
}

double Mat::frobenius_norm() const {
    double s = 0.0;
    for (double v : a_) s += v * v;
    return std::sqrt(s);
}

double Mat::max_abs() const {
    double s = 0.0;
    for (double v : a_) s = std::max(s, std::fabs(v));
    return s;
}

bool Mat::is_symmetric(double rel_tol) const {
    if (!square()) return false;
    const double scale = std::max(max_abs(), 1e-300);
    for (long i = 0; i < rows_; ++i)
        for (long j = i + 1; j < cols_; ++j)
            if (std::fabs((*this)(i, j) - (*this)(j, i)) > rel_tol * scale) return false;
    return true;
}

bool Mat::all_finite() const {
    for (double v : a_)
        if (!std::isfinite(v)) return false;
    return true;
}

Mat& Mat::operator+=(const Mat& rhs) {
    if (rows_ != rhs.rows_ || cols_ != rhs.cols_) throw std::invalid_argument("Mat: shape mismatch in +");
    for (std::size_t i = 0; i < a_.size(); ++i) a_[i] += rhs.a_[i];
    return *this;
}

Mat& Mat::operator-=(const Mat& rhs) {
    if (rows_ != rhs.rows_ || cols_ != rhs.cols_) throw std::invalid_argument("Mat: shape mismatch in -");
    for (std::size_t i = 0; i < a_.size(); ++i) a_[i] -= rhs.a_[i];
    return *this;
}

Mat& Mat::operator*=(double s) {
    for (double& v : a_) v *= s;
    return *this;
}

Mat operator*(const Mat& lhs, const Mat& rhs) { return matmul(lhs, rhs); }

std::string Mat::str() const {
    std::ostringstream os;
    for (long i = 0; i < rows_; ++i) {
        os << (i == 0 ? "[" : " ");
        for (long j = 0; j < cols_; ++j) os << (*this)(i, j) << (j + 1 < cols_ ? ", " : "");
        os << (i + 1 < rows_ ? ";\n" : "]");
    }
    return os.str();
}

Mat matmul(const Mat& a, const Mat& b) {
    if (a.cols() != b.rows()) throw std::invalid_argument("matmul: inner dimension mismatch");
    Mat c(a.rows(), b.cols());
    for (long i = 0; i < a.rows(); ++i)
        for (long k = 0; k < a.cols(); ++k) {
            const double aik = a(i, k);
            if (aik == 0.0) continue;
            for (long j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
        }
    return c;
}

std::vector<double> matvec(const Mat& a, const std::vector<double>& x) {
    if (a.cols() != static_cast<long>(x.size())) throw std::invalid_argument("matvec: dimension mismatch");
    std::vector<double> y(static_cast<std::size_t>(a.rows()), 0.0);
    for (long i = 0; i < a.rows(); ++i) {
        double s = 0.0;
        for (long j = 0; j < a.cols(); ++j) s += a(i, j) * x[static_cast<std::size_t>(j)];
        y[static_cast<std::size_t>(i)] = s;
    }
    return y;
}

std::vector<double> vech(const Mat& m, double rel_tol) {
    if (!m.square()) throw std::invalid_argument("vech: matrix must be square");
    if (!m.is_symmetric(rel_tol)) throw std::invalid_argument("vech: matrix must be symmetric");
    const long n = m.rows();
    std::vector<double> v;
    v.reserve(static_cast<std::size_t>(n * (n + 1) / 2));
    for (long j = 0; j < n; ++j)
        for (long i = j; i < n; ++i) v.push_back(m(i, j));
    return v;
}

std::vector<double> vec(const Mat& m) {
    std::vector<double> v;
    v.reserve(static_cast<std::size_t>(m.rows() * m.cols()));
    for (long j = 0; j < m.cols(); ++j)
        for (long i = 0; i < m.rows(); ++i) v.push_back(m(i, j));
    return v;
}

DuplicationPair duplication_matrix(long m) {
    if (m < 1) throw std::invalid_argument("duplication_matrix: m must be >= 1");
    const long h = m * (m + 1) / 2;
    // vech index of entry (i,j), i >= j: columns of the lower triangle.
    auto vech_index = [m](long i, long j) {
        const long p = std::max(i, j);
        const long q = std::min(i, j);
        return q * m - q * (q - 1) / 2 + (p - q);
    };
    Mat d(m * m, h);
    for (long j = 0; j < m; ++j)
        for (long i = 0; i < m; ++i) d(j * m + i, vech_index(i, j)) = 1.0;
    // D'D is diagonal (one unit entry per row of D), so the left
    // pseudoinverse (D'D)^{-1} D' reduces to row scaling of D'.
    Mat dplus(h, m * m);
    std::vector<double> counts(static_cast<std::size_t>(h), 0.0);
    for (long r = 0; r < m * m; ++r)
        for (long c = 0; c < h; ++c) counts[static_cast<std::size_t>(c)] += d(r, c);
    for (long c = 0; c < h; ++c)
        for (long r = 0; r < m * m; ++r)
            if (d(r, c) != 0.0) dplus(c, r) = 1.0 / counts[static_cast<std::size_t>(c)];
    return {std::move(d), std::move(dplus)};
}

Mat kronecker(const Mat& a, const Mat& b) {
    Mat k(a.rows() * b.rows(), a.cols() * b.cols());
    for (long i = 0; i < a.rows(); ++i)
        for (long j = 0; j < a.cols(); ++j) {
            const double aij = a(i, j);
            if (aij == 0.0) continue;
            for (long r = 0; r < b.rows(); ++r)
                for (long s = 0; s < b.cols(); ++s) k(i * b.rows() + r, j * b.cols() + s) = aij * b(r, s);
        }
    return k;
}

// ---------------------------------------------------------------------------
// Symmetric eigensolver: Householder tridiagonalization (with optional
// accumulation of the orthogonal transform) + implicit-shift QL.
// ---------------------------------------------------------------------------

namespace {

void tridiagonalize(Mat& z, std::vector<double>& d, std::vector<double>& e) {
    const long n = z.rows();
    d.assign(static_cast<std::size_t>(n), 0.0);
    e.assign(static_cast<std::size_t>(n), 0.0);
    for (long i = n - 1; i >= 1; --i) {
        const long l = i - 1;
        double h = 0.0, scale = 0.0;
        if (l > 0) {
            for (long k = 0; k <= l; ++k) scale += std::fabs(z(i, k));
            if (scale == 0.0) {
                e[i] = z(i, l);
            } else {
                for (long k = 0; k <= l; ++k) {
                    z(i, k) /= scale;
                    h += z(i, k) * z(i, k);
                }
                double f = z(i, l);
                double g = (f >= 0.0 ? -std::sqrt(h) : std::sqrt(h));
                e[i] = scale * g;
                h -= f * g;
                z(i, l) = f - g;
                f = 0.0;
                for (long j = 0; j <= l; ++j) {
                    z(j, i) = z(i, j) / h;
                    g = 0.0;
                    for (long k = 0; k <= j; ++k) g += z(j, k) * z(i, k);
                    for (long k = j + 1; k <= l; ++k) g += z(k, j) * z(i, k);
                    e[j] = g / h;
                    f += e[j] * z(i, j);
                }
                const double hh = f / (h + h);
                for (long j = 0; j <= l; ++j) {
                    f = z(i, j);
                    e[j] = g = e[j] - hh * f;
                    for (long k = 0; k <= j; ++k) z(j, k) -= f * e[k] + g * z(i, k);
                }
            }
        } else {
            e[i] = z(i, l);
        }
        d[i] = h;
    }
    d[0] = 0.0;
    e[0] = 0.0;
    for (long i = 0; i < n; ++i) {
        const long l = i - 1;
        if (d[i] != 0.0) {
            for (long j = 0; j <= l; ++j) {
                double g = 0.0;
                for (long k = 0; k <= l; ++k) g += z(i, k) * z(k, j);
                for (long k = 0; k <= l; ++k) z(k, j) -= g * z(k, i);
            }
        }
        d[i] = z(i, i);
        z(i, i) = 1.0;
        for (long j = 0; j <= l; ++j) {
            z(j, i) = 0.0;
            z(i, j) = 0.0;
        }
    }
}

void ql_implicit(std::vector<double>& d, std::vector<double>& e, Mat* z) {
    const long n = static_cast<long>(d.size());
    for (long i = 1; i < n; ++i) e[i - 1] = e[i];
    e[static_cast<std::size_t>(n - 1)] = 0.0;
    for (long l = 0; l < n; ++l) {
        long iter = 0;
        long m;
        do {
            for (m = l; m < n - 1; ++m) {
                const double dd = std::fabs(d[m]) + std::fabs(d[m + 1]);
                if (std::fabs(e[m]) <= 1e-300 + 2.3e-16 * dd) break;
            }
            if (m != l) {
                if (iter++ == 50) throw std::runtime_error("sym_eigen: QL iteration failed to converge");
                double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
                double r = hypot2(g, 1.0);
                g = d[m] - d[l] + e[l] / (g + sign_with(r, g));
                double s = 1.0, c = 1.0, p = 0.0;
                for (long i = m - 1; i >= l; --i) {
                    double f = s * e[i];
                    const double b = c * e[i];
                    r = hypot2(f, g);
                    e[i + 1] = r;
                    if (r == 0.0) {
                        d[i + 1] -= p;
                        e[m] = 0.0;
                        break;
                    }
                    s = f / r;
                    c = g / r;
                    g = d[i + 1] - p;
                    r = (d[i] - g) * s + 2.0 * c * b;
                    p = s * r;
                    d[i + 1] = g + p;
                    g = c * r - b;
                    if (z != nullptr) {
                        for (long k = 0; k < n; ++k) {
                            f = (*z)(k, i + 1);
                            (*z)(k, i + 1) = s * (*z)(k, i) + c * f;
                            (*z)(k, i) = c * (*z)(k, i) - s * f;
                        }
                    }
                }
                if (r == 0.0 && m - 1 >= l) continue;
                d[l] -= p;
                e[l] = g;
                e[m] = 0.0;
            }
        } while (m != l);
    }
}

} // namespace

std::vector<double> sym_eigen(const Mat& m, Mat& vectors) {
    if (!m.square()) throw std::invalid_argument("sym_eigen: matrix must be square");
    vectors = m;
    // Symmetrize to protect against last-bit asymmetry in callers.
    for (long i = 0; i < m.rows(); ++i)
        for (long j = i + 1; j < m.cols(); ++j) {
            const double v = 0.5 * (vectors(i, j) + vectors(j, i));
            vectors(i, j) = v;
            vectors(j, i) = v;
        }
    std::vector<double> d, e;
    tridiagonalize(vectors, d, e);
    ql_implicit(d, e, &vectors);
    // Sort ascending, permuting eigenvector columns alongside.
    const long n = m.rows();
    std::vector<long> idx(static_cast<std::size_t>(n));
    for (long i = 0; i < n; ++i) idx[static_cast<std::size_t>(i)] = i;
    std::sort(idx.begin(), idx.end(), [&](long a, long b) { return d[static_cast<std::size_t>(a)] < d[static_cast<std::size_t>(b)]; });
    std::vector<double> ds(static_cast<std::size_t>(n));
    Mat vs(n, n);
    for (long c = 0; c < n; ++c) {
        ds[static_cast<std::size_t>(c)] = d[static_cast<std::size_t>(idx[static_cast<std::size_t>(c)])];
        for (long r = 0; r < n; ++r) vs(r, c) = vectors(r, idx[static_cast<std::size_t>(c)]);
    }
    vectors = std::move(vs);
    return ds;
}

std::vector<double> sym_eigenvalues(const Mat& m) {
    Mat dummy;
    return sym_eigen(m, dummy);
}

// ---------------------------------------------------------------------------
// General eigenvalues: Householder Hessenberg reduction + Francis
// double-shift QR on the Hessenberg form. Eigenvalue moduli only.
// ---------------------------------------------------------------------------

namespace {

void hessenberg(Mat& a) {
    const long n = a.rows();
    for (long k = 0; k < n - 2; ++k) {
        double scale = 0.0;
        for (long i = k + 1; i < n; ++i) scale = std::max(scale, std::fabs(a(i, k)));
        if (scale == 0.0) continue;
        std::vector<double> v(static_cast<std::size_t>(n), 0.0);
        double alpha = 0.0;
        for (long i = k + 1; i < n; ++i) {
            v[static_cast<std::size_t>(i)] = a(i, k) / scale;
            alpha += v[static_cast<std::size_t>(i)] * v[static_cast<std::size_t>(i)];
        }
        alpha = std::sqrt(alpha);
        if (alpha == 0.0) continue;
        if (v[static_cast<std::size_t>(k + 1)] < 0.0) alpha = -alpha;
        v[static_cast<std::size_t>(k + 1)] += alpha;
        double vnorm2 = 0.0;
        for (long i = k + 1; i < n; ++i) vnorm2 += v[static_cast<std::size_t>(i)] * v[static_cast<std::size_t>(i)];
        if (vnorm2 == 0.0) continue;
        // A <- P A P with P = I - 2 v v'/v'v acting on rows/cols k+1..n-1.
        for (long j = 0; j < n; ++j) {
            double s = 0.0;
            for (long i = k + 1; i < n; ++i) s += v[static_cast<std::size_t>(i)] * a(i, j);
            s *= 2.0 / vnorm2;
            for (long i = k + 1; i < n; ++i) a(i, j) -= s * v[static_cast<std::size_t>(i)];
        }
        for (long i = 0; i < n; ++i) {
            double s = 0.0;
            for (long j = k + 1; j < n; ++j) s += a(i, j) * v[static_cast<std::size_t>(j)];
            s *= 2.0 / vnorm2;
            for (long j = k + 1; j < n; ++j) a(i, j) -= s * v[static_cast<std::size_t>(j)];
        }
        for (long i = k + 2; i < n; ++i) a(i, k) = 0.0;
    }
}

// Francis double-shift QR on an upper Hessenberg matrix; returns
// (re, im) eigenvalue pairs. Classic hqr scheme, 0-based.
void hqr_eigen(Mat& a, std::vector<double>& wr, std::vector<double>& wi) {
    constexpr double eps = 2.3e-16;
    const long n = a.rows();
    wr.assign(static_cast<std::size_t>(n), 0.0);
    wi.assign(static_cast<std::size_t>(n), 0.0);
    double anorm = 0.0;
    for (long i = 0; i < n; ++i)
        for (long j = std::max(i - 1, 0L); j < n; ++j) anorm += std::fabs(a(i, j));
    if (anorm == 0.0) return; // zero matrix
    long nn = n - 1;
    double t = 0.0;
    double p = 0.0, q = 0.0, r = 0.0, x = 0.0, y = 0.0, z = 0.0, s = 0.0, w = 0.0;
    while (nn >= 0) {
        long its = 0;
        long l;
        do {
            for (l = nn; l >= 1; --l) {
                s = std::fabs(a(l - 1, l - 1)) + std::fabs(a(l, l));
                if (s == 0.0) s = anorm;
                if (std::fabs(a(l, l - 1)) <= eps * s) {
                    a(l, l - 1) = 0.0;
                    break;
                }
            }
            if (l < 1) l = 0;
            x = a(nn, nn);
            if (l == nn) {
                wr[static_cast<std::size_t>(nn)] = x + t;
                wi[static_cast<std::size_t>(nn)] = 0.0;
                --nn;
            } else {
                y = a(nn - 1, nn - 1);
                w = a(nn, nn - 1) * a(nn - 1, nn);
                if (l == nn - 1) {
                    p = 0.5 * (y - x);
                    q = p * p + w;
                    z = std::sqrt(std::fabs(q));
                    x += t;
                    if (q >= 0.0) {
                        z = p + sign_with(z, p);
                        wr[static_cast<std::size_t>(nn - 1)] = wr[static_cast<std::size_t>(nn)] = x + z;
                        if (z != 0.0) wr[static_cast<std::size_t>(nn)] = x - w / z;
                        wi[static_cast<std::size_t>(nn - 1)] = wi[static_cast<std::size_t>(nn)] = 0.0;
                    } else {
                        wr[static_cast<std::size_t>(nn - 1)] = wr[static_cast<std::size_t>(nn)] = x + p;
                        wi[static_cast<std::size_t>(nn - 1)] = -z;
                        wi[static_cast<std::size_t>(nn)] = z;
                    }
                    nn -= 2;
                } else {
                    if (its == 60) throw std::runtime_error("eigenvalue_moduli: QR iteration failed to converge");
                    if (its != 0 && its % 10 == 0) {
                        // exceptional shift
                        t += x;
                        for (long i = 0; i <= nn; ++i) a(i, i) -= x;
                        s = std::fabs(a(nn, nn - 1)) + std::fabs(a(nn - 1, nn - 2));
                        y = x = 0.75 * s;
                        w = -0.4375 * s * s;
                    }
                    ++its;
                    long m;
                    for (m = nn - 2; m >= l; --m) {
                        z = a(m, m);
                        r = x - z;
                        s = y - z;
                        p = (r * s - w) / a(m + 1, m) + a(m, m + 1);
                        q = a(m + 1, m + 1) - z - r - s;
                        r = a(m + 2, m + 1);
                        s = std::fabs(p) + std::fabs(q) + std::fabs(r);
                        p /= s;
                        q /= s;
                        r /= s;
                        if (m == l) break;
                        const double u = std::fabs(a(m, m - 1)) * (std::fabs(q) + std::fabs(r));
                        const double v = std::fabs(p) * (std::fabs(a(m - 1, m - 1)) + std::fabs(z) + std::fabs(a(m + 1, m + 1)));
                        if (u <= eps * v) break;
                    }
                    for (long i = m + 2; i <= nn; ++i) {
                        a(i, i - 2) = 0.0;
                        if (i != m + 2) a(i, i - 3) = 0.0;
                    }
                    for (long k = m; k <= nn - 1; ++k) {
                        if (k != m) {
                            p = a(k, k - 1);
                            q = a(k + 1, k - 1);
                            r = 0.0;
                            if (k != nn - 1) r = a(k + 2, k - 1);
                            x = std::fabs(p) + std::fabs(q) + std::fabs(r);
                            if (x != 0.0) {
                                p /= x;
                                q /= x;
                                r /= x;
                            }
                        }
                        s = sign_with(std::sqrt(p * p + q * q + r * r), p);
                        if (s == 0.0) continue;
                        if (k == m) {
                            if (l != m) a(k, k - 1) = -a(k, k - 1);
                        } else {
                            a(k, k - 1) = -s * x;
                        }
                        p += s;
                        x = p / s;
                        y = q / s;
                        z = r / s;
                        q /= p;
                        r /= p;
                        for (long j = k; j <= nn; ++j) {
                            p = a(k, j) + q * a(k + 1, j);
                            if (k != nn - 1) {
                                p += r * a(k + 2, j);
                                a(k + 2, j) -= p * z;
                            }
                            a(k + 1, j) -= p * y;
                            a(k, j) -= p * x;
                        }
                        const long mmin = (nn < k + 3 ? nn : k + 3);
                        for (long i = l; i <= mmin; ++i) {
                            p = x * a(i, k) + y * a(i, k + 1);
                            if (k != nn - 1) {
                                p += z * a(i, k + 2);
                                a(i, k + 2) -= p * r;
                            }
                            a(i, k + 1) -= p * q;
                            a(i, k) -= p;
                        }
                    }
                }
            }
        } while (l < nn - 1);
    }
}

} // namespace

std::vector<double> eigenvalue_moduli(const Mat& m) {
    if (!m.square()) throw std::invalid_argument("eigenvalue_moduli: matrix must be square");
    if (!m.all_finite()) throw std::invalid_argument("eigenvalue_moduli: non-finite entries");
    const long n = m.rows();
    if (n == 1) return {std::fabs(m(0, 0))};
    if (m.is_symmetric(1e-13)) {
        auto ev = sym_eigenvalues(m);
        for (double& v : ev) v = std::fabs(v);
        return ev;
    }
    Mat a = m;
    hessenberg(a);
    std::vector<double> wr, wi;
    hqr_eigen(a, wr, wi);
    std::vector<double> mods(static_cast<std::size_t>(n));
    for (long i = 0; i < n; ++i) mods[static_cast<std::size_t>(i)] = std::hypot(wr[static_cast<std::size_t>(i)], wi[static_cast<std::size_t>(i)]);
    return mods;
}

double spectral_radius(const Mat& m) {
    auto mods = eigenvalue_moduli(m);
    double r = 0.0;
    for (double v : mods) r = std::max(r, v);
    return r;
}

Mat pd_sqrt(const Mat& h) {
    if (!h.square()) throw std::invalid_argument("pd_sqrt: matrix must be square");
    if (!h.is_symmetric()) throw std::invalid_argument("pd_sqrt: matrix must be symmetric");
    Mat v;
    auto ev = sym_eigen(h, v);
    const double floor = 1e-12 * h.trace();
    if (ev.front() <= floor) throw std::domain_error("pd_sqrt: matrix is not positive definite");
    const long n = h.rows();
    Mat s(n, n);
    for (long i = 0; i < n; ++i)
        for (long j = i; j < n; ++j) {
            double acc = 0.0;
            for (long k = 0; k < n; ++k) acc += v(i, k) * std::sqrt(ev[static_cast<std::size_t>(k)]) * v(j, k);
            s(i, j) = acc;
            s(j, i) = acc;
        }
    return s;
}

Lu::Lu(const Mat& m) : n_(m.rows()), lu_(m) {
    if (!m.square()) throw std::invalid_argument("Lu: matrix must be square");
    perm_.resize(static_cast<std::size_t>(n_));
    for (long i = 0; i < n_; ++i) perm_[static_cast<std::size_t>(i)] = i;
    double detsign = 1.0;
    double maxpiv = 0.0, minpiv = 0.0;
    for (long k = 0; k < n_; ++k) {
        long p = k;
        double best = std::fabs(lu_(k, k));
        for (long i = k + 1; i < n_; ++i) {
            const double v = std::fabs(lu_(i, k));
            if (v > best) {
                best = v;
                p = i;
            }
        }
        if (best == 0.0 || !std::isfinite(best)) {
            singular_ = true;
            det_ = 0.0;
            pivot_ratio_ = std::numeric_limits<double>::infinity();
            return;
        }
        if (p != k) {
            for (long j = 0; j < n_; ++j) std::swap(lu_(k, j), lu_(p, j));
            std::swap(perm_[static_cast<std::size_t>(k)], perm_[static_cast<std::size_t>(p)]);
            detsign = -detsign;
        }
        maxpiv = (k == 0 ? best : std::max(maxpiv, best));
        minpiv = (k == 0 ? best : std::min(minpiv, best));
        const double piv = lu_(k, k);
        for (long i = k + 1; i < n_; ++i) {
            lu_(i, k) /= piv;
            const double f = lu_(i, k);
            if (f == 0.0) continue;
            for (long j = k + 1; j < n_; ++j) lu_(i, j) -= f * lu_(k, j);
        }
    }
    double det = detsign;
    for (long k = 0; k < n_; ++k) det *= lu_(k, k);
    det_ = det;
    pivot_ratio_ = maxpiv / minpiv;
}

std::vector<double> Lu::solve(const std::vector<double>& b) const {
    if (singular_) throw std::domain_error("Lu::solve: singular matrix");
    if (static_cast<long>(b.size()) != n_) throw std::invalid_argument("Lu::solve: dimension mismatch");
    std::vector<double> x(static_cast<std::size_t>(n_));
    for (long i = 0; i < n_; ++i) x[static_cast<std::size_t>(i)] = b[static_cast<std::size_t>(perm_[static_cast<std::size_t>(i)])];
    for (long i = 1; i < n_; ++i) {
        double s = x[static_cast<std::size_t>(i)];
        for (long j = 0; j < i; ++j) s -= lu_(i, j) * x[static_cast<std::size_t>(j)];
        x[static_cast<std::size_t>(i)] = s;
    }
    for (long i = n_ - 1; i >= 0; --i) {
        double s = x[static_cast<std::size_t>(i)];
        for (long j = i + 1; j < n_; ++j) s -= lu_(i, j) * x[static_cast<std::size_t>(j)];
        x[static_cast<std::size_t>(i)] = s / lu_(i, i);
    }
    return x;
}

Mat Lu::inverse() const {
    if (singular_) throw std::domain_error("Lu::inverse: singular matrix");
    Mat inv(n_, n_);
    std::vector<double> e(static_cast<std::size_t>(n_), 0.0);
    for (long c = 0; c < n_; ++c) {
        e.assign(static_cast<std::size_t>(n_), 0.0);
        e[static_cast<std::size_t>(c)] = 1.0;
        auto col = solve(e);
        for (long r = 0; r < n_; ++r) inv(r, c) = col[static_cast<std::size_t>(r)];
    }
    return inv;
}

} // namespace edcsel
