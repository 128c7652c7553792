#include "edcsel/bekk.hpp"

#include <cmath>
#include <cstring>
#include <limits>
#include <stdexcept>

#include "edcsel/rng.hpp"

namespace edcsel {

namespace {

constexpr double kDetFloor = 1e-300;
constexpr double kCondCap = 1e12;

// In-place LU with partial pivoting on an n x n row-major buffer.
// Returns false when a pivot vanishes. det and the max/min pivot ratio
// (a cheap conditioning proxy) come back through the out-parameters.
bool lu_factor_raw(double* a, int n, int* piv, double& det, double& piv_ratio) {
    double detsign = 1.0;
    double maxpiv = 0.0, minpiv = 0.0;
    for (int k = 0; k < n; ++k) {
        int p = k;
        double best = std::fabs(a[k * n + k]);
        for (int i = k + 1; i < n; ++i) {
            const double v = std::fabs(a[i * n + k]);
            if (v > best) {
                best = v;
                p = i;
            }
        }
        if (best == 0.0 || !std::isfinite(best)) return false;
        piv[k] = p;
        if (p != k) {
            for (int j = 0; j < n; ++j) std::swap(a[k * n + j], a[p * n + j]);
            detsign = -detsign;
        }
        maxpiv = (k == 0 ? best : std::max(maxpiv, best));
        minpiv = (k == 0 ? best : std::min(minpiv, best));
        const double pivval = a[k * n + k];
        for (int i = k + 1; i < n; ++i) {
            a[i * n + k] /= pivval;
            const double f = a[i * n + k];
            if (f == 0.0) continue;
            for (int j = k + 1; j < n; ++j) a[i * n + j] -= f * a[k * n + j];
        }
    }
    det = detsign;
    for (int k = 0; k < n; ++k) det *= a[k * n + k];
    piv_ratio = maxpiv / minpiv;
    return true;
}

void lu_solve_raw(const double* lu, int n, const int* piv, const double* b, double* x) {
    for (int i = 0; i < n; ++i) x[i] = b[i];
    for (int k = 0; k < n; ++k)
        if (piv[k] != k) std::swap(x[k], x[piv[k]]);
    for (int i = 1; i < n; ++i) {
        double s = x[i];
        for (int j = 0; j < i; ++j) s -= lu[i * n + j] * x[j];
        x[i] = s;
    }
    for (int i = n - 1; i >= 0; --i) {
        double s = x[i];
        for (int j = i + 1; j < n; ++j) s -= lu[i * n + j] * x[j];
        x[i] = s / lu[i * n + i];
    }
}

void lu_inverse_raw(const double* lu, int n, const int* piv, double* inv, double* work) {
    for (int c = 0; c < n; ++c) {
        for (int i = 0; i < n; ++i) work[i] = (i == c ? 1.0 : 0.0);
        double* col = work + n;
        lu_solve_raw(lu, n, piv, work, col);
        for (int r = 0; r < n; ++r) inv[r * n + c] = col[r];
    }
}

} // namespace

void BekkOrder::validate() const {
    if (m < 1) throw std::invalid_argument("BekkOrder: m must be >= 1");
    if (k1 < 0 || k2 < 0) throw std::invalid_argument("BekkOrder: lag counts must be >= 0");
    if (N < 1) throw std::invalid_argument("BekkOrder: N must be >= 1");
}

ThetaLayout::ThetaLayout(const BekkOrder& order) : m_(order.m), k1_(order.k1), k2_(order.k2) {
    order.validate();
    const long mm = static_cast<long>(m_) * m_;
    a_off_.assign(static_cast<std::size_t>(k2_) + 1, -1);
    b_off_.assign(static_cast<std::size_t>(k1_) + 1, -1);
    long off = mm; // C block first
    const int lmax = order.kbar();
    for (int l = 1; l <= lmax; ++l) {
        if (l <= k2_) {
            a_off_[static_cast<std::size_t>(l)] = off;
            off += mm;
        }
        if (l <= k1_) {
            b_off_[static_cast<std::size_t>(l)] = off;
            off += mm;
        }
    }
    size_ = off;
}

long ThetaLayout::a_offset(int lag) const {
    if (lag < 1 || lag > k2_) throw std::invalid_argument("ThetaLayout: A lag out of range");
    return a_off_[static_cast<std::size_t>(lag)];
}

long ThetaLayout::b_offset(int lag) const {
    if (lag < 1 || lag > k1_) throw std::invalid_argument("ThetaLayout: B lag out of range");
    return b_off_[static_cast<std::size_t>(lag)];
}

BekkParams BekkParams::from_theta(const BekkOrder& order, const std::vector<double>& theta) {
    order.validate();
    if (order.N != 1) throw std::invalid_argument("BekkParams: only N = 1 is supported for parameter packing");
    const ThetaLayout layout(order);
    if (static_cast<long>(theta.size()) != layout.size()) throw std::invalid_argument("BekkParams: theta has wrong length");
    const int m = order.m;
    auto unpack_block = [&theta, m](long off) {
        Mat mat(m, m);
        for (long j = 0; j < m; ++j)
            for (long i = 0; i < m; ++i) mat(i, j) = theta[static_cast<std::size_t>(off + j * m + i)];
        return mat;
    };
    BekkParams p;
    p.order = order;
    p.C = unpack_block(layout.c_offset());
    for (int l = 1; l <= order.k2; ++l) p.A.push_back(unpack_block(layout.a_offset(l)));
    for (int l = 1; l <= order.k1; ++l) p.B.push_back(unpack_block(layout.b_offset(l)));
    p.validate();
    return p;
}

std::vector<double> BekkParams::pack() const {
    const ThetaLayout layout(order);
    std::vector<double> theta(static_cast<std::size_t>(layout.size()), 0.0);
    const int m = order.m;
    auto pack_block = [&theta, m](long off, const Mat& mat) {
        for (long j = 0; j < m; ++j)
            for (long i = 0; i < m; ++i) theta[static_cast<std::size_t>(off + j * m + i)] = mat(i, j);
    };
    pack_block(layout.c_offset(), C);
    for (int l = 1; l <= order.k2; ++l) pack_block(layout.a_offset(l), A[static_cast<std::size_t>(l - 1)]);
    for (int l = 1; l <= order.k1; ++l) pack_block(layout.b_offset(l), B[static_cast<std::size_t>(l - 1)]);
    return theta;
}

BekkParams BekkParams::normalized() const {
    BekkParams p = *this;
    for (auto& a : p.A)
        if (a(0, 0) < 0.0) a *= -1.0;
    for (auto& b : p.B)
        if (b(0, 0) < 0.0) b *= -1.0;
    return p;
}

void BekkParams::validate() const {
    order.validate();
    const int m = order.m;
    if (C.rows() != m || C.cols() != m) throw std::invalid_argument("BekkParams: C has wrong shape");
    if (static_cast<int>(A.size()) != order.k2) throw std::invalid_argument("BekkParams: wrong number of A lags");
    if (static_cast<int>(B.size()) != order.k1) throw std::invalid_argument("BekkParams: wrong number of B lags");
    for (const auto& a : A)
        if (a.rows() != m || a.cols() != m) throw std::invalid_argument("BekkParams: A lag has wrong shape");
    for (const auto& b : B)
        if (b.rows() != m || b.cols() != m) throw std::invalid_argument("BekkParams: B lag has wrong shape");
    if (!C.all_finite()) throw std::invalid_argument("BekkParams: C has non-finite entries");
    if (!C.is_symmetric()) throw std::invalid_argument("BekkParams: C must be symmetric");
    const auto ev = sym_eigenvalues(C);
    if (ev.front() <= 1e-12 * C.trace()) throw std::domain_error("BekkParams: C must be positive definite");
}

StationarityCheck is_stationary(const BekkParams& params) {
    params.validate();
    const int m = params.order.m;
    const auto dup = duplication_matrix(m);
    const long h = m * static_cast<long>(m + 1) / 2;
    Mat total(h, h);
    for (const auto& a : params.A) total += matmul(dup.dplus, matmul(kronecker(a, a), dup.d));
    for (const auto& b : params.B) total += matmul(dup.dplus, matmul(kronecker(b, b), dup.d));
    StationarityCheck out;
    out.rho = spectral_radius(total);
    out.stationary = out.rho < 1.0;
    return out;
}

Mat h_next(const BekkParams& params, const std::vector<std::vector<double>>& lagged_x, const std::vector<Mat>& lagged_h) {
    params.validate();
    const int m = params.order.m;
    if (static_cast<int>(lagged_x.size()) < params.order.k2) throw std::invalid_argument("h_next: not enough x lags");
    if (static_cast<int>(lagged_h.size()) < params.order.k1) throw std::invalid_argument("h_next: not enough H lags");
    Mat h = params.C;
    for (int l = 1; l <= params.order.k2; ++l) {
        const auto& x = lagged_x[static_cast<std::size_t>(l - 1)];
        if (static_cast<int>(x.size()) != m) throw std::invalid_argument("h_next: x lag has wrong dimension");
        const auto w = matvec(params.A[static_cast<std::size_t>(l - 1)], x);
        for (long i = 0; i < m; ++i)
            for (long j = 0; j < m; ++j) h(i, j) += w[static_cast<std::size_t>(i)] * w[static_cast<std::size_t>(j)];
    }
    for (int l = 1; l <= params.order.k1; ++l) {
        const auto& hl = lagged_h[static_cast<std::size_t>(l - 1)];
        if (hl.rows() != m || hl.cols() != m) throw std::invalid_argument("h_next: H lag has wrong shape");
        if (!hl.is_symmetric()) throw std::invalid_argument("h_next: H lag must be symmetric");
        const auto& b = params.B[static_cast<std::size_t>(l - 1)];
        h += matmul(b, matmul(hl, b.transpose()));
    }
    return h;
}

PathSample simulate(const BekkParams& params, long n, std::uint64_t seed, long burn_in) {
    params.validate();
    if (n < 1) throw std::invalid_argument("simulate: n must be >= 1");
    if (burn_in < 0) throw std::invalid_argument("simulate: burn_in must be >= 0");
    const auto st = is_stationary(params);
    if (!st.stationary) throw std::domain_error("simulate: parameters are not stationary (rho >= 1)");

    const int m = params.order.m;
    const int k1 = params.order.k1;
    const int k2 = params.order.k2;
    Rng rng(seed);

    PathSample path;
    path.n = n;
    path.m = m;
    path.seed = seed;
    path.burn_in = burn_in;
    path.x.assign(static_cast<std::size_t>(n) * static_cast<std::size_t>(m), 0.0);

    std::vector<std::vector<double>> xlag(static_cast<std::size_t>(k2), std::vector<double>(static_cast<std::size_t>(m), 0.0));
    std::vector<Mat> hlag(static_cast<std::size_t>(k1), params.C);
    std::vector<double> eps(static_cast<std::size_t>(m));

    for (long step = 0; step < burn_in + n; ++step) {
        const Mat h = h_next(params, xlag, hlag);
        const Mat s = pd_sqrt(h);
        for (int i = 0; i < m; ++i) eps[static_cast<std::size_t>(i)] = rng.normal();
        const auto xt = matvec(s, eps);
        if (step >= burn_in) {
            double* row = path.row(step - burn_in);
            for (int i = 0; i < m; ++i) row[i] = xt[static_cast<std::size_t>(i)];
        }
        if (k2 > 0) {
            for (int l = k2 - 1; l > 0; --l) xlag[static_cast<std::size_t>(l)] = xlag[static_cast<std::size_t>(l - 1)];
            xlag[0] = xt;
        }
        if (k1 > 0) {
            for (int l = k1 - 1; l > 0; --l) hlag[static_cast<std::size_t>(l)] = hlag[static_cast<std::size_t>(l - 1)];
            hlag[0] = h;
        }
    }
    return path;
}

// ---------------------------------------------------------------------------
// BekkEvaluator
// ---------------------------------------------------------------------------

BekkEvaluator::BekkEvaluator(const BekkOrder& order, const PathSample& path, long presample, PresampleInit init)
    : order_(order), layout_(order), path_(&path), n_(path.n), init_(init), m_(order.m) {
    order.validate();
    if (order.N != 1) throw std::invalid_argument("BekkEvaluator: only N = 1 is supported");
    if (path.m != order.m) throw std::invalid_argument("BekkEvaluator: path dimension does not match order");
    presample_ = (presample < 0 ? order.kbar() : presample);
    if (presample_ < order.kbar()) throw std::invalid_argument("BekkEvaluator: presample must be >= max(k1, k2)");
    if (n_ <= presample_) throw std::invalid_argument("BekkEvaluator: sample shorter than conditioning window");

    mm_ = static_cast<long>(m_) * m_;
    gamma_ = order.gamma();
    const std::size_t mmz = static_cast<std::size_t>(mm_);
    crm_.assign(mmz, 0.0);
    arm_.assign(static_cast<std::size_t>(order.k2) * mmz, 0.0);
    brm_.assign(static_cast<std::size_t>(order.k1) * mmz, 0.0);
    const std::size_t ring = static_cast<std::size_t>(std::max(order.k1, 1));
    hring_.assign(ring * mmz, 0.0);
    dhring_.assign(static_cast<std::size_t>(gamma_) * ring * mmz, 0.0);
    w_.assign(static_cast<std::size_t>(std::max(order.k2, 1)) * static_cast<std::size_t>(m_), 0.0);
    lu_.assign(mmz, 0.0);
    hinv_.assign(mmz, 0.0);
    y_.assign(static_cast<std::size_t>(m_), 0.0);
    z_.assign(static_cast<std::size_t>(m_), 0.0);
    tmpv_.assign(static_cast<std::size_t>(2 * m_), 0.0);
    tmpm_.assign(mmz, 0.0);
    tmpm2_.assign(mmz, 0.0);
    piv_.assign(static_cast<std::size_t>(m_), 0);

    // block -> (kind, lag) table for gradient coordinates; kind 0 = C,
    // 1 = A, 2 = B; blocks are laid out per ThetaLayout
    block_kind_.push_back(0);
    block_lag_.push_back(0);
    for (int l = 1; l <= order.kbar(); ++l) {
        if (l <= order.k2) {
            block_kind_.push_back(1);
            block_lag_.push_back(l);
        }
        if (l <= order.k1) {
            block_kind_.push_back(2);
            block_lag_.push_back(l);
        }
    }

    // sample second-moment matrix for the sample_cov presample option
    presample_h_.assign(mmz, 0.0);
    for (long t = 0; t < n_; ++t) {
        const double* xt = path.row(t);
        for (int i = 0; i < m_; ++i)
            for (int j = 0; j < m_; ++j) presample_h_[static_cast<std::size_t>(i * m_ + j)] += xt[i] * xt[j];
    }
    for (double& v : presample_h_) v /= static_cast<double>(n_);
}

bool BekkEvaluator::log_lik(const double* theta, double* out) { return recurse(theta, false, out, nullptr); }

bool BekkEvaluator::log_lik_score(const double* theta, double* log_lik_out, double* grad_out) {
    return recurse(theta, true, log_lik_out, grad_out);
}

bool BekkEvaluator::recurse(const double* theta, bool with_score, double* log_lik_out, double* grad_out) {
    const int m = m_;
    const long mm = mm_;
    const int k1 = order_.k1;
    const int k2 = order_.k2;
    const int ring = std::max(k1, 1);
    fail_reason_.clear();

    // unpack the column-major theta blocks into row-major work arrays
    for (int j = 0; j < m; ++j)
        for (int i = 0; i < m; ++i) crm_[static_cast<std::size_t>(i * m + j)] = theta[layout_.c_offset() + j * m + i];
    for (int l = 1; l <= k2; ++l) {
        const long off = layout_.a_offset(l);
        double* a = &arm_[static_cast<std::size_t>((l - 1) * mm)];
        for (int j = 0; j < m; ++j)
            for (int i = 0; i < m; ++i) a[i * m + j] = theta[off + j * m + i];
    }
    for (int l = 1; l <= k1; ++l) {
        const long off = layout_.b_offset(l);
        double* b = &brm_[static_cast<std::size_t>((l - 1) * mm)];
        for (int j = 0; j < m; ++j)
            for (int i = 0; i < m; ++i) b[i * m + j] = theta[off + j * m + i];
    }

    const double* hpre = (init_ == PresampleInit::c_matrix) ? crm_.data() : presample_h_.data();

    // seed the lag rings with presample values
    for (int s = 0; s < ring; ++s) std::memcpy(&hring_[static_cast<std::size_t>(s) * mm], hpre, sizeof(double) * static_cast<std::size_t>(mm));
    if (with_score) {
        std::fill(dhring_.begin(), dhring_.end(), 0.0);
        if (init_ == PresampleInit::c_matrix) {
            // d(presample H)/dC_rc = E_rc; zero for A and B coordinates
            for (long q = 0; q < mm; ++q) {
                const int r = static_cast<int>(q % m);
                const int c = static_cast<int>(q / m);
                for (int s = 0; s < ring; ++s)
                    dhring_[(static_cast<std::size_t>(q) * ring + static_cast<std::size_t>(s)) * mm + static_cast<std::size_t>(r * m + c)] = 1.0;
            }
        }
        std::fill(grad_out, grad_out + gamma_, 0.0);
    }

    double loglik = 0.0;
    std::vector<double>& h = tmpm_;
    std::vector<double>& dh = tmpm2_;

    for (long tt = presample_; tt < n_; ++tt) {
        const double* xt = path_->row(tt);
        // w_l = A_l x_{t-l}
        for (int l = 1; l <= k2; ++l) {
            const double* a = &arm_[static_cast<std::size_t>((l - 1) * mm)];
            const double* xl = path_->row(tt - l);
            double* w = &w_[static_cast<std::size_t>((l - 1) * m)];
            for (int i = 0; i < m; ++i) {
                double s = 0.0;
                for (int j = 0; j < m; ++j) s += a[i * m + j] * xl[j];
                w[i] = s;
            }
        }
        // H_t = C + sum_l w_l w_l' + sum_l B_l H_{t-l} B_l'
        std::memcpy(h.data(), crm_.data(), sizeof(double) * static_cast<std::size_t>(mm));
        for (int l = 1; l <= k2; ++l) {
            const double* w = &w_[static_cast<std::size_t>((l - 1) * m)];
            for (int i = 0; i < m; ++i)
                for (int j = 0; j < m; ++j) h[static_cast<std::size_t>(i * m + j)] += w[i] * w[j];
        }
        for (int l = 1; l <= k1; ++l) {
            const double* b = &brm_[static_cast<std::size_t>((l - 1) * mm)];
            const double* hl = &hring_[static_cast<std::size_t>(((tt - l) % ring)) * mm];
            // T = B_l H_{t-l}; H += T B_l'
            for (int i = 0; i < m; ++i) {
                for (int kk = 0; kk < m; ++kk) {
                    double s = 0.0;
                    for (int j = 0; j < m; ++j) s += b[i * m + j] * hl[j * m + kk];
                    tmpv_[static_cast<std::size_t>(kk)] = s; // row i of T
                }
                for (int j = 0; j < m; ++j) {
                    double s = 0.0;
                    for (int kk = 0; kk < m; ++kk) s += tmpv_[static_cast<std::size_t>(kk)] * b[j * m + kk];
                    h[static_cast<std::size_t>(i * m + j)] += s;
                }
            }
        }
#ifndef NDEBUG
        for (int i = 0; i < m; ++i)
            if (!(h[static_cast<std::size_t>(i * m + i)] > 0.0)) {
                fail_reason_ = "nonpositive diagonal in H_t";
                return false;
            }
#endif
        // factor and accumulate the log-likelihood term
        std::memcpy(lu_.data(), h.data(), sizeof(double) * static_cast<std::size_t>(mm));
        double det = 0.0, ratio = 0.0;
        if (!lu_factor_raw(lu_.data(), m, piv_.data(), det, ratio)) {
            fail_reason_ = "singular H_t";
            return false;
        }
        if (!std::isfinite(det) || det <= kDetFloor) {
            fail_reason_ = "H_t determinant below floor";
            return false;
        }
        if (ratio > kCondCap) {
            fail_reason_ = "H_t condition estimate above cap";
            return false;
        }
        lu_solve_raw(lu_.data(), m, piv_.data(), xt, y_.data());
        double quad = 0.0;
        for (int i = 0; i < m; ++i) quad += xt[i] * y_[static_cast<std::size_t>(i)];
        loglik += -0.5 * quad - 0.5 * std::log(det);
        if (!std::isfinite(loglik)) {
            fail_reason_ = "non-finite log-likelihood";
            return false;
        }

        if (with_score) {
            lu_inverse_raw(lu_.data(), m, piv_.data(), hinv_.data(), tmpv_.data());
            // z = Hinv' x (equals y for symmetric H; kept general so the
            // gradient stays exact on asymmetric C perturbations)
            for (int i = 0; i < m; ++i) {
                double s = 0.0;
                for (int j = 0; j < m; ++j) s += hinv_[static_cast<std::size_t>(j * m + i)] * xt[j];
                z_[static_cast<std::size_t>(i)] = s;
            }
            for (long q = 0; q < gamma_; ++q) {
                // dH_t for coordinate q
                std::fill(dh.begin(), dh.end(), 0.0);
                const long block = q / mm;
                const int within = static_cast<int>(q % mm);
                const int r = within % m;
                const int c = within / m;
                if (block == 0) {
                    dh[static_cast<std::size_t>(r * m + c)] = 1.0;
                } else {
                    const int kind = block_kind_[static_cast<std::size_t>(block)];
                    const int lag = block_lag_[static_cast<std::size_t>(block)];
                    if (kind == 1) {
                        const double* w = &w_[static_cast<std::size_t>((lag - 1) * m)];
                        const double xc = path_->row(tt - lag)[c];
                        for (int j = 0; j < m; ++j) {
                            dh[static_cast<std::size_t>(r * m + j)] += xc * w[j];
                            dh[static_cast<std::size_t>(j * m + r)] += xc * w[j];
                        }
                    } else {
                        const double* b = &brm_[static_cast<std::size_t>((lag - 1) * mm)];
                        const double* hl = &hring_[static_cast<std::size_t>(((tt - lag) % ring)) * mm];
                        // E_rc H B' adds u' to row r, B H E_cr adds v to column r
                        for (int j = 0; j < m; ++j) {
                            double u = 0.0, v = 0.0;
                            for (int kk = 0; kk < m; ++kk) {
                                u += b[j * m + kk] * hl[c * m + kk];
                                v += b[j * m + kk] * hl[kk * m + c];
                            }
                            dh[static_cast<std::size_t>(r * m + j)] += u;
                            dh[static_cast<std::size_t>(j * m + r)] += v;
                        }
                    }
                }
                // propagation through the covariance lags
                for (int l = 1; l <= k1; ++l) {
                    const double* b = &brm_[static_cast<std::size_t>((l - 1) * mm)];
                    const double* dhl = &dhring_[(static_cast<std::size_t>(q) * ring + static_cast<std::size_t>((tt - l) % ring)) * mm];
                    for (int i = 0; i < m; ++i) {
                        for (int kk = 0; kk < m; ++kk) {
                            double s = 0.0;
                            for (int j = 0; j < m; ++j) s += b[i * m + j] * dhl[j * m + kk];
                            tmpv_[static_cast<std::size_t>(kk)] = s;
                        }
                        for (int j = 0; j < m; ++j) {
                            double s = 0.0;
                            for (int kk = 0; kk < m; ++kk) s += tmpv_[static_cast<std::size_t>(kk)] * b[j * m + kk];
                            dh[static_cast<std::size_t>(i * m + j)] += s;
                        }
                    }
                }
                // dl_t = 1/2 (z' dH y - tr(Hinv dH))
                double zy = 0.0, tr = 0.0;
                for (int i = 0; i < m; ++i)
                    for (int j = 0; j < m; ++j) {
                        const double d = dh[static_cast<std::size_t>(i * m + j)];
                        zy += z_[static_cast<std::size_t>(i)] * d * y_[static_cast<std::size_t>(j)];
                        tr += hinv_[static_cast<std::size_t>(j * m + i)] * d;
                    }
                grad_out[q] += 0.5 * (zy - tr);
                if (k1 > 0)
                    std::memcpy(&dhring_[(static_cast<std::size_t>(q) * ring + static_cast<std::size_t>(tt % ring)) * mm], dh.data(),
                                sizeof(double) * static_cast<std::size_t>(mm));
            }
        }
        std::memcpy(&hring_[static_cast<std::size_t>(tt % ring) * mm], h.data(), sizeof(double) * static_cast<std::size_t>(mm));
    }
    *log_lik_out = loglik;
    if (with_score)
        for (long q = 0; q < gamma_; ++q)
            if (!std::isfinite(grad_out[q])) {
                fail_reason_ = "non-finite score";
                return false;
            }
    return true;
}

LikResult log_likelihood(const BekkParams& params, const PathSample& path, long presample, PresampleInit init) {
    params.validate();
    LikResult out;
    BekkEvaluator ev(params.order, path, presample, init);
    const auto theta = params.pack();
    double ll = 0.0;
    if (!ev.log_lik(theta.data(), &ll)) {
        out.ok = false;
        out.reason = ev.fail_reason();
        return out;
    }
    out.ok = true;
    out.log_lik = ll;
    return out;
}

ScoreResult score(const BekkParams& params, const PathSample& path, long presample, PresampleInit init) {
    params.validate();
    ScoreResult out;
    BekkEvaluator ev(params.order, path, presample, init);
    const auto theta = params.pack();
    out.grad.assign(static_cast<std::size_t>(params.order.gamma()), 0.0);
    double ll = 0.0;
    if (!ev.log_lik_score(theta.data(), &ll, out.grad.data())) {
        out.ok = false;
        out.grad.clear();
        out.reason = ev.fail_reason();
        return out;
    }
    out.ok = true;
    out.log_lik = ll;
    return out;
}

} // namespace edcsel
