#include "edcsel/markov.hpp"

#include <cmath>
#include <stdexcept>

#include "edcsel/rng.hpp"

namespace edcsel {

namespace {

long ipow(long base, int exp) {
    long r = 1;
    for (int i = 0; i < exp; ++i) r *= base;
    return r;
}

} // namespace

long MarkovSpec::context_count() const { return ipow(alphabet, order); }

void MarkovSpec::validate() const {
    if (alphabet < 2 || alphabet > 8) throw std::invalid_argument("MarkovSpec: alphabet size must be in [2,8]");
    if (order < 0) throw std::invalid_argument("MarkovSpec: order must be >= 0");
    const long nc = context_count();
    if (static_cast<long>(rows.size()) != nc * alphabet) throw std::invalid_argument("MarkovSpec: row table has wrong size");
    for (long c = 0; c < nc; ++c) {
        double sum = 0.0;
        for (int a = 0; a < alphabet; ++a) {
            const double p = rows[static_cast<std::size_t>(c * alphabet + a)];
            if (p < 0.0) throw std::invalid_argument("MarkovSpec: negative probability");
            sum += p;
        }
        if (std::fabs(sum - 1.0) > 1e-9) throw std::invalid_argument("MarkovSpec: row does not sum to 1");
    }
}

long markov_param_count(int alphabet, int order) {
    if (order < 0) throw std::invalid_argument("markov_param_count: order must be >= 0");
    return ipow(alphabet, order) * (alphabet - 1);
}

std::vector<int> markov_simulate(const MarkovSpec& spec, long n, std::uint64_t seed) {
    spec.validate();
    if (n < 1) throw std::invalid_argument("markov_simulate: n must be >= 1");
    Rng rng(seed);
    const int s = spec.alphabet;
    const int k = spec.order;
    std::vector<int> out;
    out.reserve(static_cast<std::size_t>(n));
    // initial context uniform over s^k
    for (int i = 0; i < k && static_cast<long>(out.size()) < n; ++i)
        out.push_back(static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(s))));
    long ctx = 0;
    const long ctx_mod = ipow(s, std::max(k - 1, 0));
    for (int i = 0; i < static_cast<int>(out.size()); ++i) ctx = ctx * s + out[static_cast<std::size_t>(i)];
    while (static_cast<long>(out.size()) < n) {
        const double u = rng.uniform();
        const double* row = &spec.rows[static_cast<std::size_t>(ctx * s)];
        double acc = 0.0;
        int sym = s - 1;
        for (int a = 0; a < s; ++a) {
            acc += row[a];
            if (u < acc) {
                sym = a;
                break;
            }
        }
        out.push_back(sym);
        if (k > 0) ctx = (ctx % ctx_mod) * s + sym;
    }
    return out;
}

MarkovFit markov_fit(const std::vector<int>& data, int alphabet, int order) {
    if (alphabet < 2) throw std::invalid_argument("markov_fit: alphabet size must be >= 2");
    if (order < 0) throw std::invalid_argument("markov_fit: order must be >= 0");
    const long n = static_cast<long>(data.size());
    if (n <= order) throw std::invalid_argument("markov_fit: sample shorter than order");
    const long nc = ipow(alphabet, order);
    std::vector<long> counts(static_cast<std::size_t>(nc * alphabet), 0);
    long ctx = 0;
    const long ctx_mod = ipow(alphabet, std::max(order - 1, 0));
    for (long t = 0; t < order; ++t) ctx = ctx * alphabet + data[static_cast<std::size_t>(t)];
    for (long t = order; t < n; ++t) {
        const int sym = data[static_cast<std::size_t>(t)];
        if (sym < 0 || sym >= alphabet) throw std::invalid_argument("markov_fit: symbol outside alphabet");
        ++counts[static_cast<std::size_t>(ctx * alphabet + sym)];
        if (order > 0) ctx = (ctx % ctx_mod) * alphabet + sym;
    }
    MarkovFit fit;
    fit.rows.assign(static_cast<std::size_t>(nc * alphabet), 0.0);
    double log_lik = 0.0;
    for (long c = 0; c < nc; ++c) {
        long row_total = 0;
        for (int a = 0; a < alphabet; ++a) row_total += counts[static_cast<std::size_t>(c * alphabet + a)];
        if (row_total == 0) continue; // unseen context, contributes nothing
        for (int a = 0; a < alphabet; ++a) {
            const long nca = counts[static_cast<std::size_t>(c * alphabet + a)];
            const double p = static_cast<double>(nca) / static_cast<double>(row_total);
            fit.rows[static_cast<std::size_t>(c * alphabet + a)] = p;
            if (nca > 0) log_lik += static_cast<double>(nca) * std::log(p);
        }
    }
    fit.log_lik = log_lik;
    return fit;
}

std::vector<double> markov_pack_rows(const std::vector<double>& rows, int alphabet) {
    const long nc = static_cast<long>(rows.size()) / alphabet;
    std::vector<double> theta;
    theta.reserve(static_cast<std::size_t>(nc * (alphabet - 1)));
    for (long c = 0; c < nc; ++c)
        for (int a = 0; a < alphabet - 1; ++a) theta.push_back(rows[static_cast<std::size_t>(c * alphabet + a)]);
    return theta;
}

double markov_log_lik_at(const std::vector<int>& data, int alphabet, int order, const std::vector<double>& theta) {
    const long nc = ipow(alphabet, order);
    if (static_cast<long>(theta.size()) != nc * (alphabet - 1))
        throw std::invalid_argument("markov_log_lik_at: theta has wrong length");
    const long n = static_cast<long>(data.size());
    if (n <= order) throw std::invalid_argument("markov_log_lik_at: sample shorter than order");
    long ctx = 0;
    const long ctx_mod = ipow(alphabet, std::max(order - 1, 0));
    for (long t = 0; t < order; ++t) ctx = ctx * alphabet + data[static_cast<std::size_t>(t)];
    double log_lik = 0.0;
    for (long t = order; t < n; ++t) {
        const int sym = data[static_cast<std::size_t>(t)];
        double p;
        if (sym < alphabet - 1) {
            p = theta[static_cast<std::size_t>(ctx * (alphabet - 1) + sym)];
        } else {
            p = 1.0;
            for (int a = 0; a < alphabet - 1; ++a) p -= theta[static_cast<std::size_t>(ctx * (alphabet - 1) + a)];
        }
        if (p <= 0.0) return -std::numeric_limits<double>::infinity();
        log_lik += std::log(p);
        if (order > 0) ctx = (ctx % ctx_mod) * alphabet + sym;
    }
    return log_lik;
}

FamilyFit MarkovFamily::fit(const Data& data, const OrderIndex& k) const {
    if (k.dim() != 1) throw std::invalid_argument("MarkovFamily::fit: order must be 1-dimensional");
    auto f = markov_fit(data, alphabet_, k[0]);
    FamilyFit out;
    out.theta = markov_pack_rows(f.rows, alphabet_);
    out.log_lik = f.log_lik;
    out.has_value = true;
    out.converged = true;
    out.status = "closed-form";
    return out;
}

MarkovFamily::Data MarkovFamily::simulate(long n, std::uint64_t seed) const {
    if (!spec_) throw std::logic_error("MarkovFamily::simulate: no generating spec configured");
    return markov_simulate(*spec_, n, seed);
}

OrderIndex MarkovFamily::true_order() const {
    if (!spec_) throw std::logic_error("MarkovFamily::true_order: no generating spec configured");
    return OrderIndex{spec_->order};
}

std::vector<double> MarkovFamily::true_theta_for(const OrderIndex& k) const {
    if (!spec_) throw std::logic_error("MarkovFamily::true_theta_for: no generating spec configured");
    if (k[0] < spec_->order) throw std::invalid_argument("MarkovFamily::true_theta_for: probe order below true order");
    const int s = alphabet_;
    const long nc = ipow(s, k[0]);
    const long suffix_mod = ipow(s, spec_->order);
    std::vector<double> rows(static_cast<std::size_t>(nc * s), 0.0);
    for (long c = 0; c < nc; ++c) {
        const long base = (c % suffix_mod) * s; // context suffix picks the true row
        for (int a = 0; a < s; ++a) rows[static_cast<std::size_t>(c * s + a)] = spec_->rows[static_cast<std::size_t>(base + a)];
    }
    return markov_pack_rows(rows, s);
}

} // namespace edcsel
