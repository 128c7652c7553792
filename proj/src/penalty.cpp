#include "edcsel/penalty.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace edcsel {

ConsistencyClass classify_penalty(double alpha, double beta, double delta, double eps) {
    if (alpha <= 0.0) throw std::invalid_argument("classify_penalty: alpha must be positive");
    // c_n / n -> 0: the polynomial factor dominates unless beta == 1,
    // where the log factors must decay strictly.
    bool upper_ok;
    if (beta < 1.0) {
        upper_ok = true;
    } else if (beta == 1.0) {
        upper_ok = (delta < 0.0) || (delta == 0.0 && eps < 0.0);
    } else {
        upper_ok = false;
    }
    // liminf c_n / loglog n = inf: any positive power of n or log n
    // dominates loglog n; at beta == delta == 0 we need eps > 1 strictly
    // (exact loglog n order is a boundary case, classified not-consistent).
    bool lower_ok;
    if (beta > 0.0) {
        lower_ok = true;
    } else if (beta == 0.0) {
        lower_ok = (delta > 0.0) || (delta == 0.0 && eps > 1.0);
    } else {
        lower_ok = false;
    }
    return (upper_ok && lower_ok) ? ConsistencyClass::consistent : ConsistencyClass::not_consistent;
}

PenaltyRule::PenaltyRule(std::string id, double alpha, double beta, double delta, double eps)
    : id_(std::move(id)), alpha_(alpha), beta_(beta), delta_(delta), eps_(eps), cls_(classify_penalty(alpha, beta, delta, eps)) {}

PenaltyRule PenaltyRule::bic() { return PenaltyRule("bic", 0.5, 0.0, 1.0, 0.0); }

PenaltyRule PenaltyRule::aic() { return PenaltyRule("aic", 1.0, 0.0, 0.0, 0.0); }

PenaltyRule PenaltyRule::constant(double alpha) {
    std::ostringstream id;
    id << "const:" << alpha;
    return PenaltyRule(id.str(), alpha, 0.0, 0.0, 0.0);
}

PenaltyRule PenaltyRule::power_log(double alpha, double beta, double delta, double eps) {
    std::ostringstream id;
    id << "powerlog:" << alpha << ":" << beta << ":" << delta << ":" << eps;
    return PenaltyRule(id.str(), alpha, beta, delta, eps);
}

double PenaltyRule::operator()(long n) const {
    if (n < 2) throw std::invalid_argument("PenaltyRule: c_n defined for n >= 2");
    double c = alpha_;
    const double nd = static_cast<double>(n);
    if (beta_ != 0.0) c *= std::pow(nd, beta_);
    if (delta_ != 0.0) c *= std::pow(std::log(nd), delta_);
    if (eps_ != 0.0) {
        // loglog n is negative at n = 2; clamp the inner argument at 3
        // so the factor stays positive for all n >= 2.
        const double ll = std::log(std::log(std::max(nd, 3.0)));
        c *= std::pow(ll, eps_);
    }
    return c;
}

PenaltyRule PenaltyRule::parse(const std::string& text) {
    if (text == "bic") return bic();
    if (text == "aic") return aic();
    std::istringstream is(text);
    std::string kind;
    std::getline(is, kind, ':');
    auto next_num = [&is, &text]() {
        std::string tok;
        if (!std::getline(is, tok, ':')) throw std::invalid_argument("PenaltyRule::parse: bad spec '" + text + "'");
        return std::stod(tok);
    };
    if (kind == "const") return constant(next_num());
    if (kind == "powerlog") {
        const double a = next_num(), b = next_num(), d = next_num(), e = next_num();
        return power_log(a, b, d, e);
    }
    throw std::invalid_argument("PenaltyRule::parse: unknown kind '" + kind + "'");
}

} // namespace edcsel
