#pragma once

#include <cstdint>
#include <string>

namespace edcsel {

enum class ConsistencyClass { consistent, not_consistent };

// Penalty sequence c_n = alpha * n^beta * (log n)^delta * (loglog n)^eps.
// The four-exponent family covers BIC (alpha=1/2, delta=1), AIC-like
// constants, and power penalties, and admits a symbolic consistency
// classification against the rate conditions
//   liminf c_n / loglog n = inf   and   lim c_n / n = 0.
class PenaltyRule {
  public:
    static PenaltyRule bic();
    static PenaltyRule aic();
    static PenaltyRule constant(double alpha);
    static PenaltyRule power_log(double alpha, double beta, double delta, double eps);

    double operator()(long n) const; // c_n, defined for n >= 2
    ConsistencyClass consistency_class() const { return cls_; }
    const std::string& id() const { return id_; }

    double alpha() const { return alpha_; }
    double beta() const { return beta_; }
    double delta() const { return delta_; }
    double eps() const { return eps_; }

    // Parses "bic", "aic", "const:<a>", "powerlog:<a>:<b>:<d>:<e>".
    static PenaltyRule parse(const std::string& text);

  private:
    PenaltyRule(std::string id, double alpha, double beta, double delta, double eps);

    std::string id_;
    double alpha_, beta_, delta_, eps_;
    ConsistencyClass cls_;
};

// Symbolic classification of the exponent family; boundary cases of
// exact loglog n order are classified not-consistent.
ConsistencyClass classify_penalty(double alpha, double beta, double delta, double eps);

} // namespace edcsel
