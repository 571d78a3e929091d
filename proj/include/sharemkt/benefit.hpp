#pragma once

#include <utility>
#include <variant>
#include <vector>

namespace sharemkt {

enum class DerivSide { Left, Right };

/// Concave usage-benefit curve over u in [0,1] with value(0) = 0.
/// Four variants:
///   Quadratic:  -a*u^2 + b*u           (a > 0, b >= 0)
///   Linear:      alpha*u               (alpha >= 0)
///   Entropy:     (u + u*log(alpha/n) - u*log u) / beta, value(0) = 0
///   Tabulated:   concave piecewise-linear through given breakpoints
class BenefitFunction {
  public:
    struct Quadratic {
        double a;
        double b;
    };
    struct Linear {
        double alpha;
    };
    struct Entropy {
        double alpha;
        double beta;
        double n;
    };
    struct Tabulated {
        std::vector<std::pair<double, double>> points;  // (u, value), u strictly increasing
    };

    static BenefitFunction quadratic(double a, double b);
    static BenefitFunction linear(double alpha);
    static BenefitFunction entropy(double alpha, double beta, double n);
    static BenefitFunction tabulated(std::vector<std::pair<double, double>> points);

    double value(double u) const;
    double deriv(double u, DerivSide side) const;

    /// Right derivative at 0, capped at `bound` when the exact value is
    /// unbounded (Entropy). `capped`, when non-null, reports whether the
    /// cap was applied.
    double deriv_at_zero(double bound, bool* capped = nullptr) const;

    /// True for variants whose derivative at 0 is finite.
    bool deriv_at_zero_finite() const;

    /// Left derivative at u = 1.
    double deriv_at_one() const;

    bool is_entropy() const { return std::holds_alternative<Entropy>(spec_); }
    bool is_differentiable() const { return !std::holds_alternative<Tabulated>(spec_); }

    const Entropy* entropy_params() const { return std::get_if<Entropy>(&spec_); }
    const Quadratic* quadratic_params() const { return std::get_if<Quadratic>(&spec_); }
    const Linear* linear_params() const { return std::get_if<Linear>(&spec_); }
    const Tabulated* tabulated_params() const { return std::get_if<Tabulated>(&spec_); }

    /// Smallest maximizer of value(u) - price*u over [0,1]. Closed form for
    /// the analytic variants, breakpoint scan for Tabulated. Indifference
    /// resolves to the smaller u (non-participation).
    double argmax_net(double price) const;

    /// Maximizer of value(u) - price*u with no upper cap. Only Entropy can
    /// exceed 1 (it models usage frequencies, not shares).
    double argmax_net_uncapped(double price) const;

    /// Largest usage this benefit would ever choose: 1 for the normalized
    /// variants, alpha/n for Entropy (its zero-price optimum).
    double usage_cap() const;

    bool operator==(const BenefitFunction& other) const;

  private:
    explicit BenefitFunction(std::variant<Quadratic, Linear, Entropy, Tabulated> spec)
        : spec_(std::move(spec)) {}

    std::variant<Quadratic, Linear, Entropy, Tabulated> spec_;
};

}  // namespace sharemkt
