#include "fraclog/quadrature.hpp"

#include "fraclog/errors.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <string>
#include <vector>

namespace fraclog {

const KronrodRule& kronrod21() {
    static const KronrodRule rule = [] {
        using gk = boost::math::quadrature::gauss_kronrod<double, 21>;
        using g = boost::math::quadrature::gauss<double, 10>;
        KronrodRule r;
        for (std::size_t i = 0; i < 11; ++i) {
            r.abscissa[i] = gk::abscissa()[i];
            r.kronrod_weight[i] = gk::weights()[i];
            r.gauss_weight[i] = (i % 2 == 1) ? g::weights()[i / 2] : 0.0;
        }
        return r;
    }();
    return rule;
}

PanelEstimate apply_kronrod21(const std::function<double(double)>& f, double a, double b) {
    const KronrodRule& rule = kronrod21();
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (a + b);
    PanelEstimate out;
    const double f0 = f(mid);
    out.kronrod = rule.kronrod_weight[0] * f0;
    out.abs_integral = rule.kronrod_weight[0] * std::abs(f0);
    for (std::size_t i = 1; i < 11; ++i) {
        const double dx = half * rule.abscissa[i];
        const double fp = f(mid + dx);
        const double fm = f(mid - dx);
        out.kronrod += rule.kronrod_weight[i] * (fp + fm);
        out.gauss += rule.gauss_weight[i] * (fp + fm);
        out.abs_integral += rule.kronrod_weight[i] * (std::abs(fp) + std::abs(fm));
    }
    out.kronrod *= half;
    out.gauss *= half;
    out.abs_integral *= std::abs(half);
    return out;
}

namespace {

struct Segment {
    double a;
    double b;
    double value;
    double error;
    double abs_integral;
    bool operator<(const Segment& other) const { return error < other.error; }
};

Segment evaluate(const Integrand& f, double a, double b) {
    const PanelEstimate p = apply_kronrod21(f, a, b);
    const double err = std::max(std::abs(p.kronrod - p.gauss),
                                4.0 * std::numeric_limits<double>::epsilon() * p.abs_integral);
    return {a, b, p.kronrod, err, p.abs_integral};
}

}  // namespace

QuadratureResult integrate(const Integrand& f, std::span<const double> breakpoints,
                           const QuadratureOptions& options) {
    if (breakpoints.size() < 2) throw InputError("integrate: need at least two breakpoints");
    constexpr std::size_t evals_per_panel = 21;
    std::priority_queue<Segment> queue;
    std::vector<Segment> frozen;
    std::size_t evaluations = 0;
    for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
        if (breakpoints[i] == breakpoints[i + 1]) continue;
        queue.push(evaluate(f, breakpoints[i], breakpoints[i + 1]));
        evaluations += evals_per_panel;
    }

    auto totals = [&](double& value, double& error, double& l1) {
        std::vector<Segment> all;
        all.reserve(queue.size() + frozen.size());
        auto copy = queue;
        while (!copy.empty()) {
            all.push_back(copy.top());
            copy.pop();
        }
        all.insert(all.end(), frozen.begin(), frozen.end());
        std::sort(all.begin(), all.end(), [](const Segment& x, const Segment& y) { return x.a < y.a; });
        value = error = l1 = 0.0;
        for (const Segment& s : all) {
            value += s.value;
            error += s.error;
            l1 += s.abs_integral;
        }
    };

    double value = 0.0, error = 0.0, l1 = 0.0;
    totals(value, error, l1);

    auto target = [&] {
        return std::max({options.abs_tol, options.rel_tol * std::abs(value),
                         32.0 * std::numeric_limits<double>::epsilon() * l1});
    };

    std::size_t since_resum = 0;
    while (error > target()) {
        if (queue.empty()) break;
        if (evaluations + 2 * evals_per_panel > options.max_evaluations) break;
        Segment worst = queue.top();
        queue.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b) ||
            std::abs(worst.b - worst.a) < 64.0 * std::numeric_limits<double>::epsilon() * std::abs(mid)) {
            frozen.push_back(worst);
            continue;
        }
        const Segment left = evaluate(f, worst.a, mid);
        const Segment right = evaluate(f, mid, worst.b);
        evaluations += 2 * evals_per_panel;
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        l1 += left.abs_integral + right.abs_integral - worst.abs_integral;
        queue.push(left);
        queue.push(right);
        if (++since_resum == 64) {
            totals(value, error, l1);
            since_resum = 0;
        }
    }
    totals(value, error, l1);
    if (!std::isfinite(value) || error > target()) {
        throw BudgetError("adaptive quadrature: error estimate " + std::to_string(error) +
                          " exceeds tolerance " + std::to_string(target()) + " after " +
                          std::to_string(evaluations) + " evaluations");
    }
    return {value, error, evaluations};
}

QuadratureResult integrate(const Integrand& f, double a, double b, const QuadratureOptions& options) {
    const std::array<double, 2> br{a, b};
    return integrate(f, br, options);
}

std::vector<double> geometric_breaks(double lo, double hi, double ratio) {
    if (!(lo > 0.0) || !(hi > lo) || !(ratio > 1.0)) throw InputError("geometric_breaks: need 0 < lo < hi, ratio > 1");
    std::vector<double> out{lo};
    double x = lo;
    while (x * ratio < hi) {
        x *= ratio;
        out.push_back(x);
    }
    out.push_back(hi);
    return out;
}

}  // namespace fraclog
