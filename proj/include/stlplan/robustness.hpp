#pragma once

// Quantitative STL monitoring over discrete-time trajectories.
//
// Exact semantics:
//   atom        mu(x_t) = signed distance of the pose into the region
//   !phi        -rho(phi)
//   and / or    min / max over children
//   G[a,b]      min over t' in [t+a, t+b]
//   F[a,b]      max over t' in [t+a, t+b]
//   U[a,b]      max_{tau in a..b} min( rho_rhs[t+tau],
//                                      min_{s in 0..tau-1} rho_lhs[t+s] )
//               (the inner min over an empty range is +inf, i.e. dropped)
//
// The smooth evaluator runs the identical recursion with min/max replaced
// by temperature-k soft counterparts
//   smax_k(x) = log(sum exp(k x_i)) / k,   smin_k(x) = -smax_k(-x)
// computed in stabilized form so k = 10000 does not overflow. Both
// evaluators memoize node values per timestep, so shared subformulas and
// nested temporal windows stay polynomial.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "stlplan/ast.hpp"
#include "stlplan/geometry.hpp"
#include "stlplan/scenario.hpp"
#include "stlplan/trajectory.hpp"

namespace stlplan {

struct SmoothParams {
    double k = 300.0;
};

struct RobustnessResult {
    double value = 0.0;
    bool satisfied = false;
};

class HorizonError : public std::runtime_error {
public:
    HorizonError(const FormulaPtr& node, int t, int horizon)
        : std::runtime_error("horizon overrun: evaluating " + render(node) + " at t=" +
                             std::to_string(t) + " needs t+b=" +
                             std::to_string(t + node->interval.b) + " > T=" +
                             std::to_string(horizon)) {}
};

namespace detail {

struct HardAgg {
    static double reduce_max(std::span<const double> xs) {
        return *std::max_element(xs.begin(), xs.end());
    }
    static double reduce_min(std::span<const double> xs) {
        return *std::min_element(xs.begin(), xs.end());
    }
};

struct SmoothAgg {
    double k;

    double reduce_max(std::span<const double> xs) const {
        const double m = HardAgg::reduce_max(xs);
        double s = 0.0;
        for (double x : xs) {
            s += std::exp(k * (x - m));
        }
        return m + std::log(s) / k;
    }

    double reduce_min(std::span<const double> xs) const {
        const double m = HardAgg::reduce_min(xs);
        double s = 0.0;
        for (double x : xs) {
            s += std::exp(-k * (x - m));
        }
        return m - std::log(s) / k;
    }
};

template <class Agg>
class RobustnessEvaluator {
public:
    RobustnessEvaluator(const Trajectory& traj, const Scenario& scenario, Agg agg)
        : traj_(traj), scenario_(scenario), agg_(agg) {}

    double eval(const FormulaPtr& f, int t) {
        if (t < 0 || t > traj_.horizon()) {
            throw std::out_of_range("robustness evaluation time outside trajectory");
        }
        auto& slots = cache_[f.get()];
        if (slots.empty()) {
            slots.assign(traj_.poses.size(), std::numeric_limits<double>::quiet_NaN());
        }
        if (!std::isnan(slots[t])) {
            return slots[t];
        }
        const double v = compute(f, t);
        slots[t] = v;
        return v;
    }

private:
    double compute(const FormulaPtr& f, int t) {
        switch (f->kind) {
            case NodeKind::Atom:
                return signed_distance(scenario_.region(f->region),
                                       traj_.poses[t].position());
            case NodeKind::Not:
                return -eval(f->children[0], t);
            case NodeKind::And:
            case NodeKind::Or: {
                std::vector<double> vs;
                vs.reserve(f->children.size());
                for (const auto& c : f->children) {
                    vs.push_back(eval(c, t));
                }
                return f->kind == NodeKind::And ? agg_.reduce_min(vs) : agg_.reduce_max(vs);
            }
            case NodeKind::Always:
            case NodeKind::Eventually: {
                check_window(f, t);
                std::vector<double> vs;
                vs.reserve(f->interval.b - f->interval.a + 1);
                for (int u = t + f->interval.a; u <= t + f->interval.b; ++u) {
                    vs.push_back(eval(f->children[0], u));
                }
                return f->kind == NodeKind::Always ? agg_.reduce_min(vs) : agg_.reduce_max(vs);
            }
            case NodeKind::Until: {
                check_window(f, t);
                std::vector<double> cands;
                cands.reserve(f->interval.b - f->interval.a + 1);
                for (int tau = f->interval.a; tau <= f->interval.b; ++tau) {
                    const double rhs = eval(f->children[1], t + tau);
                    if (tau == 0) {
                        // empty prefix: min(rhs, +inf) = rhs
                        cands.push_back(rhs);
                        continue;
                    }
                    std::vector<double> prefix;
                    prefix.reserve(tau);
                    for (int s = 0; s < tau; ++s) {
                        prefix.push_back(eval(f->children[0], t + s));
                    }
                    const double pair[2] = {rhs, agg_.reduce_min(prefix)};
                    cands.push_back(agg_.reduce_min(pair));
                }
                return agg_.reduce_max(cands);
            }
        }
        throw std::logic_error("unreachable formula kind");
    }

    void check_window(const FormulaPtr& f, int t) const {
        if (t + f->interval.b > traj_.horizon()) {
            throw HorizonError(f, t, traj_.horizon());
        }
    }

    const Trajectory& traj_;
    const Scenario& scenario_;
    Agg agg_;
    std::unordered_map<const Formula*, std::vector<double>> cache_;
};

}  // namespace detail

inline double exact_robustness(const FormulaPtr& f, const Trajectory& traj,
                               const Scenario& scenario, int t = 0) {
    detail::RobustnessEvaluator<detail::HardAgg> ev(traj, scenario, {});
    return ev.eval(f, t);
}

inline double smooth_robustness(const FormulaPtr& f, const Trajectory& traj,
                                const Scenario& scenario, int t, SmoothParams sp) {
    if (!(sp.k > 0.0) || !std::isfinite(sp.k)) {
        throw std::invalid_argument("smoothing sharpness k must be positive and finite");
    }
    detail::RobustnessEvaluator<detail::SmoothAgg> ev(traj, scenario, {sp.k});
    return ev.eval(f, t);
}

inline RobustnessResult monitor_robustness(const FormulaPtr& f, const Trajectory& traj,
                                           const Scenario& scenario, int t = 0) {
    const double v = exact_robustness(f, traj, scenario, t);
    return {v, v > 0.0};
}

// Direct qualitative semantics; shares no min/max machinery with the
// quantitative evaluators, so it can serve as their sign oracle.
namespace detail {

class BooleanEvaluator {
public:
    BooleanEvaluator(const Trajectory& traj, const Scenario& scenario)
        : traj_(traj), scenario_(scenario) {}

    bool eval(const FormulaPtr& f, int t) {
        auto& slots = cache_[f.get()];
        if (slots.empty()) {
            slots.assign(traj_.poses.size(), -1);
        }
        if (slots[t] >= 0) {
            return slots[t] != 0;
        }
        const bool v = compute(f, t);
        slots[t] = v ? 1 : 0;
        return v;
    }

private:
    bool compute(const FormulaPtr& f, int t) {
        switch (f->kind) {
            case NodeKind::Atom:
                return signed_distance(scenario_.region(f->region),
                                       traj_.poses[t].position()) >= 0.0;
            case NodeKind::Not:
                return !eval(f->children[0], t);
            case NodeKind::And:
                for (const auto& c : f->children) {
                    if (!eval(c, t)) return false;
                }
                return true;
            case NodeKind::Or:
                for (const auto& c : f->children) {
                    if (eval(c, t)) return true;
                }
                return false;
            case NodeKind::Always:
            case NodeKind::Eventually: {
                if (t + f->interval.b > traj_.horizon()) {
                    throw HorizonError(f, t, traj_.horizon());
                }
                const bool want_all = f->kind == NodeKind::Always;
                for (int u = t + f->interval.a; u <= t + f->interval.b; ++u) {
                    const bool v = eval(f->children[0], u);
                    if (want_all && !v) return false;
                    if (!want_all && v) return true;
                }
                return want_all;
            }
            case NodeKind::Until: {
                if (t + f->interval.b > traj_.horizon()) {
                    throw HorizonError(f, t, traj_.horizon());
                }
                for (int tau = f->interval.a; tau <= f->interval.b; ++tau) {
                    if (!eval(f->children[1], t + tau)) {
                        continue;
                    }
                    bool prefix_ok = true;
                    for (int s = 0; s < tau && prefix_ok; ++s) {
                        prefix_ok = eval(f->children[0], t + s);
                    }
                    if (prefix_ok) return true;
                }
                return false;
            }
        }
        throw std::logic_error("unreachable formula kind");
    }

    const Trajectory& traj_;
    const Scenario& scenario_;
    std::unordered_map<const Formula*, std::vector<signed char>> cache_;
};

}  // namespace detail

inline bool boolean_satisfaction(const FormulaPtr& f, const Trajectory& traj,
                                 const Scenario& scenario, int t = 0) {
    detail::BooleanEvaluator ev(traj, scenario);
    return ev.eval(f, t);
}

// ---------------------------------------------------------------------------
// Gradient of the smooth robustness with respect to trajectory coordinates.
//
// Reverse-mode over the (formula node, timestep) DAG: a forward pass fills
// the value cache, then adjoints flow from the root down in topological
// order. Soft-max/min derivatives are the usual softmax weights, so each
// node just splits its adjoint among the entries it aggregated. Headings
// never enter a predicate, so their gradient is identically zero.
// ---------------------------------------------------------------------------

namespace detail {

inline std::vector<double> softmax_weights(std::span<const double> xs, double k, bool for_max) {
    const double sign = for_max ? 1.0 : -1.0;
    double best = -std::numeric_limits<double>::infinity();
    for (double x : xs) {
        best = std::max(best, sign * k * x);
    }
    std::vector<double> w(xs.size());
    double total = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        w[i] = std::exp(sign * k * xs[i] - best);
        total += w[i];
    }
    for (double& wi : w) {
        wi /= total;
    }
    return w;
}

class GradientComputer {
public:
    GradientComputer(const Trajectory& traj, const Scenario& scenario, double k)
        : ev_(traj, scenario, SmoothAgg{k}), traj_(traj), scenario_(scenario), k_(k) {}

    std::vector<std::array<double, 3>> run(const FormulaPtr& root, int t0, double* value_out) {
        const double value = ev_.eval(root, t0);
        if (value_out) {
            *value_out = value;
        }
        grad_.assign(traj_.poses.size(), {0.0, 0.0, 0.0});

        // Topological order over unique nodes (children may be shared).
        std::vector<const Formula*> order;
        std::unordered_map<const Formula*, int> indegree;
        collect(root.get(), indegree, order);
        adjoint_[root.get()][t0] = 1.0;

        std::queue<const Formula*> ready;
        for (const Formula* n : order) {
            if (indegree[n] == 0) {
                ready.push(n);
            }
        }
        while (!ready.empty()) {
            const Formula* node = ready.front();
            ready.pop();
            propagate(node);
            for (const auto& c : node->children) {
                if (--indegree[c.get()] == 0) {
                    ready.push(c.get());
                }
            }
        }
        return std::move(grad_);
    }

private:
    // Visits each unique node once; every (parent, child-slot) pair counts
    // as one incoming edge, including duplicate slots.
    void collect(const Formula* node, std::unordered_map<const Formula*, int>& indegree,
                 std::vector<const Formula*>& order) {
        if (indegree.count(node)) {
            return;
        }
        indegree[node] = 0;
        order.push_back(node);
        for (const auto& c : node->children) {
            collect(c.get(), indegree, order);
            indegree[c.get()] += 1;
        }
    }

    double cached(const FormulaPtr& f, int t) { return ev_.eval(f, t); }

    void push(const FormulaPtr& child, int t, double w) {
        if (w != 0.0) {
            adjoint_[child.get()][t] += w;
        }
    }

    void propagate(const Formula* node) {
        auto it = adjoint_.find(node);
        if (it == adjoint_.end()) {
            return;
        }
        // Work on a copy: nodes are processed once, after all parents.
        const auto entries = it->second;
        for (const auto& [t, w] : entries) {
            propagate_one(node, t, w);
        }
    }

    void propagate_one(const Formula* node, int t, double w) {
        switch (node->kind) {
            case NodeKind::Atom: {
                const Point g = signed_distance_gradient(scenario_.region(node->region),
                                                         traj_.poses[t].position());
                grad_[t][0] += w * g.x;
                grad_[t][1] += w * g.y;
                return;
            }
            case NodeKind::Not:
                push(node->children[0], t, -w);
                return;
            case NodeKind::And:
            case NodeKind::Or: {
                std::vector<double> vs;
                vs.reserve(node->children.size());
                for (const auto& c : node->children) {
                    vs.push_back(cached(c, t));
                }
                const auto ws = softmax_weights(vs, k_, node->kind == NodeKind::Or);
                for (std::size_t i = 0; i < node->children.size(); ++i) {
                    push(node->children[i], t, w * ws[i]);
                }
                return;
            }
            case NodeKind::Always:
            case NodeKind::Eventually: {
                std::vector<double> vs;
                const int lo = t + node->interval.a;
                const int hi = t + node->interval.b;
                vs.reserve(hi - lo + 1);
                for (int u = lo; u <= hi; ++u) {
                    vs.push_back(cached(node->children[0], u));
                }
                const auto ws = softmax_weights(vs, k_, node->kind == NodeKind::Eventually);
                for (int u = lo; u <= hi; ++u) {
                    push(node->children[0], u, w * ws[u - lo]);
                }
                return;
            }
            case NodeKind::Until: {
                const SmoothAgg agg{k_};
                const int a = node->interval.a;
                const int b = node->interval.b;
                std::vector<double> cands;
                cands.reserve(b - a + 1);
                for (int tau = a; tau <= b; ++tau) {
                    const double rhs = cached(node->children[1], t + tau);
                    if (tau == 0) {
                        cands.push_back(rhs);
                        continue;
                    }
                    std::vector<double> prefix;
                    prefix.reserve(tau);
                    for (int s = 0; s < tau; ++s) {
                        prefix.push_back(cached(node->children[0], t + s));
                    }
                    const double pair[2] = {rhs, agg.reduce_min(prefix)};
                    cands.push_back(agg.reduce_min(pair));
                }
                const auto outer = softmax_weights(cands, k_, true);
                for (int tau = a; tau <= b; ++tau) {
                    const double w_tau = w * outer[tau - a];
                    if (w_tau == 0.0) {
                        continue;
                    }
                    if (tau == 0) {
                        push(node->children[1], t, w_tau);
                        continue;
                    }
                    std::vector<double> prefix;
                    prefix.reserve(tau);
                    for (int s = 0; s < tau; ++s) {
                        prefix.push_back(cached(node->children[0], t + s));
                    }
                    const double rhs = cached(node->children[1], t + tau);
                    const double pair[2] = {rhs, SmoothAgg{k_}.reduce_min(prefix)};
                    const auto pw = softmax_weights(pair, k_, false);
                    push(node->children[1], t + tau, w_tau * pw[0]);
                    const auto inner = softmax_weights(prefix, k_, false);
                    for (int s = 0; s < tau; ++s) {
                        push(node->children[0], t + s, w_tau * pw[1] * inner[s]);
                    }
                }
                return;
            }
        }
    }

    RobustnessEvaluator<SmoothAgg> ev_;
    const Trajectory& traj_;
    const Scenario& scenario_;
    double k_;
    std::vector<std::array<double, 3>> grad_;
    std::unordered_map<const Formula*, std::unordered_map<int, double>> adjoint_;
};

}  // namespace detail

// Per-timestep (d/dx_t, d/dy_t, d/dpsi_t) of smooth_robustness. The psi
// column is always zero. Timesteps outside every active window get a zero
// row.
inline std::vector<std::array<double, 3>> smooth_robustness_grad(
    const FormulaPtr& f, const Trajectory& traj, const Scenario& scenario, int t,
    SmoothParams sp, double* value_out = nullptr) {
    if (!(sp.k > 0.0) || !std::isfinite(sp.k)) {
        throw std::invalid_argument("smoothing sharpness k must be positive and finite");
    }
    detail::GradientComputer gc(traj, scenario, sp.k);
    return gc.run(f, t, value_out);
}

// Static count and maximum arity of the aggregations the evaluators apply.
// Drives the analytic error bound |smooth - exact| <= count * ln(max_arity) / k.
struct AggregationProfile {
    std::size_t count = 0;
    std::size_t max_arity = 1;

    double error_bound(double k) const {
        return static_cast<double>(count) * std::log(static_cast<double>(max_arity)) / k;
    }
};

inline void accumulate_profile(const FormulaPtr& f, AggregationProfile& p) {
    const auto arity = [&](std::size_t n) { p.max_arity = std::max(p.max_arity, n); };
    switch (f->kind) {
        case NodeKind::Atom:
            break;
        case NodeKind::Not:
            accumulate_profile(f->children[0], p);
            break;
        case NodeKind::And:
        case NodeKind::Or:
            p.count += 1;
            arity(f->children.size());
            for (const auto& c : f->children) {
                accumulate_profile(c, p);
            }
            break;
        case NodeKind::Always:
        case NodeKind::Eventually:
            p.count += 1;
            arity(static_cast<std::size_t>(f->interval.b - f->interval.a + 1));
            accumulate_profile(f->children[0], p);
            break;
        case NodeKind::Until: {
            p.count += 1;  // outer max over tau
            arity(static_cast<std::size_t>(f->interval.b - f->interval.a + 1));
            for (int tau = std::max(f->interval.a, 1); tau <= f->interval.b; ++tau) {
                p.count += 1;  // pair min(rhs, prefix)
                arity(2);
                if (tau >= 2) {
                    p.count += 1;  // prefix min
                    arity(static_cast<std::size_t>(tau));
                }
            }
            accumulate_profile(f->children[0], p);
            accumulate_profile(f->children[1], p);
            break;
        }
    }
}

inline AggregationProfile aggregation_profile(const FormulaPtr& f) {
    AggregationProfile p;
    accumulate_profile(f, p);
    return p;
}

}  // namespace stlplan
