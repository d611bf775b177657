#pragma once

// The composite training objective, evaluated as pure functions so every
// term can be tested in isolation:
//
//   total = w_rec * sum_t ||y^_t - y_t||^2
//         + w_end * ||y^_T.xy - y_T.xy||^2
//         + w_obs * mean_t Phi(y^_t)
//         + w_feas * (step hinge + lambda_psi * heading hinge)
//         + w_stl * [gamma - smooth_robustness]_+
//         + w_moe * (lambda_bal * bal + lambda_ent * ent)
//
// plus the teacher-forcing decay and secondary-weight warmup schedules.

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "stlplan/geometry.hpp"
#include "stlplan/mathutil.hpp"
#include "stlplan/robustness.hpp"
#include "stlplan/scenario.hpp"
#include "stlplan/trajectory.hpp"

namespace stlplan {

struct LossConfig {
    double w_rec = 1.0;
    double w_end = 1.0;
    double w_obs = 1.0;
    double w_feas = 1.0;
    double w_stl = 1.0;
    double w_moe = 1.0;

    double gamma = 0.2;            // robustness margin (meters)
    double step_max = 1.0;         // d_max, meters per step
    double heading_max = 0.6;      // delta_max, radians per step
    double lambda_psi = 1.0;       // weight of the heading hinge
    double obstacle_sharpness = 10.0;
    double lambda_bal = 1.0;
    double lambda_ent = 0.1;

    void validate() const {
        const double ws[] = {w_rec, w_end, w_obs, w_feas, w_stl, w_moe,
                             gamma, lambda_psi, lambda_bal, lambda_ent};
        for (double w : ws) {
            if (w < 0.0 || !std::isfinite(w)) {
                throw std::invalid_argument("loss weights must be non-negative and finite");
            }
        }
        if (!(step_max > 0.0)) {
            throw std::invalid_argument("step_max must be > 0");
        }
        if (!(heading_max > 0.0) || heading_max > kPi) {
            throw std::invalid_argument("heading_max must lie in (0, pi]");
        }
        if (!(obstacle_sharpness > 0.0)) {
            throw std::invalid_argument("obstacle_sharpness must be > 0");
        }
    }
};

// Hinge on per-step displacement and wrapped heading change, summed over
// steps t = 2..T.
inline double feasibility_loss(const Trajectory& traj, const LossConfig& cfg) {
    if (traj.poses.size() < 2) {
        throw std::invalid_argument("feasibility loss needs at least two poses");
    }
    double step_term = 0.0;
    double heading_term = 0.0;
    for (std::size_t t = 2; t < traj.poses.size(); ++t) {
        const Pose& prev = traj.poses[t - 1];
        const Pose& cur = traj.poses[t];
        step_term += hinge(distance(cur.position(), prev.position()) - cfg.step_max);
        heading_term += hinge(std::abs(wrap_angle(cur.psi - prev.psi)) - cfg.heading_max);
    }
    return step_term + cfg.lambda_psi * heading_term;
}

// Mean soft obstacle barrier over timesteps 1..T.
inline double obstacle_loss(const Trajectory& traj, const Scenario& scenario,
                            const LossConfig& cfg) {
    const int horizon = traj.horizon();
    if (horizon < 1) {
        return 0.0;
    }
    double total = 0.0;
    for (int t = 1; t <= horizon; ++t) {
        total += obstacle_penalty(traj.poses[t].position(), scenario.obstacles,
                                  cfg.obstacle_sharpness);
    }
    return total / horizon;
}

inline double stl_hinge(double robustness, const LossConfig& cfg) {
    return hinge(cfg.gamma - robustness);
}

struct MoeRegularizer {
    double bal = 0.0;
    double ent = 0.0;
    double total = 0.0;
};

// Switch-style load balance over a routing history plus a peakiness term.
// Each history entry is a weight vector over all experts that is zero
// outside the step's active bucket and sums to one inside it.
//
//   bal = E * sum_e f_e * P_e    f_e: share of steps whose top-1 is e
//                                P_e: mean gate mass of e
//   ent = mean_t -H(g_t)         maximal (0) for one-hot gates
inline MoeRegularizer moe_regularizer(const std::vector<std::vector<double>>& gate_history,
                                      const LossConfig& cfg) {
    MoeRegularizer out;
    if (gate_history.empty()) {
        return out;
    }
    const std::size_t num_experts = gate_history.front().size();
    std::vector<double> top1_share(num_experts, 0.0);
    std::vector<double> mean_mass(num_experts, 0.0);
    double neg_entropy = 0.0;
    for (const auto& gates : gate_history) {
        if (gates.size() != num_experts) {
            throw std::invalid_argument("gate vectors must share one expert dimension");
        }
        double sum = 0.0;
        std::size_t top = 0;
        for (std::size_t e = 0; e < num_experts; ++e) {
            if (gates[e] < -1e-12) {
                throw std::invalid_argument("gate weights must be non-negative");
            }
            sum += gates[e];
            if (gates[e] > gates[top]) {
                top = e;  // ties keep the lower id
            }
        }
        if (std::abs(sum - 1.0) > 1e-6) {
            throw std::invalid_argument("gate weights must sum to 1 over the active bucket");
        }
        top1_share[top] += 1.0;
        for (std::size_t e = 0; e < num_experts; ++e) {
            mean_mass[e] += gates[e];
            if (gates[e] > 0.0) {
                neg_entropy += gates[e] * std::log(gates[e]);
            }
        }
    }
    const double n = static_cast<double>(gate_history.size());
    double dot = 0.0;
    for (std::size_t e = 0; e < num_experts; ++e) {
        dot += (top1_share[e] / n) * (mean_mass[e] / n);
    }
    out.bal = static_cast<double>(num_experts) * dot;
    out.ent = neg_entropy / n;
    out.total = cfg.lambda_bal * out.bal + cfg.lambda_ent * out.ent;
    return out;
}

struct LossBreakdown {
    double rec = 0.0;
    double end = 0.0;
    double obs = 0.0;
    double feas = 0.0;
    double stl = 0.0;
    double moe = 0.0;
    double moe_bal = 0.0;
    double moe_ent = 0.0;
    double smooth_robustness = 0.0;
    double total = 0.0;

    nlohmann::json to_json() const {
        return {{"rec", rec},   {"end", end},
                {"obs", obs},   {"feas", feas},
                {"stl", stl},   {"moe", moe},
                {"moe_bal", moe_bal}, {"moe_ent", moe_ent},
                {"smooth_robustness", smooth_robustness}, {"total", total}};
    }
};

inline LossBreakdown total_loss(const Trajectory& pred, const Trajectory& gt,
                                const Scenario& scenario, const FormulaPtr& formula,
                                const std::vector<std::vector<double>>& gate_history,
                                const LossConfig& cfg, SmoothParams sp) {
    cfg.validate();
    if (pred.poses.size() != gt.poses.size()) {
        throw std::invalid_argument("prediction and ground truth must share one horizon");
    }
    LossBreakdown out;
    for (std::size_t t = 1; t < pred.poses.size(); ++t) {
        const double dx = pred.poses[t].x - gt.poses[t].x;
        const double dy = pred.poses[t].y - gt.poses[t].y;
        const double dpsi = pred.poses[t].psi - gt.poses[t].psi;
        out.rec += dx * dx + dy * dy + dpsi * dpsi;
    }
    const Pose& pT = pred.poses.back();
    const Pose& gT = gt.poses.back();
    out.end = (pT.x - gT.x) * (pT.x - gT.x) + (pT.y - gT.y) * (pT.y - gT.y);
    out.obs = obstacle_loss(pred, scenario, cfg);
    out.feas = feasibility_loss(pred, cfg);
    out.smooth_robustness = smooth_robustness(formula, pred, scenario, 0, sp);
    out.stl = stl_hinge(out.smooth_robustness, cfg);
    const MoeRegularizer moe = moe_regularizer(gate_history, cfg);
    out.moe_bal = moe.bal;
    out.moe_ent = moe.ent;
    out.moe = moe.total;
    out.total = cfg.w_rec * out.rec + cfg.w_end * out.end + cfg.w_obs * out.obs +
                cfg.w_feas * out.feas + cfg.w_stl * out.stl + cfg.w_moe * out.moe;
    return out;
}

struct ScheduleConfig {
    int total_epochs = 24;   // E
    int warmup_epochs = 4;   // E_warm
    double r_min = 0.1;

    void validate() const {
        if (total_epochs < 1 || warmup_epochs < 1 || warmup_epochs > total_epochs) {
            throw std::invalid_argument("schedules require 0 < E_warm <= E");
        }
        if (!(r_min > 0.0) || r_min > 1.0) {
            throw std::invalid_argument("r_min must lie in (0, 1]");
        }
    }
};

struct ScheduleState {
    double teacher_forcing = 1.0;
    double warmup_factor = 1.0;
    LossConfig weights;  // base weights with {obs, feas, stl, moe} scaled by warmup
};

// Teacher forcing decays linearly to zero over E epochs; the secondary
// weights warm up linearly from r_min to 1 over the first E_warm epochs.
inline ScheduleState schedules(int epoch, const ScheduleConfig& cfg,
                               const LossConfig& base_weights) {
    cfg.validate();
    if (epoch < 0) {
        throw std::invalid_argument("epoch must be >= 0");
    }
    ScheduleState st;
    st.teacher_forcing = std::max(0.0, 1.0 - static_cast<double>(epoch) / cfg.total_epochs);
    const double progress =
        std::min(1.0, static_cast<double>(epoch) / static_cast<double>(cfg.warmup_epochs));
    st.warmup_factor = cfg.r_min + (1.0 - cfg.r_min) * progress;
    st.weights = base_weights;
    st.weights.w_obs *= st.warmup_factor;
    st.weights.w_feas *= st.warmup_factor;
    st.weights.w_stl *= st.warmup_factor;
    st.weights.w_moe *= st.warmup_factor;
    return st;
}

}  // namespace stlplan
