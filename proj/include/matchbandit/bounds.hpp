#pragma once

// Closed-form regret-bound evaluators for phased ETC and UCB-D4. Bound
// sums use the natural log; phase counts use log2.

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "core.hpp"

namespace matchbandit {

struct EtcBoundReport {
    double explore = 0.0;        // K (log2 T + 2)^(1+eps) / (1+eps)
    double commit = 0.0;         // (N^2 + K)(log2 T + 2)
    double warmup = 0.0;         // 2^(warmup_exponent); +inf if not representable
    double warmup_exponent = 0.0;
    bool warmup_overflow = false;
    double tail = 0.0;           // e / (e - 2)

    double total() const { return explore + commit + warmup + tail; }
};

inline EtcBoundReport etc_bound(double horizon, std::size_t n_agents, std::size_t n_arms, double delta, double epsilon) {
    if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
    if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("gap must lie in (0, 1)");
    if (!(horizon >= 2.0)) throw std::invalid_argument("horizon must be at least 2");
    EtcBoundReport r;
    const double lg = std::log2(horizon) + 2.0;
    const double n = static_cast<double>(n_agents), k = static_cast<double>(n_arms);
    r.explore = k * std::pow(lg, 1.0 + epsilon) / (1.0 + epsilon);
    r.commit = (n * n + k) * lg;
    r.warmup_exponent = std::pow(8.0 / (delta * delta), 1.0 / epsilon) * std::pow(4.0, (1.0 + epsilon) / epsilon) + 1.0;
    r.warmup = std::exp2(r.warmup_exponent);
    r.warmup_overflow = !std::isfinite(r.warmup);
    if (r.warmup_overflow) r.warmup = std::numeric_limits<double>::infinity();
    r.tail = std::numbers::e / (std::numbers::e - 2.0);
    return r;
}

struct PhaseConstants {
    std::size_t i1 = 0;
    std::size_t i2 = 0;
    std::size_t i_star = 0;
};

namespace detail {
inline void check_theorem_params(std::size_t n_arms, double gamma, double beta) {
    if (!(gamma > 1.0)) throw std::invalid_argument("gamma must exceed 1");
    if (!(beta > 0.0 && beta < 1.0 / static_cast<double>(n_arms))) throw std::invalid_argument("beta must lie in (0, 1/K)");
}

template <typename Pred>
std::size_t first_index(Pred&& holds) {
    for (std::size_t i = 1; i < 4096; ++i)
        if (holds(i)) return i;
    throw std::domain_error("phase constant scan did not terminate");
}
}  // namespace detail

/// i1 = min{i : (N-1) 10 gamma i / dmin^2 < beta 2^(i-1)},
/// i2 = min{i : N-1 + NK(i-1) <= 2^(i+1)}, i* = max(8, i1, i2).
inline PhaseConstants phase_constants(std::size_t n_agents, std::size_t n_arms, double delta_min, double gamma, double beta) {
    detail::check_theorem_params(n_arms, gamma, beta);
    if (!(delta_min > 0.0)) throw std::invalid_argument("delta_min must be positive");
    const double n = static_cast<double>(n_agents), k = static_cast<double>(n_arms);
    PhaseConstants c;
    c.i1 = detail::first_index([&](std::size_t i) {
        return (n - 1.0) * 10.0 * gamma * static_cast<double>(i) / (delta_min * delta_min) <
               beta * std::ldexp(1.0, static_cast<int>(i) - 1);
    });
    c.i2 = detail::first_index([&](std::size_t i) {
        return n - 1.0 + n * k * static_cast<double>(i - 1) <= std::ldexp(1.0, static_cast<int>(i) + 1);
    });
    c.i_star = std::max<std::size_t>({8, c.i1, c.i2});
    return c;
}

struct UcbD4BoundReport {
    double suboptimal = 0.0;
    double collision = 0.0;
    double communication = 0.0;
    std::size_t excluded_zero_gap_terms = 0;  // collision-sum cells at a blocking agent's own stable arm
    PhaseConstants constants;
    std::size_t f_alpha = 0;
    double delta_min = 0.0;

    double explicit_total() const { return suboptimal + collision + communication; }
};

/// Explicit terms for one agent (original index). The structure must come
/// from an alpha-condition instance; gap_summary supplies the gaps.
inline UcbD4BoundReport ucbd4_bound(const Instance& inst, const InstanceStructure& s, const GapSummary& gaps, AgentIndex agent,
                                    double gamma, double beta, double horizon) {
    detail::check_theorem_params(inst.n_arms(), gamma, beta);
    if (!(horizon >= 2.0)) throw std::invalid_argument("horizon must be at least 2");
    if (!gaps.delta_min) throw std::invalid_argument("instance has no positive gap");
    const std::size_t n = inst.n_agents(), kk = inst.n_arms();
    std::size_t j = kNone;
    for (std::size_t r = 0; r < n; ++r)
        if (s.left.agents[r] == agent) j = r;
    if (j == kNone) throw std::invalid_argument("agent out of range");

    auto gap = [&](std::size_t label_agent, std::size_t label_arm) {
        return gaps.gap(s.left.agents[label_agent], s.left.arms[label_arm]);
    };
    const double ln_t = std::log(horizon);
    const double radius = ln_t + std::sqrt(std::numbers::pi / gamma * ln_t);

    UcbD4BoundReport r;
    for (ArmIndex k = 0; k < kk; ++k) {
        if (s.dominated[j].count(k) || k == j) continue;
        const double d = gap(j, k);
        if (!(d > 0.0)) throw std::invalid_argument("non-dominated arm with non-positive gap; not an alpha instance?");
        r.suboptimal += 8.0 * gamma / d * radius;
    }
    const double stable_mean = inst.mean(agent, s.left.arms[j]);
    for (ArmIndex k = 0; k < kk; ++k) {
        if (s.dominated[j].count(k)) continue;
        for (auto jp : s.blocking[j][k]) {
            if (s.dominated[jp].count(k)) continue;
            if (k == jp) {
                ++r.excluded_zero_gap_terms;
                continue;
            }
            const double d = gap(jp, k);
            if (!(d > 0.0)) throw std::invalid_argument("blocking arm with non-positive gap; not an alpha instance?");
            r.collision += 8.0 * gamma * stable_mean / (d * d) * radius;
        }
    }
    r.communication = static_cast<double>(kk - 1 + s.blocking[j][j].size()) * std::log2(horizon);
    r.delta_min = *gaps.delta_min;
    r.constants = phase_constants(n, kk, r.delta_min, gamma, beta);
    r.f_alpha = s.f_alpha[j];
    return r;
}

}  // namespace matchbandit
