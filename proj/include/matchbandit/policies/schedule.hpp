#pragma once

// Phase schedules. Both protocols start with a ranking period of N rounds
// (N-1 index-estimation rounds and one buffer round).
//
// Phased ETC: phase i covers rounds t with b_i <= t-1 < b_{i+1}, where
// b_0 = 1 and b_{i+1} = b_i + max(1, floor(c1 * c0^i)). The defaults c0=2,
// c1=1 give b_i = 2^i.
//
// UCB-D4: phase i >= 1 is a regular block followed by a communication block
// of N*K rounds. Regular length is 2^i by default, (N-1)K + floor(c1 c0^i)
// when tuned.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>

#include "common.hpp"

namespace matchbandit {

struct PhaseTuning {
    double c0 = 2.0;
    double c1 = 1.0;
};

namespace detail {
inline std::uint64_t scaled_length(const PhaseTuning& p, std::size_t i) {
    const double v = std::floor(p.c1 * std::pow(p.c0, static_cast<double>(i)));
    if (!(v < 0x1.0p62)) return std::uint64_t{1} << 62;
    return static_cast<std::uint64_t>(std::max(v, 0.0));
}
}  // namespace detail

class EtcSchedule {
public:
    explicit EtcSchedule(PhaseTuning tuning = {}) : tuning_(tuning) {
        if (!(tuning.c0 > 1.0) || !(tuning.c1 > 0.0)) throw std::invalid_argument("phase tuning needs c0 > 1 and c1 > 0");
    }

    std::uint64_t length(std::size_t phase) const { return std::max<std::uint64_t>(1, detail::scaled_length(tuning_, phase)); }

    /// Phase containing round t (t >= 2) and t's 1-based offset into it.
    struct Position {
        std::size_t phase = 0;
        std::uint64_t offset = 0;
    };

    /// Monotone lookup: rounds must be visited in non-decreasing order.
    class Cursor {
    public:
        explicit Cursor(const EtcSchedule& s) : s_(&s), hi_(1 + s.length(0)) {}
        Position seek(Round t) {
            if (t < 2 || t - 1 < lo_) throw std::invalid_argument("ETC schedule cursor moved backwards");
            while (t - 1 >= hi_) {
                ++phase_;
                lo_ = hi_;
                hi_ = lo_ + s_->length(phase_);
            }
            return {phase_, t - lo_};
        }

    private:
        const EtcSchedule* s_;
        std::size_t phase_ = 0;
        std::uint64_t lo_ = 1;
        std::uint64_t hi_;
    };

    Position locate(Round t) const {
        Cursor c(*this);
        return c.seek(t);
    }

private:
    PhaseTuning tuning_;
};

/// Number of explore rounds at the start of ETC phase i: K * floor(i^eps).
inline std::uint64_t etc_explore_rounds(std::size_t phase, std::size_t n_arms, double epsilon) {
    const double f = std::floor(std::pow(static_cast<double>(phase), epsilon) + 1e-12);
    return static_cast<std::uint64_t>(f) * n_arms;
}

enum class Block { Ranking, Regular, Communication };

class UcbD4Schedule {
public:
    UcbD4Schedule(std::size_t n_agents, std::size_t n_arms, std::optional<PhaseTuning> tuning = std::nullopt)
        : n_(n_agents), k_(n_arms), tuning_(tuning) {
        if (tuning && (!(tuning->c0 > 1.0) || !(tuning->c1 > 0.0)))
            throw std::invalid_argument("phase tuning needs c0 > 1 and c1 > 0");
    }

    std::uint64_t ranking_len() const { return n_; }
    std::uint64_t comm_len() const { return static_cast<std::uint64_t>(n_) * k_; }
    bool tuned() const { return tuning_.has_value(); }

    std::uint64_t regular_len(std::size_t phase) const {
        if (phase == 0) throw std::invalid_argument("UCB-D4 phases start at 1");
        if (!tuning_) return phase >= 62 ? std::uint64_t{1} << 62 : std::uint64_t{1} << phase;
        return static_cast<std::uint64_t>(n_ - 1) * k_ + std::max<std::uint64_t>(1, detail::scaled_length(*tuning_, phase));
    }

    /// First round of phase i: S_1 = R + 1, S_{i+1} = S_i + regular_len(i) + C.
    Round phase_start(std::size_t phase) const {
        Round s = ranking_len() + 1;
        for (std::size_t i = 1; i < phase; ++i) s += regular_len(i) + comm_len();
        return s;
    }

    struct Position {
        std::size_t phase = 0;  // 0 during ranking
        Block block = Block::Ranking;
        std::uint64_t offset = 0;  // 0-based within the block
    };

    class Cursor {
    public:
        explicit Cursor(const UcbD4Schedule& s) : s_(&s), start_(s.ranking_len() + 1), reg_(s.regular_len(1)) {}
        Position seek(Round t) {
            if (t <= s_->ranking_len()) return {0, Block::Ranking, t - 1};
            if (t < start_) throw std::invalid_argument("UCB-D4 schedule cursor moved backwards");
            while (t - start_ >= reg_ + s_->comm_len()) {
                start_ += reg_ + s_->comm_len();
                ++phase_;
                reg_ = s_->regular_len(phase_);
            }
            const std::uint64_t off = t - start_;
            if (off < reg_) return {phase_, Block::Regular, off};
            return {phase_, Block::Communication, off - reg_};
        }

    private:
        const UcbD4Schedule* s_;
        std::size_t phase_ = 1;
        Round start_;
        std::uint64_t reg_;
    };

    Position locate(Round t) const {
        Cursor c(*this);
        return c.seek(t);
    }

private:
    std::size_t n_;
    std::size_t k_;
    std::optional<PhaseTuning> tuning_;
};

}  // namespace matchbandit
