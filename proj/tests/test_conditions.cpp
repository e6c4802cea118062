#include <gtest/gtest.h>

#include <matchbandit/matchbandit.hpp>

#include <functional>
#include <set>

#include "fixtures.hpp"

using namespace matchbandit;
using elimination::Pair;
using elimination::Remaining;

namespace {

// Position r agent takes position r arm over every later arm; position r arm
// takes position r agent over every later agent.
bool agent_condition(const Instance& inst, const OrderCertificate& c) {
    for (std::size_t r = 0; r < inst.n_agents(); ++r)
        for (std::size_t s = r + 1; s < inst.n_arms(); ++s)
            if (inst.mean(c.agent_order[r], c.arm_order[r]) < inst.mean(c.agent_order[r], c.arm_order[s])) return false;
    return true;
}

bool arm_condition(const Instance& inst, const OrderCertificate& c) {
    for (std::size_t r = 0; r < inst.n_agents(); ++r)
        for (std::size_t s = r + 1; s < inst.n_agents(); ++s)
            if (inst.arm_rank(c.arm_order[r], c.agent_order[s]) < inst.arm_rank(c.arm_order[r], c.agent_order[r])) return false;
    return true;
}

// Success flags reachable by any order of eligible choices.
std::set<bool> all_outcomes(std::size_t n, std::size_t k, const std::function<std::vector<Pair>(const Remaining&)>& eligible) {
    std::set<bool> out;
    std::function<void(Remaining, std::size_t)> rec = [&](Remaining rem, std::size_t removed) {
        if (removed == n) {
            out.insert(true);
            return;
        }
        const auto cand = eligible(rem);
        if (cand.empty()) {
            out.insert(false);
            return;
        }
        for (auto p : cand) {
            Remaining next = rem;
            next.remove(p);
            rec(next, removed + 1);
        }
    };
    rec(Remaining(n, k), 0);
    return out;
}

}  // namespace

TEST(SerialDictatorship, CommonArmOrder) {
    const auto cert = check_serial_dictatorship(fixtures::ex_a());
    ASSERT_TRUE(cert);
    EXPECT_EQ(cert->agent_order, (std::vector<AgentIndex>{0, 1, 2}));
    EXPECT_EQ(cert->arm_order, (std::vector<ArmIndex>{0, 1, 2}));
}

TEST(SerialDictatorship, AbsentWhenArmsDisagree) { EXPECT_FALSE(check_serial_dictatorship(fixtures::ex1())); }

TEST(SerialDictatorship, SingleAgentAlwaysQualifies) {
    const Instance inst(1, 3, {0.2, 0.7, 0.5}, {{0}, {0}, {0}});
    const auto cert = check_serial_dictatorship(inst);
    ASSERT_TRUE(cert);
    EXPECT_EQ(cert->arm_order.front(), 1u);
}

TEST(Spc, Ex1Order) {
    const auto cert = check_spc(fixtures::ex1());
    ASSERT_TRUE(cert);
    EXPECT_EQ(cert->agent_order, (std::vector<AgentIndex>{0, 1, 2}));
    EXPECT_EQ(cert->arm_order, (std::vector<ArmIndex>{0, 1, 2}));
}

TEST(Spc, DoubleStableStalls) { EXPECT_FALSE(check_spc(fixtures::double_stable())); }

TEST(Spc, SerialDictatorshipOrder) {
    const auto cert = check_spc(fixtures::ex_a());
    ASSERT_TRUE(cert);
    EXPECT_EQ(cert->agent_order, (std::vector<AgentIndex>{0, 1, 2}));
    EXPECT_EQ(cert->arm_order, (std::vector<ArmIndex>{0, 1, 2}));
}

TEST(Alpha, SerialDictatorshipOrders) {
    const auto c = check_alpha(fixtures::ex_a());
    ASSERT_TRUE(c);
    EXPECT_EQ(c->left.agent_order, (std::vector<AgentIndex>{0, 1, 2}));
    EXPECT_EQ(c->right.agent_order, (std::vector<AgentIndex>{0, 1, 2}));
    EXPECT_EQ(c->left.arm_order, (std::vector<ArmIndex>{0, 1, 2}));
}

TEST(Alpha, DoubleStableFails) { EXPECT_FALSE(check_alpha(fixtures::double_stable())); }

TEST(Alpha, ExC) {
    const auto inst = fixtures::ex_c();
    const auto c = check_alpha(inst);
    ASSERT_TRUE(c);
    EXPECT_EQ(c->stable.agent_to_arm(), (std::vector<ArmIndex>{1, 0, 2}));
    EXPECT_TRUE(agent_condition(inst, c->left));
    EXPECT_TRUE(arm_condition(inst, c->right));
}

TEST(Alpha, SurplusArmsGoLast) {
    const Instance inst(2, 4, {0.1, 0.9, 0.2, 0.3, 0.8, 0.4, 0.5, 0.6}, {{1, 0}, {0, 1}, {0, 1}, {1, 0}});
    const auto c = check_alpha(inst);
    ASSERT_TRUE(c);
    for (const auto* cert : {&c->left, &c->right}) {
        EXPECT_EQ(cert->arm_order.size(), 4u);
        EXPECT_EQ(std::vector<ArmIndex>(cert->arm_order.begin() + 2, cert->arm_order.end()), (std::vector<ArmIndex>{2, 3}));
    }
}

TEST(Unqc, Examples) {
    EXPECT_TRUE(check_unqc_brute(fixtures::ex_a()));
    EXPECT_FALSE(check_unqc_brute(fixtures::double_stable()));
    EXPECT_TRUE(check_unqc_brute(Instance(1, 1, {0.5}, {{0}})));
}

TEST(Unqc, SizeGuard) {
    Rng rng(1);
    EXPECT_THROW(check_unqc_brute(fixtures::random_instance(2, 7, rng)), CapacityError);
}

TEST(Conditions, AlphaIffUniquenessConsistency) {
    Rng rng(77);
    int positives = 0, negatives = 0;
    for (int trial = 0; trial < 300; ++trial) {
        const std::size_t n = 2 + rng.below(3);
        const auto inst = fixtures::random_instance(n, n, rng);
        const bool alpha = check_alpha(inst).has_value();
        EXPECT_EQ(alpha, check_unqc_brute(inst)) << "trial " << trial;
        (alpha ? positives : negatives)++;
    }
    EXPECT_GT(positives, 20);
    EXPECT_GT(negatives, 20);
}

TEST(Conditions, ImplicationChainAndStablePairing) {
    Rng rng(8);
    for (int trial = 0; trial < 300; ++trial) {
        const std::size_t n = 1 + rng.below(4), k = n + rng.below(2);
        auto inst = fixtures::random_instance(n, k, rng);
        if (trial % 3 == 0) {
            // Force a shared arm order now and then so serial dictatorship occurs.
            auto prefs = inst.arm_prefs();
            for (auto& p : prefs) p = prefs.front();
            inst = Instance(n, k, inst.means(), prefs);
        }
        const auto gs = gale_shapley(inst);
        const auto sd = check_serial_dictatorship(inst);
        const auto spc = check_spc(inst);
        const auto alpha = check_alpha(inst);
        if (sd) {
            EXPECT_TRUE(spc);
            EXPECT_TRUE(agent_condition(inst, *sd));
        }
        if (spc) {
            EXPECT_TRUE(alpha);
            EXPECT_TRUE(agent_condition(inst, *spc));
            EXPECT_TRUE(arm_condition(inst, *spc));
            for (std::size_t r = 0; r < n; ++r) EXPECT_EQ(gs.arm_of(spc->agent_order[r]), spc->arm_order[r]);
        }
        if (alpha) {
            EXPECT_TRUE(agent_condition(inst, alpha->left));
            EXPECT_TRUE(arm_condition(inst, alpha->right));
            EXPECT_EQ(alpha->stable, gs);
            for (std::size_t r = 0; r < n; ++r) {
                EXPECT_EQ(gs.arm_of(alpha->left.agent_order[r]), alpha->left.arm_order[r]);
                EXPECT_EQ(gs.arm_of(alpha->right.agent_order[r]), alpha->right.arm_order[r]);
            }
        }
    }
}

TEST(Conditions, GreedyEliminationIsConfluent) {
    Rng rng(31);
    for (int trial = 0; trial < 150; ++trial) {
        const std::size_t n = 2 + rng.below(3), k = n + rng.below(2);
        const auto inst = fixtures::random_instance(n, k, rng);
        const auto gs = gale_shapley(inst);
        const auto spc = all_outcomes(n, k, [&](const Remaining& r) { return elimination::spc_eligible(inst, r); });
        const auto left = all_outcomes(n, k, [&](const Remaining& r) { return elimination::alpha_left_eligible(inst, gs, r); });
        const auto right = all_outcomes(n, k, [&](const Remaining& r) { return elimination::alpha_right_eligible(inst, gs, r); });
        EXPECT_EQ(spc.size(), 1u);
        EXPECT_EQ(left.size(), 1u);
        EXPECT_EQ(right.size(), 1u);
        EXPECT_EQ(*spc.begin(), check_spc(inst).has_value());
        EXPECT_EQ(*left.begin() && *right.begin(), check_alpha(inst).has_value());
    }
}

TEST(Certificates, TamperedCertificateFailsReplay) {
    auto cert = *check_spc(fixtures::ex1());
    EXPECT_TRUE(verify_certificate(fixtures::ex1(), cert));
    std::swap(cert.agent_order[0], cert.agent_order[2]);
    std::swap(cert.arm_order[0], cert.arm_order[2]);
    EXPECT_FALSE(verify_certificate(fixtures::ex1(), cert));
}
