#include "support.hpp"

#include <doctest.h>

using namespace uev;
using testing::q;

namespace {

struct ExplicitResult {
    bool pinned = true;
    bool on_target = true;
};

// Exact LP elimination on the explicit game, then every surviving message
// profile at every possible type profile is checked against f.
ExplicitResult explicit_icr(const AmMechanism& mech, const TsUtility* u) {
    const TypeSpaceModel& m = mech.model;
    const AmGame g = am_explicit_game(mech, u);
    const IcrTable t = icr_eliminate(g.game);
    CHECK(t.monotone());
    const auto& fp = t.fixed_point();
    ExplicitResult r;
    for (int i = 0; i < m.n_agents(); ++i)
        for (int ty = 0; ty < m.n_types(i); ++ty) {
            REQUIRE_FALSE(fp[i][ty].empty());
            for (int id : fp[i][ty])
                for (int x : g.catalog[i][id].rounds) r.pinned = r.pinned && x == g.catalog[i][id].reference();
        }
    for (const auto& prof : possible_profiles(m)) {
        std::vector<std::size_t> pick(m.n_agents(), 0);
        while (true) {
            std::vector<AmMessage> msgs;
            for (int i = 0; i < m.n_agents(); ++i) msgs.push_back(g.catalog[i][fp[i][prof[i]][pick[i]]]);
            const auto dist = mech.outcome(msgs);
            r.on_target = r.on_target && dist.size() == 1 && dist.begin()->first == m.f(prof);
            int i = 0;
            while (i < m.n_agents() && ++pick[i] == fp[i][prof[i]].size()) pick[i++] = 0;
            if (i == m.n_agents()) break;
        }
    }
    return r;
}

std::vector<const TsUtility*> utilities(const TypeSpaceModel& m) {
    std::vector<const TsUtility*> us{nullptr};
    for (const auto& u : m.utilities) us.push_back(&u);
    return us;
}

// Two players, one type each, sure beliefs; payoff table for player 0 by
// (row, column), player 1 indifferent.
FiniteGame matrix_game(const std::vector<std::vector<Q>>& row_payoff) {
    FiniteGame g;
    g.n = 2;
    g.type_labels = {{"r"}, {"c"}};
    const int rows = static_cast<int>(row_payoff.size()), cols = static_cast<int>(row_payoff[0].size());
    g.message_labels.assign(2, {});
    g.feasible.assign(2, std::vector<std::vector<int>>(1));
    for (int a = 0; a < rows; ++a) {
        g.message_labels[0].push_back("r" + std::to_string(a));
        g.feasible[0][0].push_back(a);
    }
    for (int b = 0; b < cols; ++b) {
        g.message_labels[1].push_back("c" + std::to_string(b));
        g.feasible[1][0].push_back(b);
    }
    g.beliefs = {{{{{0, 0}, Q(1)}}}, {{{{0, 0}, Q(1)}}}};
    g.prior = {{{0, 0}, Q(1)}};
    g.payoffs = [row_payoff](const std::vector<int>&, const std::vector<int>& msg) {
        return std::vector<Q>{row_payoff[msg[0]][msg[1]], Q(0)};
    };
    return g;
}

}  // namespace

TEST_CASE("micro model: scaling constants") {
    const AmMechanism mech = build_am_mechanism(testing::typespace("micro"), q("1/100"));
    CHECK(mech.kbar == 0);
    CHECK(mech.K == 1);
    CHECK(mech.beta == q("1/800"));
    CHECK(mech.gamma == q("1/1600"));
    CHECK(mech.beta_bar[0] == q("1/1600"));
    CHECK(mech.beta_bar[1] == q("1/400"));
    CHECK(mech.tau3 == q("3/6400"));
    CHECK(mech.J == 2134);
    CHECK(mech.tau4 == q("1/27315200"));
    CHECK(mech.chain_holds());
    const TransferBound b = am_transfer_bound(mech);
    CHECK(b.holds);
    CHECK(b.max_abs == q("47/12800"));
    CHECK(b.max_abs <= mech.eps);
}

TEST_CASE("truthful messages are feasible, on target and unfined") {
    for (const char* name : {"micro", "coordination"}) {
        const AmMechanism mech = build_am_mechanism(testing::typespace(name), q("1/100"));
        const TypeSpaceModel& m = mech.model;
        for (const auto& prof : possible_profiles(m)) {
            std::vector<AmMessage> msgs;
            for (int i = 0; i < m.n_agents(); ++i) {
                msgs.push_back(mech.truthful_message(i, prof[i]));
                CHECK(mech.feasible(i, prof[i], msgs.back()));
            }
            CHECK(mech.outcome(msgs) == std::map<int, Q>{{m.f(prof), Q(1)}});
        }
        for (int i = 0; i < m.n_agents(); ++i)
            for (int k = 0; k < mech.K; ++k)
                for (int t = 0; t < m.n_types(i); ++t) {
                    CHECK(mech.report_loss(i, k, t, t) == 0);
                    for (int r = 0; r < m.n_types(i); ++r) CHECK(mech.report_loss(i, k, t, r) >= 0);
                }
    }
}

TEST_CASE("AM requires measurability and evidence incentives") {
    json j = typespace_to_json(testing::typespace("coordination"));
    j["evidence_map"]["A"]["a1"] = json::array();
    j["evidence_map"]["B"]["b1"] = json::array();
    CHECK_THROWS_AS(build_am_mechanism(typespace_from_json(j), q("1/100")), HomViolation);
    CHECK_THROWS(build_am_mechanism(testing::typespace("micro"), Q(0)));
}

TEST_CASE("structured elimination implements f on the fixtures") {
    for (const char* name : {"micro", "coordination"}) {
        INFO(name);
        const AmMechanism mech = build_am_mechanism(testing::typespace(name), q("1/100"));
        const AmIcrReport r = verify_rationalizable_implementation(mech);
        CHECK(r.pass);
        CHECK(r.rounds_pinned == mech.J);
        CHECK_FALSE(r.outcome_mismatch);
        CHECK(r.failures.empty());
        REQUIRE(r.worst);
        CHECK(r.worst->value < 0);
    }
}

TEST_CASE("coordination: too few rounds leaves a certified off-target best-reply set") {
    const AmMechanism full = build_am_mechanism(testing::typespace("coordination"), q("1/100"));
    CHECK(full.J == 1067);
    CHECK(full.tau3 == q("3/3200"));
    const int low = lowered_rounds(full);
    CHECK(low == 533);
    CHECK(low * 2 * full.tau3 <= 1);
    const AmMechanism cut = with_rounds(full, low);
    CHECK(cut.lowered);
    const AmIcrReport r = verify_rationalizable_implementation(cut);
    CHECK_FALSE(r.pass);
    CHECK(r.failure_certified);
    REQUIRE(r.failing_profile);
    CHECK(static_cast<int>(r.failing_profile->size()) == cut.n_agents());
    for (const auto& br : r.best_replies) CHECK(br.best_reply());
}

TEST_CASE("explicit elimination agrees with the structured one at small J") {
    // parameters large enough that the chain holds with two or three rounds
    const AmParams good{Q(4), q("3/4"), q("1/16"), 2};
    const AmParams three{Q(4), q("3/4"), q("1/32"), 3};
    // and two that break it: fines below 1/J
    const AmParams weak{Q(4), q("1/4"), q("1/64"), 2};
    const AmParams tiny{Q(4), q("1/8"), q("1/64"), 3};
    for (const char* name : {"coordination", "micro"})
        for (const AmParams& p : {good, three, weak, tiny}) {
            const AmMechanism mech = build_am_with_params(testing::typespace(name), Q(100), p);
            CHECK(mech.gamma == p.beta / (2 * mech.K));
            const AmIcrReport r = verify_rationalizable_implementation(mech);
            const bool structured_ok = r.rounds_pinned == mech.J && !r.outcome_mismatch;
            for (const TsUtility* u : utilities(mech.model)) {
                INFO(name << " J=" << p.J << " tau3=" << p.tau3 << " utility " << (u ? u->name : "constant"));
                const ExplicitResult ex = explicit_icr(mech, u);
                if (structured_ok) {
                    CHECK(ex.on_target);
                    CHECK(ex.pinned);
                }
                if (r.failure_certified && r.failing_utility == (u ? u->name : "constant")) CHECK_FALSE(ex.on_target);
            }
        }
}

TEST_CASE("transfer bound covers every explicit message profile") {
    const AmParams p{Q(4), q("3/4"), q("1/16"), 2};
    for (const char* name : {"coordination", "micro"}) {
        const AmMechanism mech = build_am_with_params(testing::typespace(name), Q(100), p);
        const TransferBound b = am_transfer_bound(mech);
        const AmGame g = am_explicit_game(mech, nullptr);
        const int n = mech.n_agents();
        std::vector<std::size_t> pick(n, 0);
        std::size_t seen = 0;
        while (true) {
            std::vector<AmMessage> msgs;
            for (int i = 0; i < n; ++i) msgs.push_back(g.catalog[i][pick[i]]);
            const std::vector<Q> t = mech.transfers(msgs);
            for (int i = 0; i < n; ++i) {
                CHECK(t[i] <= b.upper[i]);
                CHECK(t[i] >= b.lower[i]);
                CHECK(abs(t[i]) <= b.component_sum[i]);
            }
            ++seen;
            int i = 0;
            while (i < n && ++pick[i] == g.catalog[i].size()) pick[i++] = 0;
            if (i == n) break;
        }
        CHECK(seen > 1);
    }
}

TEST_CASE("explicit games refuse oversized catalogs") {
    const AmMechanism mech = build_am_mechanism(testing::typespace("micro"), q("1/100"));
    CHECK_THROWS_AS(am_explicit_game(mech, nullptr), BudgetExceeded);
}

TEST_CASE("elimination removes a pure-dominated message") {
    // r1 beats r0 against every column
    const IcrTable t = icr_eliminate(matrix_game({{Q(0), Q(1)}, {Q(2), Q(3)}}));
    CHECK(t.monotone());
    CHECK(t.fixed_point()[0][0] == std::vector<int>{1});
    CHECK(t.fixed_point()[1][0] == std::vector<int>({0, 1}));
}

TEST_CASE("elimination keeps everything when payoffs are flat") {
    const IcrTable t = icr_eliminate(matrix_game({{Q(1), Q(1)}, {Q(1), Q(1)}, {Q(1), Q(1)}}));
    CHECK(t.fixed_point()[0][0] == std::vector<int>({0, 1, 2}));
    CHECK(t.rounds.size() >= 1);
}

TEST_CASE("elimination uses mixed conjectures") {
    // r2 is a best reply only to a mixture of the columns
    const IcrTable keep = icr_eliminate(matrix_game({{Q(3), Q(0)}, {Q(0), Q(3)}, {Q(2), Q(2)}}));
    CHECK(keep.fixed_point()[0][0] == std::vector<int>({0, 1, 2}));
    // r2 is dominated by the half-half mixture of r0 and r1 but by neither alone
    const IcrTable drop = icr_eliminate(matrix_game({{Q(3), Q(0)}, {Q(0), Q(3)}, {Q(1), Q(1)}}));
    CHECK(drop.fixed_point()[0][0] == std::vector<int>({0, 1}));
}

TEST_CASE("embedded perturbed table with constant utilities") {
    Scenario scn = testing::flat("perturbed");
    scn.utilities.clear();
    const AmMechanism mech = build_am_mechanism(embed_flat_scenario(scn), q("1/100"));
    CHECK(mech.kbar == 1);
    CHECK(mech.chain_holds());
    CHECK(mech.min_beta_bar() - (mech.tau3 + mech.J * mech.tau4) > 0);
    CHECK(mech.tau3 - Q(1) / mech.J > 0);
    CHECK(am_transfer_bound(mech).holds);
    CHECK(verify_rationalizable_implementation(mech).pass);

    // the fixture's own utility profiles break evidence incentives
    CHECK_THROWS_AS(build_am_mechanism(embed_flat_scenario(testing::flat("perturbed")), q("1/100")), EicViolation);
}

TEST_CASE("constant rules are implemented on any model") {
    TypeSpaceModel m = testing::typespace("coordination");
    std::fill(m.scf.begin(), m.scf.end(), 0);
    const AmMechanism mech = build_am_mechanism(m, q("1/100"));
    CHECK(verify_rationalizable_implementation(mech).pass);
}
