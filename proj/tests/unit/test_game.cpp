#include "support.hpp"

#include <doctest.h>

using namespace uev;
using testing::flat;
using testing::q;

TEST_CASE("truthful play is a BNE with target outcome and no transfers") {
    for (const char* name : {"perturbed", "leading"}) {
        const Scenario scn = flat(name);
        const Mechanism mech = std::string(name) == "perturbed" ? build_bne_mechanism(scn) : build_pure_mechanism(scn);
        std::vector<const UtilityProfile*> us{nullptr};
        for (const auto& u : scn.utilities) us.push_back(&u);
        for (int s = 0; s < scn.n_states(); ++s)
            for (const UtilityProfile* u : us) {
                const MechanismGame mg = make_mechanism_game(mech, s, u);
                const StrategyProfile truth = truthful_profile(mech, mg);
                REQUIRE(profile_is_valid(mg.game, truth));
                const EquilibriumReport r = verify_bne(mg.game, truth);
                CHECK(r.bne);
                CHECK(r.outcome_dist == std::map<int, Q>{{scn.scf[s], Q(1)}});
                CHECK(r.transfers_zero_on_path());
            }
    }
}

TEST_CASE("truthful expected utility is the bare utility of the target outcome") {
    const Scenario scn = flat("perturbed");
    const Mechanism mech = build_bne_mechanism(scn);
    const UtilityProfile* u = &scn.utilities[0];
    for (int s = 0; s < scn.n_states(); ++s) {
        const MechanismGame mg = make_mechanism_game(mech, s, u);
        const StrategyProfile truth = truthful_profile(mech, mg);
        for (int i = 0; i < scn.n_agents(); ++i)
            for (std::size_t t = 0; t < mg.types[i].size(); ++t) {
                const int msg = truth.sigma[i][t][0].first;
                CHECK(expected_utility(mg.game, i, static_cast<int>(t), msg, truth) == u->u[i][scn.scf[s]][s]);
            }
    }
}

TEST_CASE("expected utility is linear in the own mixture") {
    const Scenario scn = flat("perturbed");
    const Mechanism mech = build_bne_mechanism(scn);
    const MechanismGame mg = make_mechanism_game(mech, 0, &scn.utilities[1]);
    const StrategyProfile truth = truthful_profile(mech, mg);
    for (int i = 0; i < scn.n_agents(); ++i)
        for (std::size_t t = 0; t < mg.types[i].size(); ++t) {
            const auto& feas = mg.game.feasible[i][t];
            if (feas.size() < 2) continue;
            const int a = feas.front(), b = feas.back();
            for (const char* w : {"1/3", "5/7"}) {
                const Q x = q(w);
                const Mixed mix{{a, x}, {b, 1 - x}};
                const Q lhs = expected_utility(mg.game, i, static_cast<int>(t), mix, truth);
                const Q rhs = x * expected_utility(mg.game, i, static_cast<int>(t), a, truth) +
                              (1 - x) * expected_utility(mg.game, i, static_cast<int>(t), b, truth);
                CHECK(lhs == rhs);
            }
        }
}

TEST_CASE("agreeing to a refutable lie is not an equilibrium") {
    const Scenario scn = flat("perturbed");
    const Mechanism mech = build_bne_mechanism(scn);
    const int H = scn.state_index("H"), M = scn.state_index("M");
    const MechanismGame mg = make_mechanism_game(mech, H, nullptr);
    // everyone claims M while the evidence is drawn at H
    std::vector<std::vector<int>> choice(scn.n_agents());
    for (int i = 0; i < scn.n_agents(); ++i)
        for (const auto& e : mg.types[i]) {
            Message msg = mech.truthful_message(i, M, e);
            msg.evidence = e;
            msg.state = M;
            choice[i].push_back(mg.message_id(i, msg));
        }
    const EquilibriumReport r = verify_bne(mg.game, pure_profile(choice));
    CHECK_FALSE(r.bne);
    REQUIRE(r.witness);
    CHECK(r.witness->gain > 0);
}

TEST_CASE("single-message games are trivially in equilibrium") {
    FiniteGame g;
    g.n = 1;
    g.type_labels = {{"t"}};
    g.message_labels = {{"m"}};
    g.feasible = {{{0}}};
    g.beliefs = {{{{{0}, Q(1)}}}};
    g.prior = {{{0}, Q(1)}};
    g.payoffs = [](const std::vector<int>&, const std::vector<int>&) { return std::vector<Q>{Q(0)}; };
    CHECK(verify_bne(g, pure_profile({{0}})).bne);
}

TEST_CASE("closure audit replays the leading deception") {
    const Scenario scn = flat("leading");
    const Mechanism direct = build_direct_mechanism(scn);
    const Verdict v = check_npd(scn);
    REQUIRE_FALSE(v.pass);
    const auto& f = v.failures[0];
    std::vector<const UtilityProfile*> us{nullptr};
    for (const auto& u : scn.utilities) us.push_back(&u);
    for (const UtilityProfile* u : us) {
        const ClosureReport c = deception_closure_audit(direct, f.s, f.plans, u);
        CHECK(c.implication_holds());
        if (u) continue;  // with utilities the deception need not be an equilibrium
        CHECK(c.premise.bne);
        CHECK(c.certified);
        CHECK(c.report.outcome_dist == std::map<int, Q>{{scn.scf[f.s2], Q(1)}});
    }
}

TEST_CASE("identity deception closes on truthful play") {
    const Scenario scn = flat("perturbed");
    const Mechanism mech = build_bne_mechanism(scn);
    for (int s = 0; s < scn.n_states(); ++s) {
        std::vector<TransportPlan> id;
        for (int a = 0; a < scn.n_agents(); ++a) id.push_back(identity_plan(scn, a, s));
        const ClosureReport c = deception_closure_audit(mech, s, id, nullptr);
        CHECK(c.certified);
        CHECK(c.report.outcome_dist == std::map<int, Q>{{scn.scf[s], Q(1)}});
    }
}

TEST_CASE("no perfect attempt from M to H in the perturbed table") {
    const Scenario scn = flat("perturbed");
    const auto an = analyze_perfect_deception(scn, 0, scn.state_index("M"), scn.state_index("H"));
    CHECK(an.flow_value < 1);
    CHECK_FALSE(an.plan);
    CHECK(an.cut);
}

TEST_CASE("search finds only on-target equilibria on built mechanisms") {
    for (const char* name : {"perturbed", "micro"}) {
        const Scenario scn = flat(name);
        const Mechanism mech = build_bne_mechanism(scn);
        for (int s = 0; s < scn.n_states(); ++s) {
            const MechanismGame mg = make_mechanism_game(mech, s, scn.utilities.empty() ? nullptr : &scn.utilities[0]);
            const SearchResult r = search_equilibria(mech, mg, SearchBudget{});
            CHECK_FALSE(r.found.empty());
            for (const auto& e : r.found) {
                CHECK(verify_bne(mg.game, e.profile).bne);
                CHECK(e.report.outcome_dist == std::map<int, Q>{{scn.scf[s], Q(1)}});
                CHECK(e.report.transfers_zero_on_path());
            }
        }
    }
}

TEST_CASE("search on the leading direct game finds the deception equilibrium") {
    const Scenario scn = flat("leading");
    const Mechanism direct = build_direct_mechanism(scn);
    const int H = scn.state_index("H"), M = scn.state_index("M");
    const MechanismGame mg = make_mechanism_game(direct, H, nullptr);
    const SearchResult r = search_equilibria(direct, mg, SearchBudget{});
    bool off = false;
    for (const auto& e : r.found)
        if (e.report.outcome_dist.count(scn.scf[M]) && e.report.outcome_dist.at(scn.scf[M]) == 1) off = true;
    CHECK(off);
}

TEST_CASE("empty budgets report exhaustion") {
    const Scenario scn = flat("perturbed");
    const Mechanism mech = build_bne_mechanism(scn);
    const MechanismGame mg = make_mechanism_game(mech, 0, nullptr);
    SearchBudget b;
    b.pure_cap = 0;
    b.family_cap = 0;
    b.seeds = 0;
    const SearchResult r = search_equilibria(mech, mg, b);
    CHECK(r.found.empty());
    bool flagged = false;
    for (const auto& [k, v] : r.budget_exceeded) flagged = flagged || v;
    CHECK(flagged);
}

TEST_CASE("claim audits pass on the perturbed mechanism; lowering the refutation fine breaks the refutable-lie audit") {
    Mechanism mech = build_bne_mechanism(flat("perturbed"));
    const AuditSuite s = claim_audits(mech);
    CHECK(s.pass());
    for (const char* n : {"truth_dominance", "consistency", "refutable_lie", "nonrefutable_lie", "truthful"})
        CHECK(s.find(n).pass());

    mech.scaling.tau_high = 1;
    const AuditSuite low = claim_audits(mech);
    CHECK_FALSE(low.find("refutable_lie").pass());
}

TEST_CASE("claim audits on a single state pass vacuously") {
    const Mechanism mech = build_bne_mechanism(flat("single_state"));
    CHECK(claim_audits(mech).pass());
}
