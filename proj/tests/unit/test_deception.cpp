#include "support.hpp"

#include <doctest.h>

using namespace uev;
using testing::coll;
using testing::flat;
using testing::q;

namespace {

Bet hand_bet(const Scenario& scn) {
    Bet b;
    b.agent = 0;
    b.truth = scn.state_index("M");
    b.lie = scn.state_index("H");
    b.weights = {{coll(scn, {"eLMH"}), Q(1)}, {coll(scn, {"eMH", "eLMH"}), Q(-1)}};
    std::sort(b.weights.begin(), b.weights.end());
    return b;
}

}  // namespace

TEST_CASE("perfect deception H to M on the leading table") {
    const Scenario scn = flat("leading");
    const int H = scn.state_index("H"), M = scn.state_index("M");
    auto plan = find_perfect_deception(scn, 0, H, M);
    REQUIRE(plan);
    CHECK(plan_is_valid(scn, *plan));
    const Distribution ind = induced_distribution(*plan);
    CHECK(ind.prob(coll(scn, {"eMH", "eLMH"})) == q("2/5"));
    CHECK(ind.prob(coll(scn, {"eLMH"})) == q("3/5"));
    CHECK(ind == scn.p(0, M));
    CHECK_FALSE(find_perfect_deception(scn, 0, M, H));
}

TEST_CASE("the hand-written plan at H induces the M distribution") {
    const Scenario scn = flat("leading");
    TransportPlan p;
    p.agent = 0;
    p.source_state = scn.state_index("H");
    p.target_state = scn.state_index("M");
    const Collection big = coll(scn, {"eMH", "eLMH"}), small = coll(scn, {"eLMH"});
    p.flows = {{big, big, q("3/5") * q("2/3")}, {big, small, q("3/5") * q("1/3")}, {small, small, q("2/5")}};
    CHECK(plan_is_valid(scn, p));
    const Distribution d = induced_distribution(p);
    CHECK(d.prob(big) == q("2/5"));
    CHECK(d.prob(small) == q("3/5"));
}

TEST_CASE("identity plans and self deceptions") {
    const Scenario scn = flat("perturbed");
    for (int a = 0; a < scn.n_agents(); ++a)
        for (int s = 0; s < scn.n_states(); ++s) {
            CHECK(induced_distribution(identity_plan(scn, a, s)) == scn.p(a, s));
            CHECK(find_perfect_deception(scn, a, s, s));
            CHECK(find_pure_perfect_deception(scn, a, s, s));
        }
}

TEST_CASE("min cut witnesses infeasibility exactly") {
    const Scenario scn = flat("leading");
    const auto an = analyze_perfect_deception(scn, 0, scn.state_index("M"), scn.state_index("H"));
    CHECK(an.flow_value < 1);
    REQUIRE(an.cut);
    CHECK(an.cut->verified);
    CHECK(an.cut->demand > an.cut->supply);
}

TEST_CASE("pure-perfect deceptions") {
    const Scenario gap = flat("nppd_gap");
    auto pp = find_pure_perfect_deception(gap, 0, gap.state_index("H"), gap.state_index("U"));
    REQUIRE(pp);
    CHECK(pp->assignment.size() == 2);
    CHECK(induced_distribution(gap, *pp) == gap.p(0, gap.state_index("U")));

    const Scenario lead = flat("leading");
    CHECK_FALSE(find_pure_perfect_deception(lead, 0, lead.state_index("H"), lead.state_index("M")));
}

TEST_CASE("hand bet on the leading table") {
    const Scenario scn = flat("leading");
    const Bet b = hand_bet(scn);
    CertReport c = certify_bet(scn, b, DeceptionDomain::SupportTargets);
    CHECK(c.truth_value == q("-1/5"));
    CHECK(c.worst_case == q("1/5"));
    CHECK(c.pass);

    // free withholding lets the {eLMH} holder show nothing
    c = certify_bet(scn, b, DeceptionDomain::AllSubsets);
    CHECK(c.truth_value == q("-1/5"));
    CHECK(c.worst_case == q("-2/5"));
    CHECK_FALSE(c.pass);

    Bet neg = b.scaled(Q(-1));
    c = certify_bet(scn, neg, DeceptionDomain::SupportTargets);
    CHECK(c.truth_value == q("1/5"));
    CHECK(c.worst_case == -1);
    CHECK_FALSE(c.pass);

    Bet zero = b;
    zero.weights.clear();
    c = certify_bet(scn, zero);
    CHECK(c.truth_value == 0);
    CHECK(c.worst_case == 0);
    CHECK_FALSE(c.pass);
}

TEST_CASE("synthesized bets certify and survive positive scaling") {
    const Scenario scn = flat("leading");
    const Bet b = synthesize_bet(scn, 0, scn.state_index("M"), scn.state_index("H"));
    CHECK(b.margin > 0);
    CHECK(b.max_abs() <= 1);
    const CertReport c = certify_bet(scn, b);
    CHECK(c.pass);
    CHECK(c.truth_value <= -b.margin);
    CHECK(c.worst_case >= b.margin);
    CHECK(c.worst_case == sourcewise_min(scn, b));
    for (const char* k : {"1/7", "3", "1000"}) CHECK(certify_bet(scn, b.scaled(q(k))).pass);
    CHECK_THROWS_AS(synthesize_bet(scn, 0, scn.state_index("H"), scn.state_index("M")), InfeasibleSeparation);
}

TEST_CASE("bet against a collection absent at the truth") {
    Scenario scn;
    scn.agents = {"A"};
    scn.states = {"X", "Y"};
    scn.articles = {"a", "b"};
    scn.outcomes = {"x", "y"};
    scn.prior = {{Distribution::from_masses({{Collection{0}, Q(1)}}), Distribution::from_masses({{Collection{1}, Q(1)}})}};
    scn.scf = {0, 1};
    const Bet b = synthesize_bet(scn, 0, 0, 1);
    CHECK(b.margin > 0);
    CHECK(b.weight(Collection{1}) < 0);
    CHECK(certify_bet(scn, b).pass);
}

TEST_CASE("gamma-delta construction") {
    const Scenario lead = flat("leading");
    const int H = lead.state_index("H"), M = lead.state_index("M");
    // every source relabelled M, evidence kept
    PurePlan p;
    p.agent = 0;
    p.source_state = H;
    p.target_state = M;
    for (const auto& [c, w] : lead.p(0, H).support) p.assignment.emplace_back(c, c);
    const GammaDelta g = synthesize_gamma_delta(lead, p);
    CHECK(g.deceive_value > 0);
    CHECK(g.truth_value < 0);
    CHECK(g.deficit == coll(lead, {"eLMH"}));
    CHECK(g.excess == coll(lead, {"eMH", "eLMH"}));

    CHECK_THROWS_AS(synthesize_gamma_delta(lead.p(0, M), lead.p(0, M)), NoImbalance);

    const Scenario gap = flat("nppd_gap");
    const int Hg = gap.state_index("H"), Ug = gap.state_index("U");
    PurePlan keep;
    keep.agent = 0;
    keep.source_state = Hg;
    keep.target_state = Ug;
    for (const auto& [c, w] : gap.p(0, Hg).support) keep.assignment.emplace_back(c, c);
    const GammaDelta g2 = synthesize_gamma_delta(gap, keep);
    CHECK(g2.deceive_value > 0);
    CHECK(g2.truth_value < 0);
}

TEST_CASE("perfect deception and separating bet are exclusive on every fixture pair") {
    for (const char* name : {"leading", "perturbed", "nppd_gap", "most_informative", "micro"}) {
        const Scenario scn = flat(name);
        for (int a = 0; a < scn.n_agents(); ++a)
            for (int s = 0; s < scn.n_states(); ++s)
                for (int s2 = 0; s2 < scn.n_states(); ++s2) {
                    const bool perfect = find_perfect_deception(scn, a, s, s2).has_value();
                    bool bet = false;
                    try {
                        bet = synthesize_bet(scn, a, s, s2).margin > 0;
                    } catch (const InfeasibleSeparation&) {
                    }
                    CHECK_MESSAGE(perfect != bet, name << " agent " << a << " " << s << "->" << s2);
                    if (find_pure_perfect_deception(scn, a, s, s2)) CHECK(perfect);
                }
    }
}
