#include "support.hpp"

#include <doctest.h>

#include <fstream>

using namespace uev;
using testing::flat;
using testing::q;
using testing::with_scf;

namespace {

std::vector<std::vector<std::string>> failing_pairs(const Scenario& scn, const Verdict& v) {
    std::vector<std::vector<std::string>> out;
    for (const auto& f : v.failures) out.push_back({scn.states[f.s], scn.states[f.s2]});
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<std::vector<std::string>> from_golden(const json& arr) {
    std::vector<std::vector<std::string>> out;
    for (const auto& p : arr) out.push_back({p[0].get<std::string>(), p[1].get<std::string>()});
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<std::string> bits(const Scenario& scn, bool pure) {
    std::vector<std::string> out;
    for (int i = 0; i < scn.n_agents(); ++i)
        for (int s = 0; s < scn.n_states(); ++s) {
            std::string row;
            for (int s2 = 0; s2 < scn.n_states(); ++s2) {
                const bool ok = pure ? find_pure_perfect_deception(scn, i, s, s2).has_value()
                                     : find_perfect_deception(scn, i, s, s2).has_value();
                row += ok ? '1' : '0';
            }
            out.push_back(row);
        }
    return out;
}

void compare_with_oracle(const Scenario& scn, const json& g, const std::string& label) {
    INFO(label);
    CHECK(check_stochastic_measurability(scn).pass == g["sm"].get<bool>());
    CHECK(failing_pairs(scn, check_npd(scn)) == from_golden(g["npd_failures"]));
    CHECK(failing_pairs(scn, check_nppd(scn)) == from_golden(g["nppd_failures"]));
    CHECK(bits(scn, false) == g["perfect"].get<std::vector<std::string>>());
    CHECK(bits(scn, true) == g["pure"].get<std::vector<std::string>>());
}

const json& golden() {
    static const json g = [] {
        std::ifstream in(testing::golden_path("oracle_flat.json"));
        return json::parse(in);
    }();
    return g;
}

}  // namespace

TEST_CASE("leading example: NPD fails exactly on (H, M)") {
    const Scenario scn = flat("leading");
    const Verdict v = check_npd(scn);
    CHECK_FALSE(v.pass);
    REQUIRE(v.failures.size() == 1);
    const auto& f = v.failures[0];
    CHECK(scn.states[f.s] == "H");
    CHECK(scn.states[f.s2] == "M");
    REQUIRE(f.plans.size() == 2);
    const Distribution ind = induced_distribution(f.plans[0]);
    CHECK(ind == scn.p(0, f.s2));
    CHECK(ind.prob(testing::coll(scn, {"eMH", "eLMH"})) == q("2/5"));
    CHECK(ind.prob(testing::coll(scn, {"eLMH"})) == q("3/5"));
    for (const auto& p : f.plans) CHECK(plan_is_valid(scn, p));
}

TEST_CASE("leading example: NPPD and SM pass") {
    const Scenario scn = flat("leading");
    CHECK(check_nppd(scn).pass);
    CHECK(check_stochastic_measurability(scn).pass);
}

TEST_CASE("perturbed example: NPD passes with both directions blocked") {
    const Scenario scn = flat("perturbed");
    const Verdict v = check_npd(scn);
    CHECK(v.pass);
    const int H = scn.state_index("H"), M = scn.state_index("M");
    bool mh = false, hm = false;
    for (const auto& b : v.blocks) {
        if (b.s == M && b.s2 == H) {
            mh = true;
            CHECK(b.kind == PairBlock::Kind::NoDeception);
            CHECK(b.flow_value < 1);
        }
        if (b.s == H && b.s2 == M) {
            hm = true;
            CHECK(b.kind == PairBlock::Kind::Refutable);
            CHECK(b.lie.witness_mass(0) == q("1/10"));
        }
    }
    CHECK(mh);
    CHECK(hm);
}

TEST_CASE("strictness example: SM passes and NPPD fails on (H, U)") {
    const Scenario scn = flat("nppd_gap");
    CHECK(check_stochastic_measurability(scn).pass);
    const Verdict v = check_nppd(scn);
    CHECK_FALSE(v.pass);
    REQUIRE(v.failures.size() == 1);
    CHECK(scn.states[v.failures[0].s] == "H");
    CHECK(scn.states[v.failures[0].s2] == "U");
    REQUIRE_FALSE(v.failures[0].pure_plans.empty());
    CHECK(v.failures[0].pure_plans[0].assignment.size() == 2);
}

TEST_CASE("constant rules pass everything") {
    for (const char* name : {"leading", "perturbed", "nppd_gap"}) {
        Scenario scn = flat(name);
        std::fill(scn.scf.begin(), scn.scf.end(), 0);
        CHECK(check_stochastic_measurability(scn).pass);
        CHECK(check_npd(scn).pass);
        CHECK(check_nppd(scn).pass);
    }
}

TEST_CASE("identical distributions with distinct outcomes fail SM") {
    Scenario scn;
    scn.agents = {"A"};
    scn.states = {"X", "Y"};
    scn.articles = {};
    scn.outcomes = {"x", "y"};
    scn.prior = {{Distribution::from_masses({{Collection{}, Q(1)}}), Distribution::from_masses({{Collection{}, Q(1)}})}};
    scn.scf = {0, 1};
    const Verdict v = check_stochastic_measurability(scn);
    CHECK_FALSE(v.pass);
    REQUIRE_FALSE(v.failures.empty());
}

TEST_CASE("NPD is direction sensitive on the leading table") {
    const Scenario scn = flat("leading");
    const Verdict v = check_npd(scn);
    for (const auto& f : v.failures) CHECK_FALSE((scn.states[f.s] == "M" && scn.states[f.s2] == "H"));
}

TEST_CASE("a perfect deception to a refutable state never fails NPD") {
    // agent A can mimic Y, but B's evidence at X refutes Y
    Scenario scn;
    scn.agents = {"A", "B"};
    scn.states = {"X", "Y"};
    scn.articles = {"a", "b"};
    scn.outcomes = {"x", "y"};
    const Distribution same = Distribution::from_masses({{Collection{0}, Q(1)}});
    scn.prior = {{same, same},
                 {Distribution::from_masses({{Collection{1}, Q(1)}}), Distribution::from_masses({{Collection{}, Q(1)}})}};
    scn.scf = {0, 1};
    CHECK(find_perfect_deception(scn, 0, 0, 1));
    CHECK(classify_lie(scn, 0, 1).verdict == LieVerdict::RefutableBy);
    CHECK(check_npd(scn).pass);
}

TEST_CASE("fixtures agree with the independent oracle") {
    for (const auto& [name, g] : golden()["fixtures"].items()) compare_with_oracle(flat(name), g, name);
}

TEST_CASE("random scenarios agree with the independent oracle") {
    const auto& rows = golden()["random_flat"];
    REQUIRE(rows.size() == 500);
    for (const auto& g : rows) {
        const auto seed = g["seed"].get<std::uint64_t>();
        const Scenario scn = random_flat_scenario(seed);
        REQUIRE_MESSAGE(hex64(fnv1a(scenario_to_json(scn).dump())) == g["digest"].get<std::string>(),
                        "generator drifted at seed " << seed);
        compare_with_oracle(scn, g, "seed " + std::to_string(seed));
    }
}

TEST_CASE("implication chain NPD => NPPD => SM with witnesses for each gap") {
    int npd_gap = 0, nppd_gap = 0;
    auto visit = [&](const Scenario& scn) {
        const bool npd = check_npd(scn).pass, nppd = check_nppd(scn).pass, sm = check_stochastic_measurability(scn).pass;
        if (npd) CHECK(nppd);
        if (nppd) CHECK(sm);
        if (!npd && nppd) ++npd_gap;
        if (!nppd && sm) ++nppd_gap;
    };
    for (std::uint64_t seed = 0; seed < 500; ++seed) visit(random_flat_scenario(seed));
    CHECK(npd_gap > 0);
    CHECK(nppd_gap > 0);
    for (const char* name : {"leading", "perturbed", "nppd_gap", "most_informative", "micro", "single_state"})
        visit(flat(name));
}

TEST_CASE("loss of generality under the most-informative projection") {
    const Scenario full = flat("most_informative");
    const int M = full.state_index("M"), H = full.state_index("H");
    CHECK_FALSE(find_perfect_deception(full, 0, M, H));
    CHECK_FALSE(find_perfect_deception(full, 0, H, M));
    const Scenario proj = project_most_informative(full);
    CHECK(find_perfect_deception(proj, 0, M, H));
    CHECK(find_perfect_deception(proj, 0, H, M));
}

TEST_CASE("rule replacement helper keeps the table") {
    const Scenario s = with_scf(flat("leading"), {"A", "A", "A"});
    CHECK(check_npd(s).pass);
}
