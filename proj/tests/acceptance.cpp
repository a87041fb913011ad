// One PASS/FAIL line per acceptance criterion, with wall time against its limit.
#include "uev/am.hpp"
#include "uev/audits.hpp"
#include "uev/commands.hpp"
#include "uev/conditions.hpp"
#include "uev/deception.hpp"
#include "uev/evidence.hpp"
#include "uev/game.hpp"
#include "uev/hierarchy.hpp"
#include "uev/icr.hpp"
#include "uev/mechanism.hpp"
#include "uev/random_scenario.hpp"
#include "uev/report.hpp"
#include "uev/typespace.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

using namespace uev;

namespace {

std::string fixture(const std::string& name) { return std::string(UEV_FIXTURES) + "/" + name + ".json"; }
Scenario flat(const std::string& name) { return load_scenario_file(fixture(name)); }
Q q(const char* s) { return parse_rational(s); }

// Collects the first failed expectation of a criterion.
struct Probe {
    std::string why;
    void expect(bool ok, const std::string& what) {
        if (!ok && why.empty()) why = what;
    }
    bool ok() const { return why.empty(); }
};

int cli(const std::string& command, const std::string& which, const std::string& name,
        std::optional<int> rounds = std::nullopt) {
    RunConfig c;
    c.command = command;
    c.which = which;
    c.path = fixture(name);
    c.format = "machine";
    c.rounds = rounds;
    return run_command(c).exit_code;
}

Collection coll(const Scenario& scn, std::vector<std::string> ids) { return scn.parse_collection(ids); }

std::vector<Scenario> population() {
    std::vector<Scenario> out;
    for (const char* n : {"leading", "perturbed", "nppd_gap", "most_informative", "micro", "single_state"})
        out.push_back(flat(n));
    for (std::uint64_t seed = 0; seed < 500; ++seed) out.push_back(random_flat_scenario(seed));
    return out;
}

void c1(Probe& p) {
    const Scenario scn = flat("leading");
    p.expect(cli("check", "npd", "leading") == kExitFail, "check npd exit code");
    const Verdict v = check_npd(scn);
    p.expect(!v.pass && v.failures.size() == 1, "exactly one failing pair");
    if (!p.ok()) return;
    const auto& f = v.failures[0];
    p.expect(scn.states[f.s] == "H" && scn.states[f.s2] == "M", "failing pair is (H, M)");
    const Distribution d = induced_distribution(f.plans.at(0));
    p.expect(plan_is_valid(scn, f.plans[0]), "certificate plan valid");
    p.expect(d.prob(coll(scn, {"eMH", "eLMH"})) == q("2/5") && d.prob(coll(scn, {"eLMH"})) == q("3/5"),
             "induced distribution (2/5, 3/5)");
}

void c2(Probe& p) {
    p.expect(cli("check", "nppd", "leading") == kExitPass, "check nppd exit code");
    p.expect(cli("check", "sm", "leading") == kExitPass, "check sm exit code");
    const Scenario scn = flat("leading");
    p.expect(check_nppd(scn).pass && check_stochastic_measurability(scn).pass, "library verdicts");
}

void c3(Probe& p) {
    p.expect(cli("check", "npd", "perturbed") == kExitPass, "check npd exit code");
    const Scenario scn = flat("perturbed");
    const Verdict v = check_npd(scn);
    const int H = scn.state_index("H"), M = scn.state_index("M");
    bool mh = false, hm = false;
    for (const auto& b : v.blocks) {
        if (b.s == M && b.s2 == H) mh = b.kind == PairBlock::Kind::NoDeception && b.flow_value < 1;
        if (b.s == H && b.s2 == M) hm = b.kind == PairBlock::Kind::Refutable && b.lie.witness_mass(0) == q("1/10");
    }
    p.expect(v.pass, "NPD passes");
    p.expect(mh, "(M, H) blocked by max-flow value < 1");
    p.expect(hm, "(H, M) blocked by refutation mass 1/10");
}

void c4(Probe& p) {
    p.expect(cli("check", "sm", "nppd_gap") == kExitPass, "check sm exit code");
    p.expect(cli("check", "nppd", "nppd_gap") == kExitFail, "check nppd exit code");
    const Scenario scn = flat("nppd_gap");
    const Verdict v = check_nppd(scn);
    p.expect(v.failures.size() == 1, "one failing pair");
    if (!p.ok()) return;
    const auto& f = v.failures[0];
    p.expect(scn.states[f.s] == "H" && scn.states[f.s2] == "U", "failing pair is (H, U)");
    p.expect(!f.pure_plans.empty() && f.pure_plans[0].assignment.size() == 2, "two-line pure assignment");
    if (!f.pure_plans.empty())
        p.expect(induced_distribution(scn, f.pure_plans[0]) == scn.p(f.pure_plans[0].agent, f.s2),
                 "assignment induces p(U)");
}

void c5(Probe& p) {
    const Scenario scn = flat("leading");
    const int H = scn.state_index("H"), M = scn.state_index("M");
    Bet hand;
    hand.agent = 0;
    hand.truth = M;
    hand.lie = H;
    hand.weights = {{coll(scn, {"eLMH"}), Q(1)}, {coll(scn, {"eMH", "eLMH"}), Q(-1)}};
    std::sort(hand.weights.begin(), hand.weights.end());
    const CertReport c = certify_bet(scn, hand, DeceptionDomain::SupportTargets);
    p.expect(c.truth_value == q("-1/5") && c.worst_case == q("1/5") && c.pass, "hand bet (-1/5, +1/5, pass)");
    const Bet b = synthesize_bet(scn, 0, M, H);
    const CertReport cs = certify_bet(scn, b);
    p.expect(b.margin > 0, "synthesized margin positive");
    p.expect(cs.pass && cs.plans > 0, "synthesized bet certified by enumeration of pure plans");
}

void c6(Probe& p) {
    for (const std::string name : {"perturbed", "leading"}) {
        const Scenario scn = flat(name);
        const Mechanism mech = name == "perturbed" ? build_bne_mechanism(scn) : build_pure_mechanism(scn);
        for (int s = 0; s < scn.n_states(); ++s) {
            const MechanismGame mg = make_mechanism_game(mech, s, nullptr);
            const EquilibriumReport r = verify_bne(mg.game, truthful_profile(mech, mg));
            p.expect(r.bne, name + ": truthful profile is a BNE at " + scn.states[s]);
            p.expect(r.outcome_dist == std::map<int, Q>{{scn.scf[s], Q(1)}}, name + ": outcome f(s)");
            p.expect(r.transfers_zero_on_path(), name + ": transfers zero on path");
            // every component, every endowment profile
            std::vector<std::size_t> pick(scn.n_agents(), 0);
            while (true) {
                std::vector<Message> m;
                for (int i = 0; i < scn.n_agents(); ++i)
                    m.push_back(mech.truthful_message(i, s, scn.p(i, s).support[pick[i]].first));
                const Transfers t = mech.transfers(m);
                for (const auto& part : t.parts) {
                    p.expect(part.size() == 5, "five transfer components");
                    for (const auto& x : part) p.expect(x == 0, name + ": component nonzero on truth");
                }
                int i = 0;
                while (i < scn.n_agents() && ++pick[i] == scn.p(i, s).support.size()) pick[i++] = 0;
                if (i == scn.n_agents()) break;
            }
        }
    }
}

void c7(Probe& p) {
    Mechanism mech = build_bne_mechanism(flat("perturbed"));
    const AuditSuite s = claim_audits(mech);
    p.expect(s.pass(), "claim audits pass");
    p.expect(cli("audit", "claims", "perturbed") == kExitPass, "audit claims exit code");
    mech.scaling.tau_high = 1;
    p.expect(!claim_audits(mech).find("refutable_lie").pass(), "lowered refutation fine fails the refutable-lie audit");
}

void c8(Probe& p) {
    const Scenario scn = flat("leading");
    const Verdict v = check_npd(scn);
    p.expect(!v.pass, "NPD fails");
    if (!p.ok()) return;
    const auto& f = v.failures[0];
    const ClosureReport c = deception_closure_audit(build_direct_mechanism(scn), f.s, f.plans, nullptr);
    p.expect(scn.states[f.s] == "H", "deception at H");
    p.expect(c.certified && c.premise.bne, "certified BNE");
    p.expect(c.report.outcome_dist == std::map<int, Q>{{scn.scf[scn.state_index("M")], Q(1)}}, "outcome f(M)");
    p.expect(cli("audit", "closure", "leading") == kExitPass, "audit closure exit code");
}

void c9(Probe& p) {
    std::size_t pairs = 0;
    for (const Scenario& scn : population())
        for (int a = 0; a < scn.n_agents(); ++a)
            for (int s = 0; s < scn.n_states(); ++s)
                for (int s2 = 0; s2 < scn.n_states(); ++s2) {
                    const bool perfect = find_perfect_deception(scn, a, s, s2).has_value();
                    bool bet = false;
                    try {
                        bet = synthesize_bet(scn, a, s, s2).margin > 0;
                    } catch (const InfeasibleSeparation&) {
                    }
                    p.expect(perfect != bet, "perfect deception and positive-margin bet not exclusive");
                    ++pairs;
                }
    p.expect(pairs > 1000, "population too small");
}

void c10(Probe& p) {
    int npd_gap = 0, nppd_gap = 0;
    for (const Scenario& scn : population()) {
        const bool npd = check_npd(scn).pass, nppd = check_nppd(scn).pass, sm = check_stochastic_measurability(scn).pass;
        p.expect(!npd || nppd, "NPD pass without NPPD pass");
        p.expect(!nppd || sm, "NPPD pass without SM pass");
        npd_gap += !npd && nppd;
        nppd_gap += !nppd && sm;
    }
    p.expect(npd_gap > 0, "no witness separating NPD from NPPD");
    p.expect(nppd_gap > 0, "no witness separating NPPD from SM");
}

void c11(Probe& p) {
    RandomSpec spec;
    spec.min_agents = 2;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const Scenario scn = random_flat_scenario(seed, spec);
        p.expect(check_higher_order_measurability(embed_flat_scenario(scn)).pass ==
                     check_stochastic_measurability(scn).pass,
                 "verdicts differ at seed " + std::to_string(seed));
    }
}

void c12(Probe& p) {
    p.expect(cli("build", "am", "micro") == kExitPass, "build am exit code");
    const TypeSpaceModel micro = embed_flat_scenario(flat("micro"));
    const AmMechanism mech = build_am_mechanism(micro, q("1/100"));
    const TransferBound b = am_transfer_bound(mech);
    p.expect(b.holds && b.max_abs <= q("1/100"), "transfer bound within eps");
    const AmIcrReport r = verify_rationalizable_implementation(mech);
    p.expect(r.pass && r.rounds_pinned == mech.J && !r.outcome_mismatch, "survivors yield f(t)");
    p.expect(cli("audit", "icr", "micro") == kExitPass, "audit icr exit code");

    // exact LP elimination on the explicit game at small J
    const AmParams small{Q(4), q("3/4"), q("1/16"), 2};
    const AmMechanism tiny = build_am_with_params(micro, Q(100), small);
    const AmIcrReport rt = verify_rationalizable_implementation(tiny);
    p.expect(rt.pass, "structured elimination at J = 2");
    std::vector<const TsUtility*> us{nullptr};
    for (const auto& u : micro.utilities) us.push_back(&u);
    for (const TsUtility* u : us) {
        const AmGame g = am_explicit_game(tiny, u);
        const auto fp = icr_eliminate(g.game).fixed_point();
        for (const auto& prof : possible_profiles(micro)) {
            std::vector<std::size_t> pick(micro.n_agents(), 0);
            while (true) {
                std::vector<AmMessage> msgs;
                for (int i = 0; i < micro.n_agents(); ++i) msgs.push_back(g.catalog[i][fp[i][prof[i]][pick[i]]]);
                const auto dist = tiny.outcome(msgs);
                p.expect(dist.size() == 1 && dist.begin()->first == micro.f(prof), "explicit survivor off f(t)");
                int i = 0;
                while (i < micro.n_agents() && ++pick[i] == fp[i][prof[i]].size()) pick[i++] = 0;
                if (i == micro.n_agents()) break;
            }
        }
    }

    // negative control: too few rounds on the coordination model
    const TypeSpaceModel coord = load_typespace_file(fixture("coordination"));
    const AmMechanism full = build_am_mechanism(coord, q("1/100"));
    p.expect(verify_rationalizable_implementation(full).pass, "coordination passes at the computed J");
    const int low = lowered_rounds(full);
    const AmIcrReport rl = verify_rationalizable_implementation(with_rounds(full, low));
    p.expect(!rl.pass && rl.failure_certified, "J-lowered control fails with a certified best-reply set");
    p.expect(cli("audit", "icr", "coordination", low) == kExitFail, "audit icr --rounds exit code");
}

void c13(Probe& p) {
    for (std::uint64_t seed = 0; seed < 200; ++seed)
        p.expect(check_deterministic_equivalence(random_degenerate_scenario(seed)).agree(),
                 "verdicts differ at seed " + std::to_string(seed));
}

void c14(Probe& p) {
    const Scenario full = flat("most_informative");
    const int M = full.state_index("M"), H = full.state_index("H");
    p.expect(!find_perfect_deception(full, 0, M, H) && !find_perfect_deception(full, 0, H, M),
             "full collections admit no perfect deception");
    const Scenario proj = project_most_informative(full);
    p.expect(find_perfect_deception(proj, 0, M, H) && find_perfect_deception(proj, 0, H, M),
             "projection admits both deceptions");
}

struct Criterion {
    int id;
    const char* name;
    long limit_ms;
    std::function<void(Probe&)> run;
};

}  // namespace

int main() {
    const std::vector<Criterion> all{
        {1, "leading: NPD fails exactly on (H, M) with a (2/5, 3/5) transport", 1000, c1},
        {2, "leading: NPPD and SM pass", 1000, c2},
        {3, "perturbed: NPD passes, flow and refutation blocks", 1000, c3},
        {4, "strictness example: SM passes, NPPD fails on (H, U)", 1000, c4},
        {5, "hand bet (-1/5, +1/5, pass) and synthesized bet certified", 1000, c5},
        {6, "zero transfers and f(s) on truthful play", 5000, c6},
        {7, "claim audits pass; lowered refutation fine caught", 10000, c7},
        {8, "necessity replay: BNE at H with outcome f(M)", 5000, c8},
        {9, "deception/bet duality over fixtures and 500 seeds", 60000, c9},
        {10, "NPD => NPPD => SM with separating witnesses", 60000, c10},
        {11, "HOM of embedding equals SM over 100 seeds", 60000, c11},
        {12, "AM on micro: bound, survivors on f; lowered J fails", 120000, c12},
        {13, "degenerate equivalence over 200 seeds", 10000, c13},
        {14, "most-informative projection loses generality", 1000, c14},
    };
    int failed = 0;
    for (const Criterion& c : all) {
        Probe p;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            c.run(p);
        } catch (const std::exception& e) {
            p.expect(false, std::string("exception: ") + e.what());
        }
        const long ms = static_cast<long>(
            std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - t0).count());
        if (ms >= c.limit_ms) p.expect(false, "over time limit");
        const bool ok = p.ok();
        failed += !ok;
        std::printf("%s %2d %s [%ld ms, limit %ld ms]%s%s\n", ok ? "PASS" : "FAIL", c.id, c.name, ms, c.limit_ms,
                    ok ? "" : ": ", ok ? "" : p.why.c_str());
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(all.size()) - failed, all.size());
    return failed == 0 ? 0 : 1;
}
