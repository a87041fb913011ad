#include "uev/conditions.hpp"

namespace uev {

Verdict check_stochastic_measurability(const Scenario& scn) {
    Verdict v;
    v.condition = "sm";
    for (int s = 0; s < scn.n_states(); ++s)
        for (int s2 = 0; s2 < scn.n_states(); ++s2) {
            if (s == s2 || scn.scf[s] == scn.scf[s2]) continue;
            bool differ = false;
            for (int a = 0; a < scn.n_agents() && !differ; ++a) differ = scn.p(a, s) != scn.p(a, s2);
            if (differ) {
                PairBlock b;
                b.s = s;
                b.s2 = s2;
                b.kind = PairBlock::Kind::DistinctProfiles;
                v.blocks.push_back(b);
            } else {
                v.pass = false;
                PairFailure f;
                f.s = s;
                f.s2 = s2;
                for (int a = 0; a < scn.n_agents(); ++a) f.plans.push_back(identity_plan(scn, a, s));
                for (auto& p : f.plans) p.target_state = s2;
                v.failures.push_back(std::move(f));
            }
        }
    return v;
}

namespace {

Verdict check_deception_condition(const Scenario& scn, bool pure) {
    Verdict v;
    v.condition = pure ? "nppd" : "npd";
    for (int s = 0; s < scn.n_states(); ++s)
        for (int s2 = 0; s2 < scn.n_states(); ++s2) {
            if (s == s2 || scn.scf[s] == scn.scf[s2]) continue;
            LieClass lc = classify_lie(scn, s, s2);
            if (lc.verdict == LieVerdict::RefutableBy) {
                PairBlock b;
                b.s = s;
                b.s2 = s2;
                b.kind = PairBlock::Kind::Refutable;
                b.lie = lc;
                v.blocks.push_back(std::move(b));
                continue;
            }
            PairFailure f;
            f.s = s;
            f.s2 = s2;
            std::optional<PairBlock> block;
            for (int a = 0; a < scn.n_agents(); ++a) {
                if (pure) {
                    auto pp = find_pure_perfect_deception(scn, a, s, s2);
                    if (pp) {
                        f.pure_plans.push_back(*pp);
                        continue;
                    }
                } else {
                    auto an = analyze_perfect_deception(scn, a, s, s2);
                    if (an.plan) {
                        f.plans.push_back(*an.plan);
                        continue;
                    }
                }
                PairBlock b;
                b.s = s;
                b.s2 = s2;
                b.kind = PairBlock::Kind::NoDeception;
                b.agent = a;
                auto an = analyze_perfect_deception(scn, a, s, s2);
                b.flow_value = an.flow_value;
                b.cut = an.cut;
                block = std::move(b);
                break;
            }
            if (block) {
                v.blocks.push_back(std::move(*block));
            } else {
                v.pass = false;
                v.failures.push_back(std::move(f));
            }
        }
    return v;
}

}  // namespace

Verdict check_npd(const Scenario& scn) { return check_deception_condition(scn, false); }
Verdict check_nppd(const Scenario& scn) { return check_deception_condition(scn, true); }

}  // namespace uev
