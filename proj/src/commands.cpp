#include "uev/commands.hpp"

#include "uev/am.hpp"
#include "uev/audits.hpp"
#include "uev/conditions.hpp"
#include "uev/evidence.hpp"
#include "uev/hierarchy.hpp"
#include "uev/icr.hpp"
#include "uev/mechanism.hpp"
#include "uev/report.hpp"
#include "uev/typespace.hpp"

#include <fstream>
#include <sstream>

namespace uev {

namespace {

struct Input {
    std::string bytes;
    json doc;
    bool typespace = false;
};

struct Refusal {
    int code;
    json result;
};

Input read_input(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    Input inp;
    inp.bytes = ss.str();
    try {
        inp.doc = json::parse(inp.bytes);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("not valid JSON: ") + e.what());
    }
    inp.typespace = looks_like_typespace(inp.doc);
    return inp;
}

Scenario flat(const Input& in) {
    if (in.typespace) throw Refusal{kExitInvalid, json{{"error", "this command needs a flat scenario, not a type-space model"}}};
    Scenario scn = scenario_from_json(in.doc);
    ValidationReport v = validate_scenario(scn);
    if (!v.valid) throw Refusal{kExitInvalid, json{{"error", "invalid scenario"}, {"validation", to_json(v)}}};
    return scn;
}

TypeSpaceModel model_of(const Input& in) {
    if (in.typespace) {
        TypeSpaceModel m = typespace_from_json(in.doc);
        ValidationReport v = validate_typespace(m);
        if (!v.valid) throw Refusal{kExitInvalid, json{{"error", "invalid model"}, {"validation", to_json(v)}}};
        return m;
    }
    return embed_flat_scenario(flat(in));
}

int verdict_code(bool pass) { return pass ? kExitPass : kExitFail; }

Q parse_eps(const std::string& text) {
    Q e;
    try {
        e = parse_rational(text);
    } catch (const std::exception&) {
        throw Refusal{kExitInvalid, json{{"error", "eps is not a rational: " + text}}};
    }
    if (e <= 0) throw Refusal{kExitInvalid, json{{"error", "eps must be positive"}}};
    return e;
}

std::pair<int, json> cmd_validate(const Input& in) {
    ValidationReport v;
    json j;
    if (in.typespace) {
        v = validate_typespace(typespace_from_json(in.doc));
        j["kind"] = "type_space";
    } else {
        v = validate_scenario(scenario_from_json(in.doc));
        j["kind"] = "flat";
    }
    j["validation"] = to_json(v);
    return {v.valid ? kExitPass : kExitInvalid, j};
}

std::pair<int, json> cmd_check(const Input& in, const std::string& which) {
    if (which == "hom" || which == "eic") {
        TypeSpaceModel m = model_of(in);
        if (which == "hom") {
            auto v = check_higher_order_measurability(m);
            return {verdict_code(v.pass), to_json(m, v)};
        }
        auto v = check_evidence_ic(m);
        return {verdict_code(v.pass), to_json(m, v)};
    }
    Scenario scn = flat(in);
    Verdict v;
    if (which == "sm")
        v = check_stochastic_measurability(scn);
    else if (which == "npd")
        v = check_npd(scn);
    else if (which == "nppd")
        v = check_nppd(scn);
    else
        throw Refusal{kExitInvalid, json{{"error", "unknown check: " + which}}};
    return {verdict_code(v.pass), to_json(scn, v)};
}

std::pair<int, json> cmd_build(const Input& in, const RunConfig& cfg) {
    if (cfg.which == "am") {
        TypeSpaceModel m = model_of(in);
        try {
            AmMechanism mech = build_am_mechanism(m, parse_eps(cfg.eps));
            if (cfg.rounds) mech = with_rounds(mech, *cfg.rounds);
            json j = am_to_json(mech);
            const bool ok = mech.chain_holds() && am_transfer_bound(mech).holds;
            return {verdict_code(ok), j};
        } catch (const HomViolation& e) {
            return {kExitFail, json{{"refused", "hom"}, {"reason", e.what()}, {"hom", to_json(m, check_higher_order_measurability(m))}}};
        } catch (const EicViolation& e) {
            return {kExitFail, json{{"refused", "eic"}, {"reason", e.what()}, {"eic", to_json(m, check_evidence_ic(m))}}};
        }
    }
    Scenario scn = flat(in);
    try {
        if (cfg.which == "bne") {
            Mechanism mech = build_bne_mechanism(scn);
            return {verdict_code(mech.scaling.verified()), to_json(mech)};
        }
        if (cfg.which == "pure") {
            Mechanism mech = build_pure_mechanism(scn);
            return {verdict_code(mech.scaling.verified()), to_json(mech)};
        }
    } catch (const NpdViolation& e) {
        return {kExitFail, json{{"refused", e.verdict.condition}, {"reason", e.what()}, {"verdict", to_json(scn, e.verdict)}}};
    } catch (const DegenerateGap& e) {
        return {kExitFail, json{{"refused", "degenerate"}, {"reason", e.what()}}};
    } catch (const ZOverflow& e) {
        return {kExitFail, json{{"refused", "budget"}, {"reason", e.what()}}};
    }
    throw Refusal{kExitInvalid, json{{"error", "unknown mechanism variant: " + cfg.which}}};
}

// The BNE mechanism when NPD holds, else the pure one when NPPD holds.
std::optional<Mechanism> transfer_mechanism(const Scenario& scn, json& why) {
    try {
        return build_bne_mechanism(scn);
    } catch (const NpdViolation&) {
    }
    try {
        return build_pure_mechanism(scn);
    } catch (const NpdViolation& e) {
        why = json{{"refused", "nppd"}, {"reason", e.what()}, {"verdict", to_json(scn, e.verdict)}};
    } catch (const ZOverflow& e) {
        why = json{{"refused", "budget"}, {"reason", e.what()}};
    }
    return std::nullopt;
}

std::vector<const UtilityProfile*> utility_list(const Scenario& scn) {
    std::vector<const UtilityProfile*> out{nullptr};
    for (const auto& u : scn.utilities) out.push_back(&u);
    return out;
}

std::pair<int, json> audit_closure(const Scenario& scn) {
    json j = json::object();
    json findings = json::array();
    const Verdict npd = check_npd(scn);
    j["npd_pass"] = npd.pass;
    if (!npd.pass) {
        // Deceptions that NPD forbids: replay them against the direct mechanism.
        const Mechanism direct = build_direct_mechanism(scn);
        bool all_hold = true, any_certified = false;
        for (const auto& f : npd.failures)
            for (const UtilityProfile* u : utility_list(scn)) {
                ClosureReport c = deception_closure_audit(direct, f.s, f.plans, u);
                auto mg = make_mechanism_game(direct, f.s, u);
                json fj = to_json(direct, mg, c);
                json plans = json::array();
                for (const auto& p : f.plans) plans.push_back(to_json(scn, p));
                fj["deception"] = plans;
                findings.push_back(fj);
                all_hold = all_hold && c.implication_holds();
                any_certified = any_certified || c.certified;
            }
        j["mechanism"] = "direct";
        j["findings"] = findings;
        j["expected"] = "a certified equilibrium at the truth with the lie's outcome";
        j["pass"] = all_hold && any_certified;
        return {verdict_code(all_hold && any_certified), j};
    }
    // NPD holds: no perfect deception reaches a relevant lie, and truthful
    // play closes under the identity deception.
    json why;
    auto mech = transfer_mechanism(scn, why);
    if (!mech) return {kExitFail, why};
    json blocked = json::array();
    for (int s = 0; s < scn.n_states(); ++s)
        for (int s2 = 0; s2 < scn.n_states(); ++s2) {
            if (!mech->relevant[s][s2]) continue;
            for (int a = 0; a < scn.n_agents(); ++a) {
                auto an = analyze_perfect_deception(scn, a, s, s2);
                if (an.flow_value < 1) {
                    blocked.push_back(json{{"truth", scn.states[s]},
                                           {"lie", scn.states[s2]},
                                           {"agent", scn.agents[a]},
                                           {"not_perfect", true},
                                           {"flow_value", to_string(an.flow_value)}});
                    break;
                }
            }
        }
    bool all = true;
    for (int s = 0; s < scn.n_states(); ++s)
        for (const UtilityProfile* u : utility_list(scn)) {
            std::vector<TransportPlan> id;
            for (int a = 0; a < scn.n_agents(); ++a) id.push_back(identity_plan(scn, a, s));
            ClosureReport c = deception_closure_audit(*mech, s, id, u);
            auto mg = make_mechanism_game(*mech, s, u);
            findings.push_back(to_json(*mech, mg, c));
            all = all && c.certified;
        }
    j["mechanism"] = to_json(*mech)["variant"];
    j["blocked_pairs"] = blocked;
    j["findings"] = findings;
    j["pass"] = all;
    return {verdict_code(all), j};
}

std::pair<int, json> audit_search(const Scenario& scn, const RunConfig& cfg) {
    json why;
    auto mech = transfer_mechanism(scn, why);
    if (!mech) return {kExitFail, why};
    SearchBudget b = cfg.budget;
    b.seed = cfg.seed;
    json runs = json::array();
    bool all = true;
    for (int s = 0; s < scn.n_states(); ++s)
        for (const UtilityProfile* u : utility_list(scn)) {
            auto mg = make_mechanism_game(*mech, s, u);
            SearchResult r = search_equilibria(*mech, mg, b);
            bool ok = true;
            for (const auto& f : r.found)
                for (const auto& [o, w] : f.report.outcome_dist) ok = ok && o == scn.scf[s];
            all = all && ok;
            json rj = to_json(mg, r, scn);
            rj["state"] = scn.states[s];
            rj["utility"] = mg.utility_name;
            rj["all_on_target"] = ok;
            runs.push_back(rj);
        }
    return {verdict_code(all), json{{"mechanism", to_json(*mech)["variant"]}, {"runs", runs}, {"pass", all}}};
}

std::pair<int, json> audit_icr(const Input& in, const RunConfig& cfg) {
    TypeSpaceModel m = model_of(in);
    AmMechanism mech;
    try {
        mech = build_am_mechanism(m, parse_eps(cfg.eps));
    } catch (const HomViolation& e) {
        return {kExitFail, json{{"refused", "hom"}, {"reason", e.what()}}};
    } catch (const EicViolation& e) {
        return {kExitFail, json{{"refused", "eic"}, {"reason", e.what()}}};
    }
    if (cfg.rounds) mech = with_rounds(mech, *cfg.rounds);
    AmIcrReport r = verify_rationalizable_implementation(mech);
    json j = json{{"mechanism", am_to_json(mech)}, {"elimination", am_icr_to_json(mech, r)}};
    bool ok = r.pass;
    // With few rounds the explicit game is small enough for exact LP elimination.
    if (cfg.rounds) {
        json ex = json::array();
        const bool structured_ok = r.rounds_pinned == mech.J && !r.outcome_mismatch;
        std::vector<const TsUtility*> us{nullptr};
        for (const auto& u : m.utilities) us.push_back(&u);
        for (const TsUtility* u : us) {
            try {
                AmGame g = am_explicit_game(mech, u, cfg.icr_cap);
                IcrTable t = icr_eliminate(g.game);
                const auto& fp = t.fixed_point();
                bool pinned = true;
                for (int i = 0; i < m.n_agents(); ++i)
                    for (int ty = 0; ty < m.n_types(i); ++ty)
                        for (int id : fp[i][ty]) {
                            const AmMessage& msg = g.catalog[i][id];
                            for (int x : msg.rounds) pinned = pinned && x == msg.reference();
                        }
                bool on_target = true;
                for (const auto& prof : possible_profiles(m)) {
                    std::vector<std::size_t> pick(m.n_agents(), 0);
                    while (true) {
                        std::vector<AmMessage> msgs;
                        for (int i = 0; i < m.n_agents(); ++i) msgs.push_back(g.catalog[i][fp[i][prof[i]][pick[i]]]);
                        const auto dist = mech.outcome(msgs);
                        on_target = on_target && dist.size() == 1 && dist.begin()->first == m.f(prof);
                        int i = 0;
                        while (i < m.n_agents() && ++pick[i] == fp[i][prof[i]].size()) pick[i++] = 0;
                        if (i == m.n_agents()) break;
                    }
                }
                ex.push_back(json{{"utility", u ? u->name : "constant"},
                                  {"elimination_rounds", t.rounds.size() - 1},
                                  {"lps_solved", t.lps_solved},
                                  {"round_reports_pinned", pinned},
                                  {"outcomes_on_target", on_target},
                                  {"agrees_with_structured", on_target == structured_ok},
                                  {"structured_sound", on_target || !structured_ok}});
            } catch (const BudgetExceeded& e) {
                ex.push_back(json{{"utility", u ? u->name : "constant"}, {"budget_exceeded", e.what()}});
            }
        }
        j["explicit"] = ex;
    }
    return {verdict_code(ok), j};
}

std::pair<int, json> cmd_audit(const Input& in, const RunConfig& cfg) {
    if (cfg.which == "icr") return audit_icr(in, cfg);
    Scenario scn = flat(in);
    if (cfg.which == "closure") return audit_closure(scn);
    if (cfg.which == "search") return audit_search(scn, cfg);
    if (cfg.which == "claims") {
        json why;
        auto mech = transfer_mechanism(scn, why);
        if (!mech) return {kExitFail, why};
        AuditSuite s = claim_audits(*mech);
        json j = to_json(s);
        j["mechanism"] = to_json(*mech)["variant"];
        return {verdict_code(s.pass()), j};
    }
    throw Refusal{kExitInvalid, json{{"error", "unknown audit suite: " + cfg.which}}};
}

std::pair<int, json> cmd_hierarchy(const Input& in, const RunConfig& cfg) {
    TypeSpaceModel m = model_of(in);
    BeliefHierarchy h = cfg.levels ? build_hierarchy(m, *cfg.levels) : build_stable_hierarchy(m);
    return {kExitPass, to_json(m, h)};
}

}  // namespace

CommandResult run_command(const RunConfig& cfg) {
    CommandResult res;
    json header = json::object();
    header["tool"] = "uevid";
    header["version"] = kToolVersion;
    header["command"] = cfg.which.empty() ? cfg.command : cfg.command + " " + cfg.which;
    header["seed"] = cfg.seed;
    header["config"] = json{{"budget_pure", cfg.budget.pure_cap},
                            {"budget_family", cfg.budget.family_cap},
                            {"budget_plans", cfg.plan_cap},
                            {"budget_icr", cfg.icr_cap},
                            {"eps", cfg.eps}};
    if (cfg.rounds) header["config"]["rounds"] = *cfg.rounds;
    std::pair<int, json> out;
    try {
        Input in = read_input(cfg.path);
        header["input_digest"] = hex64(fnv1a(in.bytes));
        if (cfg.command == "validate")
            out = cmd_validate(in);
        else if (cfg.command == "check")
            out = cmd_check(in, cfg.which);
        else if (cfg.command == "build")
            out = cmd_build(in, cfg);
        else if (cfg.command == "audit")
            out = cmd_audit(in, cfg);
        else if (cfg.command == "hierarchy")
            out = cmd_hierarchy(in, cfg);
        else
            out = {kExitInvalid, json{{"error", "unknown command: " + cfg.command}}};
    } catch (const Refusal& r) {
        out = {r.code, r.result};
    } catch (const IoError& e) {
        out = {kExitIo, json{{"error", e.what()}}};
    } catch (const ParseError& e) {
        out = {kExitIo, json{{"error", e.what()}}};
    } catch (const json::exception& e) {
        out = {kExitIo, json{{"error", std::string("malformed input: ") + e.what()}}};
    } catch (const std::invalid_argument& e) {
        out = {kExitInvalid, json{{"error", e.what()}}};
    }
    res.exit_code = out.first;
    header["exit_code"] = out.first;
    header["result"] = out.second;
    res.report = header;
    return res;
}

std::string render(const CommandResult& r, const std::string& format) {
    if (format == "machine") return canonical_dump(r.report);
    return human_view(r.report);
}

}  // namespace uev
