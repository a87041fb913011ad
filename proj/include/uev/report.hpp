#pragma once

#include "uev/am.hpp"
#include "uev/audits.hpp"
#include "uev/conditions.hpp"
#include "uev/game.hpp"
#include "uev/hierarchy.hpp"
#include "uev/mechanism.hpp"

#include <cstdint>
#include <string>

namespace uev {

inline constexpr const char* kToolVersion = "1.0.0";

std::uint64_t fnv1a(const std::string& bytes);
std::string hex64(std::uint64_t v);

json to_json(const Scenario& scn, const TransportPlan& p);
json to_json(const Scenario& scn, const PurePlan& p);
json to_json(const Scenario& scn, const HallCut& c);
json to_json(const Scenario& scn, const Verdict& v);
json to_json(const Scenario& scn, const Bet& b);
json to_json(const CertReport& c);
json to_json(const ScalingParams& s);
json to_json(const Mechanism& m);
json to_json(const FiniteGame& g, const EquilibriumReport& r, const Scenario* scn = nullptr);
json to_json(const FiniteGame& g, const StrategyProfile& p);
json to_json(const AuditSuite& s);
json to_json(const Mechanism& m, const MechanismGame& mg, const ClosureReport& c);
json to_json(const MechanismGame& mg, const SearchResult& r, const Scenario& scn);
json to_json(const TypeSpaceModel& m, const HomVerdict& v);
json to_json(const TypeSpaceModel& m, const EicVerdict& v);
json to_json(const TypeSpaceModel& m, const BeliefHierarchy& h);
json to_json(const ValidationReport& v);

// Keys sorted, two-space indent, trailing newline.
std::string canonical_dump(const json& j);
// Line-per-leaf text view of the same document.
std::string human_view(const json& j);

}  // namespace uev
