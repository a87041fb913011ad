#pragma once

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
#include "uev/scenario.hpp"
#include "uev/typespace.hpp"

#include <fstream>
#include <string>

namespace testing {

inline std::string fixture_path(const std::string& name) { return std::string(UEV_FIXTURES) + "/" + name + ".json"; }
inline std::string golden_path(const std::string& name) { return std::string(UEV_GOLDEN) + "/" + name; }

inline uev::Scenario flat(const std::string& name) { return uev::load_scenario_file(fixture_path(name)); }
// Flat fixtures are embedded as type spaces.
inline uev::TypeSpaceModel typespace(const std::string& name) {
    std::ifstream in(fixture_path(name));
    if (uev::looks_like_typespace(uev::json::parse(in))) return uev::load_typespace_file(fixture_path(name));
    return uev::embed_flat_scenario(flat(name));
}

inline uev::Q q(const char* s) { return uev::parse_rational(s); }

inline uev::Collection coll(const uev::Scenario& scn, std::initializer_list<const char*> ids) {
    std::vector<std::string> v(ids.begin(), ids.end());
    return scn.parse_collection(v);
}

// Copy with a replaced rule, outcomes by name in state order.
inline uev::Scenario with_scf(uev::Scenario scn, std::initializer_list<const char*> outcomes) {
    int s = 0;
    for (const char* o : outcomes) scn.scf[s++] = scn.outcome_index(o);
    return scn;
}

}  // namespace testing
