// Dumps seeded random scenarios as JSON lines for the Python oracle.
#include "uev/random_scenario.hpp"

#include <iostream>
#include <string>

int main(int argc, char** argv) {
    if (argc != 4) {
        std::cerr << "usage: dump_random flat|degenerate FIRST COUNT\n";
        return 2;
    }
    const std::string kind = argv[1];
    const std::uint64_t first = std::stoull(argv[2]), count = std::stoull(argv[3]);
    for (std::uint64_t s = first; s < first + count; ++s) {
        const uev::Scenario scn = kind == "flat" ? uev::random_flat_scenario(s) : uev::random_degenerate_scenario(s);
        std::cout << uev::scenario_to_json(scn).dump() << "\n";
    }
}
