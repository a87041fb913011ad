#include "uev/commands.hpp"

#include <CLI11.hpp>

#include <iostream>

namespace {

void add_common(CLI::App* sub, uev::RunConfig& cfg) {
    sub->add_option("input", cfg.path, "scenario or type-space model (JSON)")->required();
    sub->add_option("--seed", cfg.seed, "seed for heuristic search");
    sub->add_option("--budget-pure", cfg.budget.pure_cap, "pure profiles examined exhaustively")
        ->check(CLI::PositiveNumber);
    sub->add_option("--budget-family", cfg.budget.family_cap, "deception-family profiles examined")
        ->check(CLI::PositiveNumber);
    sub->add_option("--budget-plans", cfg.plan_cap, "pure plans enumerated by bet certification")
        ->check(CLI::PositiveNumber);
    sub->add_option("--budget-icr", cfg.icr_cap, "message cap for explicit elimination")->check(CLI::PositiveNumber);
    sub->add_option("--eps", cfg.eps, "transfer bound for the AM build, as a rational");
    sub->add_option("--rounds", cfg.rounds, "override the AM round count")->check(CLI::PositiveNumber);
    sub->add_option("--levels", cfg.levels, "hierarchy depth to dump")->check(CLI::NonNegativeNumber);
    sub->add_option("--format", cfg.format, "human or machine")->check(CLI::IsMember({"human", "machine"}));
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Unverifiable-evidence implementation checker"};
    app.require_subcommand(1);
    uev::RunConfig cfg;

    auto* validate = app.add_subcommand("validate", "check a scenario or model for well-formedness");
    add_common(validate, cfg);

    auto* check = app.add_subcommand("check", "run one implementability condition");
    check->add_option("which", cfg.which, "sm | nppd | npd | hom | eic")
        ->required()
        ->check(CLI::IsMember({"sm", "nppd", "npd", "hom", "eic"}));
    add_common(check, cfg);

    auto* build = app.add_subcommand("build", "construct a mechanism");
    build->add_option("variant", cfg.which, "bne | pure | am")->required()->check(CLI::IsMember({"bne", "pure", "am"}));
    add_common(build, cfg);

    auto* audit = app.add_subcommand("audit", "run an audit suite");
    audit->add_option("suite", cfg.which, "claims | closure | search | icr")
        ->required()
        ->check(CLI::IsMember({"claims", "closure", "search", "icr"}));
    add_common(audit, cfg);

    auto* hierarchy = app.add_subcommand("hierarchy", "dump belief hierarchy levels");
    add_common(hierarchy, cfg);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return uev::kExitInvalid;
    }
    cfg.command = app.get_subcommands().front()->get_name();

    uev::CommandResult r;
    try {
        r = uev::run_command(cfg);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return uev::kExitInvalid;
    }
    std::cout << uev::render(r, cfg.format);
    return r.exit_code;
}
