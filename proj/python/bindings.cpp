#include "uev/commands.hpp"
#include "uev/random_scenario.hpp"
#include "uev/report.hpp"
#include "uev/scenario.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>

namespace py = pybind11;

namespace {

// Same document the CLI prints with --format machine.
py::tuple run(const std::string& command, const std::string& which, const std::string& path, std::uint64_t seed,
              const std::string& eps, std::optional<int> rounds, std::optional<int> levels, const std::string& format) {
    uev::RunConfig c;
    c.command = command;
    c.which = which;
    c.path = path;
    c.seed = seed;
    c.eps = eps;
    c.rounds = rounds;
    c.levels = levels;
    c.format = format;
    uev::CommandResult r;
    {
        py::gil_scoped_release nogil;
        r = uev::run_command(c);
    }
    return py::make_tuple(r.exit_code, uev::render(r, format));
}

}  // namespace

PYBIND11_MODULE(_uevidence, m) {
    m.doc() = "Exact evidence-based implementation checks";
    m.attr("__version__") = uev::kToolVersion;
    m.def("run", &run, py::arg("command"), py::arg("which") = "", py::arg("path"), py::arg("seed") = 0,
          py::arg("eps") = "1/100", py::arg("rounds") = py::none(), py::arg("levels") = py::none(),
          py::arg("format") = "machine");
    m.def(
        "random_flat_scenario",
        [](std::uint64_t seed) { return uev::scenario_to_json(uev::random_flat_scenario(seed)).dump(); },
        py::arg("seed"));
    m.def(
        "digest", [](const std::string& bytes) { return uev::hex64(uev::fnv1a(bytes)); }, py::arg("data"));
}
