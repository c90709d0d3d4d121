#pragma once

#include <filesystem>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "sedcat/app/config.hpp"
#include "sedcat/app/io.hpp"
#include "sedcat/app/manifest.hpp"
#include "sedcat/qm/grid.hpp"
#include "sedcat/sed/ensemble.hpp"

namespace sedcat::app {

using Logger = std::function<void(const std::string&)>;

struct ScenarioResult {
    std::filesystem::path manifest;
    std::vector<Check> checks;

    bool all_pass() const noexcept;
};

// Runs config.run.scenario in root / scenario. analyze and compare read the
// qm-run and sed-run outputs under the same root; paper-repro runs every
// scenario under root / "paper-repro". Each run writes its manifest before
// starting and finalizes it afterwards, also on failure.
ScenarioResult run_scenario(const ExperimentConfig& config, const std::filesystem::path& root,
                            const Logger& log = {});

// Master seed of the calibrate-zpf ensemble, derived from the run seed.
std::uint64_t calibration_seed(std::uint64_t master) noexcept;

// Complex wavefunction as an [n_points, 2] array (real, imaginary) whose
// sidecar carries the grid and the time, and back.
F64Array wavefunction_array(const qm::Wavefunction& psi);
qm::Wavefunction wavefunction_from(const F64Array& array);

// Ensemble snapshot as an [n, 2] array (x, v), and back.
F64Array ensemble_array(const sed::EnsembleSnapshot& snapshot);
sed::EnsembleSnapshot ensemble_from(const F64Array& array);

// Files each figure id reads, named by scenario and manifest role. This is
// the contract between the paper-repro manifest and the figure scripts.
struct FigureInput {
    std::string scenario;
    std::string role;
};

const std::map<std::string, std::vector<FigureInput>>& figure_inputs();

// Follows the paper-repro manifest to the sub-scenario manifest and returns
// the checksum-verified path of the input.
std::filesystem::path resolve_figure_input(const ManifestReader& repro, const FigureInput& input);

// Fixed-width table of checks, one row per criterion.
std::string summary_table(const std::vector<Check>& checks);

}  // namespace sedcat::app
