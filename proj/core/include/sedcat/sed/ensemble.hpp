#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "sedcat/physics.hpp"
#include "sedcat/sed/integrator.hpp"
#include "sedcat/sed/zpf.hpp"

namespace sedcat::sed {

// Counter-mode subseed: splitmix64 finalizer of master + (index + 1) * golden
// gamma. The map index -> subseed is a bijection for a fixed master, so
// subseeds within a run are pairwise distinct.
std::uint64_t derive_subseed(std::uint64_t master, std::uint64_t index) noexcept;

enum class GroundPreparation {
    direct,   // x ~ N(0, Delta_x^2), v ~ N(0, (Delta_p/m)^2)
    relaxed,  // from rest under ZPF and damping for relax_time before t_start
};

// Snapshot steps: every `every` steps (0 = only first and last), every step
// inside each dense window, and the step nearest each requested time.
struct SnapshotSchedule {
    std::size_t every = 0;
    std::vector<std::pair<double, double>> dense_windows;  // [t_a, t_b] in s
    std::vector<double> times;                            // s
};

struct EnsembleConfig {
    OscillatorParams osc;
    DriveModel drive;
    ZpfSpec zpf;           // the seed field is ignored; each particle uses its subseed
    bool zpf_on = true;
    bool damping = true;

    std::size_t n_particles = 0;
    std::uint64_t master_seed = 0;
    GroundPreparation preparation = GroundPreparation::direct;
    double relax_time = 0.0;  // s, relaxed mode only, >= 5 tau_d

    double t_start = 0.0;  // s
    double t_end = 0.0;    // s, rounded up to a whole number of steps
    double dt = 0.0;       // s, 0 selects min(T0, 2 pi / omega_high) / 200
    SnapshotSchedule schedule;

    unsigned threads = 0;  // 0 = hardware concurrency
    std::size_t max_snapshot_bytes = std::size_t{1} << 30;
};

struct EnsembleSnapshot {
    double time = 0.0;
    std::vector<double> x;  // m
    std::vector<double> v;  // m/s
    std::uint64_t master_seed = 0;
    std::shared_ptr<const std::vector<std::uint64_t>> subseeds;

    std::size_t size() const noexcept { return x.size(); }
};

struct RelaxationReport {
    std::vector<double> times;  // s, checkpoints over the second half of the relaxation
    std::vector<double> var_x;  // m^2
    double relative_trend = 0.0;  // fitted change across the checkpoints / mean
    double tolerance = 0.0;
};

struct EnsembleRun {
    double dt = 0.0;
    std::size_t n_steps = 0;
    std::vector<EnsembleSnapshot> snapshots;
    std::shared_ptr<const std::vector<std::uint64_t>> subseeds;
    std::optional<RelaxationReport> relaxation;
};

// Runs every particle from its own subseed. Results are bitwise identical
// for any thread count. Throws ParameterError for invalid configurations or
// when snapshots would exceed max_snapshot_bytes, StabilityError naming the
// lowest failing particle and its subseed, and CalibrationError when a
// relaxed preparation has not settled.
EnsembleRun run_ensemble(const EnsembleConfig& config);

// Ground-state ensemble at t = 0 drawn from the same per-particle streams
// run_ensemble uses. Relaxed mode evolves for relax_time (default 5 tau_d).
EnsembleSnapshot prepare_ground_ensemble(std::size_t n, const OscillatorParams& osc,
                                         const ZpfSpec& zpf, GroundPreparation mode,
                                         std::uint64_t master_seed, double relax_time = 0.0,
                                         unsigned threads = 0);

// Tolerance on the relative variance trend of a relaxed ensemble of n particles.
double relaxation_tolerance(std::size_t n) noexcept;

}  // namespace sedcat::sed
