#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "qlr/altproj.hpp"
#include "qlr/baselines.hpp"
#include "qlr/drsm.hpp"
#include "qlr/quat_matrix.hpp"

namespace qlr {

enum class ExperimentKind { Synthetic5x5, RandomExactLowrank, RandomPure, Image };
enum class Solver { AltProj, Hybrid, QsvdTr };

ExperimentKind parse_experiment_kind(const std::string& s);
const char* kind_name(ExperimentKind k);
Solver parse_solver(const std::string& s);
const char* solver_name(Solver s);

struct ExperimentSpec {
    ExperimentKind kind = ExperimentKind::RandomPure;
    Index m = 100;
    Index n = 100;
    std::vector<Index> ranks;  ///< target pure ranks
    std::uint64_t seed = 0;
    std::string image_path;  ///< kind == Image only
    std::vector<Solver> solvers{Solver::AltProj, Solver::QsvdTr};
    TruncationConvention convention = TruncationConvention::AtTarget;
    AltProjConfig altproj;  ///< rank is overridden per cell
    DrsmConfig drsm;        ///< rank is overridden per cell
    bool write_solutions = true;

    void validate() const;
};

ExperimentSpec experiment_spec_from_json(const nlohmann::json& doc);
nlohmann::json to_json(const ExperimentSpec& spec);

/// The 5x5 pure matrix of the synthetic experiment, entries as printed (two decimals).
QuatMatrix synthetic_5x5();

/// Seed for the random_exact_lowrank instance of one target rank
/// (splitmix64 of seed + rank).
std::uint64_t cell_seed(std::uint64_t seed, Index rank);

/// Input matrix of the experiment. For random_exact_lowrank the instance
/// depends on the target rank: gen_random_pure_lowrank(m, n, rank / 4, cell_seed).
QuatMatrix experiment_input(const ExperimentSpec& spec, Index target_rank);

struct CellResult {
    Solver solver = Solver::AltProj;
    Index rank = 0;
    double objective = 0.0;
    Index result_rank = 0;
    int iterations = 0;
    bool converged = true;
    double final_residual = 0.0;
    double seconds = 0.0;
    Index truncation_rank = 0;  ///< QsvdTr only
};

struct ExperimentResult {
    std::vector<CellResult> cells;
    nlohmann::json summary;
};

/// Runs every (rank, solver) cell and writes into out_dir:
///   summary.json            spec, input description, one entry per cell
///   singular_values.csv     series,index,sigma for the input and every output
///   traces/<solver>_r<rank>.csv       iterative solvers
///   solutions/<solver>_r<rank>.json   (and .ppm for image experiments)
/// Timing lives under "timing" keys; everything else is reproducible bit for bit.
/// The spec is validated before anything is written.
ExperimentResult run_experiment(const ExperimentSpec& spec, const std::string& out_dir);

/// Copy of a summary with every "timing" member removed.
nlohmann::json strip_timing(nlohmann::json doc);

}  // namespace qlr
