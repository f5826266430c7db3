#include "qlr/experiment.hpp"

#include <algorithm>
#include <filesystem>
#include <map>
#include <sstream>

#include "qlr/image.hpp"
#include "qlr/io.hpp"
#include "qlr/qsvd.hpp"
#include "qlr/random.hpp"

namespace qlr {

namespace {

using nlohmann::json;

RealMatrix rows5(std::initializer_list<double> values) {
    RealMatrix m(5, 5);
    auto it = values.begin();
    for (Index r = 0; r < 5; ++r) {
        for (Index c = 0; c < 5; ++c) {
            m(r, c) = *it++;
        }
    }
    return m;
}

std::string cell_name(Solver s, Index rank) {
    return std::string(solver_name(s)) + "_r" + std::to_string(rank);
}

std::string csv_row(const std::string& series, Index idx, double v) {
    std::ostringstream ss;
    ss.precision(17);
    ss << series << ',' << idx << ',' << v << '\n';
    return ss.str();
}

}  // namespace

ExperimentKind parse_experiment_kind(const std::string& s) {
    if (s == "synthetic_5x5") return ExperimentKind::Synthetic5x5;
    if (s == "random_exact_lowrank") return ExperimentKind::RandomExactLowrank;
    if (s == "random_pure") return ExperimentKind::RandomPure;
    if (s == "image") return ExperimentKind::Image;
    throw ValidationError("unknown experiment kind '" + s + "'");
}

const char* kind_name(ExperimentKind k) {
    switch (k) {
        case ExperimentKind::Synthetic5x5: return "synthetic_5x5";
        case ExperimentKind::RandomExactLowrank: return "random_exact_lowrank";
        case ExperimentKind::RandomPure: return "random_pure";
        case ExperimentKind::Image: return "image";
    }
    return "?";
}

Solver parse_solver(const std::string& s) {
    if (s == "altproj") return Solver::AltProj;
    if (s == "hybrid") return Solver::Hybrid;
    if (s == "qsvdtr") return Solver::QsvdTr;
    throw ValidationError("unknown solver '" + s + "' (expected altproj, hybrid or qsvdtr)");
}

const char* solver_name(Solver s) {
    switch (s) {
        case Solver::AltProj: return "altproj";
        case Solver::Hybrid: return "hybrid";
        case Solver::QsvdTr: return "qsvdtr";
    }
    return "?";
}

void ExperimentSpec::validate() const {
    if (ranks.empty()) {
        throw ValidationError("experiment: ranks list is empty");
    }
    if (solvers.empty()) {
        throw ValidationError("experiment: solvers list is empty");
    }
    Index rows = m;
    Index cols = n;
    if (kind == ExperimentKind::Synthetic5x5) {
        rows = cols = 5;
    } else if (kind == ExperimentKind::Image) {
        if (image_path.empty()) {
            throw ValidationError("experiment: image kind needs image_path");
        }
        if (!std::filesystem::exists(image_path)) {
            throw ValidationError("experiment: " + image_path + ": no such file");
        }
        rows = cols = -1;  // checked once the image is loaded
    } else if (m < 1 || n < 1) {
        throw ValidationError("experiment: m and n must be positive");
    }
    for (Index r : ranks) {
        if (r < 1 || (rows > 0 && r > std::min(rows, cols))) {
            throw ValidationError("experiment: rank " + std::to_string(r) + " outside [1, min(m, n)]");
        }
        if (kind == ExperimentKind::RandomExactLowrank && r % 4 != 0) {
            throw ValidationError("experiment: random_exact_lowrank ranks must be multiples of 4");
        }
    }
    if (altproj.max_iters < 1 || !(altproj.residual_tol >= 0.0)) {
        throw ValidationError("experiment: invalid altproj settings");
    }
    DrsmConfig d = drsm;
    d.rank = 1;
    d.validate();
}

ExperimentSpec experiment_spec_from_json(const json& doc) {
    try {
        ExperimentSpec s;
        s.kind = parse_experiment_kind(doc.at("kind").get<std::string>());
        s.m = doc.value("m", s.m);
        s.n = doc.value("n", s.n);
        s.ranks = doc.at("ranks").get<std::vector<Index>>();
        s.seed = doc.value("seed", s.seed);
        s.image_path = doc.value("image_path", std::string{});
        if (doc.contains("solvers")) {
            s.solvers.clear();
            for (const auto& name : doc.at("solvers")) {
                s.solvers.push_back(parse_solver(name.get<std::string>()));
            }
        }
        s.convention = parse_convention(doc.value("convention", std::string{"a"}));
        s.altproj.max_iters = doc.value("max_iters", s.altproj.max_iters);
        s.altproj.residual_tol = doc.value("tol", s.altproj.residual_tol);
        s.drsm.steps = doc.value("drsm_steps", s.drsm.steps);
        s.write_solutions = doc.value("write_solutions", s.write_solutions);
        return s;
    } catch (const json::exception& e) {
        throw ValidationError(std::string("experiment spec: ") + e.what());
    }
}

json to_json(const ExperimentSpec& s) {
    json doc;
    doc["kind"] = kind_name(s.kind);
    doc["m"] = s.m;
    doc["n"] = s.n;
    doc["ranks"] = s.ranks;
    doc["seed"] = s.seed;
    if (s.kind == ExperimentKind::Image) {
        doc["image_path"] = s.image_path;
    }
    json solvers = json::array();
    for (Solver v : s.solvers) {
        solvers.push_back(solver_name(v));
    }
    doc["solvers"] = solvers;
    doc["convention"] = convention_name(s.convention);
    doc["max_iters"] = s.altproj.max_iters;
    doc["tol"] = s.altproj.residual_tol;
    doc["drsm_steps"] = s.drsm.steps;
    doc["write_solutions"] = s.write_solutions;
    return doc;
}

QuatMatrix synthetic_5x5() {
    return QuatMatrix::pure(rows5({0.37, -0.79, 0.04, -0.73, -0.06,   //
                                   -1.42, -0.10, 1.01, 1.59, -1.59,   //
                                   -0.34, 0.38, 1.30, -0.66, 1.08,    //
                                   -1.98, 0.83, 0.22, -0.77, 0.70,    //
                                   -0.38, -0.14, 0.86, 0.54, 1.65}),  //
                            rows5({0.29, -0.38, -0.13, -1.77, 0.20,   //
                                   0.70, -0.69, 0.83, -0.16, -0.52,   //
                                   -1.15, 1.00, -1.97, 0.63, 1.57,    //
                                   1.86, -1.14, 0.12, -1.27, 0.77,    //
                                   2.37, 0.15, 0.26, -0.30, -0.59}),  //
                            rows5({0.33, 0.74, -1.40, -0.77, 0.86,    //
                                   1.13, -1.32, 0.36, -0.02, 0.50,    //
                                   0.25, -0.68, 0.36, -0.71, 0.77,    //
                                   0.56, -0.35, 0.92, 0.87, -0.58,    //
                                   0.64, -1.59, 0.37, -1.51, 0.19}));
}

std::uint64_t cell_seed(std::uint64_t seed, Index rank) {
    std::uint64_t z = seed + static_cast<std::uint64_t>(rank) * 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

QuatMatrix experiment_input(const ExperimentSpec& spec, Index target_rank) {
    switch (spec.kind) {
        case ExperimentKind::Synthetic5x5:
            return synthetic_5x5();
        case ExperimentKind::RandomExactLowrank:
            return gen_random_pure_lowrank(spec.m, spec.n, target_rank / 4, cell_seed(spec.seed, target_rank));
        case ExperimentKind::RandomPure:
            return gen_random_pure(spec.m, spec.n, spec.seed);
        case ExperimentKind::Image:
            return image_to_quat(read_ppm(spec.image_path));
    }
    throw ValidationError("experiment: unknown kind");
}

json strip_timing(json doc) {
    if (doc.is_object()) {
        doc.erase("timing");
        for (auto& [key, value] : doc.items()) {
            value = strip_timing(value);
        }
    } else if (doc.is_array()) {
        for (auto& value : doc) {
            value = strip_timing(value);
        }
    }
    return doc;
}

ExperimentResult run_experiment(const ExperimentSpec& spec, const std::string& out_dir) {
    spec.validate();

    const bool per_rank_input = spec.kind == ExperimentKind::RandomExactLowrank;
    QuatMatrix shared;
    if (!per_rank_input) {
        shared = experiment_input(spec, spec.ranks.front());
        for (Index r : spec.ranks) {
            if (r > std::min(shared.rows(), shared.cols())) {
                throw ValidationError("experiment: rank " + std::to_string(r) + " exceeds min(m, n) of the input");
            }
        }
    }
    const std::filesystem::path root{out_dir};

    ExperimentResult result;
    json cells = json::array();
    std::string sv_csv = "series,index,sigma\n";
    auto dump_sigma = [&](const std::string& series, const Eigen::VectorXd& s) {
        for (Index i = 0; i < s.size(); ++i) {
            sv_csv += csv_row(series, i + 1, s(i));
        }
    };

    if (!per_rank_input) {
        dump_sigma("input", singular_values(shared));
    }

    for (Index rank : spec.ranks) {
        const QuatMatrix a = per_rank_input ? experiment_input(spec, rank) : shared;
        json input_info;
        if (per_rank_input) {
            const Eigen::VectorXd s = singular_values(a);
            dump_sigma("input_r" + std::to_string(rank), s);
            input_info["rank"] = numerical_rank(s);
            input_info["frobenius_norm"] = frobenius_norm(a);
            input_info["seed"] = cell_seed(spec.seed, rank);
        }

        for (Solver solver : spec.solvers) {
            CellResult cell;
            cell.solver = solver;
            cell.rank = rank;
            QuatMatrix solution;
            json entry;
            entry["solver"] = solver_name(solver);
            entry["rank"] = rank;

            if (solver == Solver::QsvdTr) {
                QsvdTrResult tr = qsvd_tr_baseline(a, rank, spec.convention);
                cell.objective = tr.objective;
                cell.result_rank = tr.result_rank;
                cell.iterations = 0;
                cell.final_residual = 0.0;
                cell.seconds = tr.elapsed;
                cell.truncation_rank = tr.truncation_rank;
                solution = std::move(tr.solution);
                entry["convention"] = convention_name(spec.convention);
                entry["truncation_rank"] = cell.truncation_rank;
            } else {
                AltProjConfig ap = spec.altproj;
                ap.rank = rank;
                AltProjReport rep;
                if (solver == Solver::AltProj) {
                    rep = alt_proj(a, a, ap);
                } else {
                    DrsmConfig d = spec.drsm;
                    d.rank = rank;
                    rep = hybrid_solve(a, d, ap);
                }
                cell.objective = rep.objective;
                cell.result_rank = solution_rank(rep);
                cell.iterations = rep.iterations;
                cell.converged = rep.converged;
                cell.final_residual = rep.final_residual;
                cell.seconds = rep.elapsed;
                solution = std::move(rep.solution);
                entry["drsm_steps"] = rep.drsm_steps;
                entry["tail_ratio"] = rep.tail_ratio ? json(*rep.tail_ratio) : json(nullptr);
                write_file_atomic((root / "traces" / (cell_name(solver, rank) + ".csv")).string(), trace_csv(rep));
            }

            entry["objective"] = cell.objective;
            entry["result_rank"] = cell.result_rank;
            entry["iterations"] = cell.iterations;
            entry["converged"] = cell.converged;
            entry["final_residual"] = cell.final_residual;
            entry["within_target_rank"] = cell.result_rank <= rank;
            entry["pure"] = solution.is_pure();
            if (per_rank_input) {
                entry["input"] = input_info;
            }
            entry["timing"] = {{"seconds", cell.seconds}};
            cells.push_back(entry);

            dump_sigma(cell_name(solver, rank), singular_values(solution));
            if (spec.write_solutions) {
                const auto base = root / "solutions" / cell_name(solver, rank);
                save_quat_matrix(solution, base.string() + ".json");
                if (spec.kind == ExperimentKind::Image) {
                    write_ppm(quat_to_image(solution), base.string() + ".ppm");
                }
            }
            result.cells.push_back(cell);
        }
    }

    json summary;
    summary["spec"] = to_json(spec);
    if (!per_rank_input) {
        summary["input"] = {{"m", shared.rows()},
                            {"n", shared.cols()},
                            {"frobenius_norm", frobenius_norm(shared)},
                            {"rank", numerical_rank(shared)}};
    }
    summary["cells"] = cells;
    write_file_atomic((root / "singular_values.csv").string(), sv_csv);
    write_file_atomic((root / "summary.json").string(), summary.dump(2) + "\n");
    result.summary = std::move(summary);
    return result;
}

}  // namespace qlr
