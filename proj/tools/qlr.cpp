// qlr: command-line front end for the quaternion low-rank library.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "qlr/altproj.hpp"
#include "qlr/baselines.hpp"
#include "qlr/drsm.hpp"
#include "qlr/errors.hpp"
#include "qlr/experiment.hpp"
#include "qlr/image.hpp"
#include "qlr/io.hpp"
#include "qlr/projections.hpp"
#include "qlr/qsvd.hpp"
#include "qlr/random.hpp"

namespace {

using nlohmann::json;

constexpr int kExitValidation = 1;
constexpr int kExitNumerical = 2;

bool has_ext(const std::string& path, const char* ext) {
    return std::filesystem::path(path).extension() == ext;
}

qlr::QuatMatrix load_input(const std::string& path) {
    if (has_ext(path, ".ppm")) {
        return qlr::image_to_quat(qlr::read_ppm(path));
    }
    return qlr::load_quat_matrix(path);
}

void save_output(const qlr::QuatMatrix& a, const std::string& path, int bit_depth) {
    if (has_ext(path, ".ppm")) {
        qlr::write_ppm(qlr::quat_to_image(a, bit_depth), path);
    } else {
        qlr::save_quat_matrix(a, path);
    }
}

void print(const json& doc) { std::cout << doc.dump(2) << '\n'; }

struct Common {
    std::string in;
    std::string out;
};

struct ApproxArgs {
    std::string method = "altproj";
    Common io;
    qlr::Index rank = 1;
    int max_iters = 5000;
    double tol = 1e-6;
    int drsm_steps = 500;
    std::string trace;
    std::string convention = "a";
    int bit_depth = 8;
};

void run_qsvd(const Common& io, std::optional<qlr::Index> rank, int max_sweeps) {
    const qlr::QuatMatrix a = load_input(io.in);
    const qlr::QsvdFactors f = qlr::qsvd(a, qlr::QsvdOptions{max_sweeps});
    json doc;
    doc["m"] = a.rows();
    doc["n"] = a.cols();
    doc["sigma"] = std::vector<double>(f.sigma.data(), f.sigma.data() + f.sigma.size());
    doc["rank"] = qlr::numerical_rank(f.sigma);
    doc["sweeps"] = f.sweeps;
    if (!io.out.empty()) {
        json factors = doc;
        factors["U"] = qlr::to_json(f.U);
        factors["V"] = qlr::to_json(f.V);
        qlr::write_file_atomic(io.out, factors.dump() + "\n");
    }
    if (rank) {
        const qlr::QuatMatrix t = qlr::truncate(f, *rank);
        doc["truncation_error"] = qlr::frobenius_norm(a - t);
    }
    print(doc);
}

void run_approx(const ApproxArgs& args) {
    const qlr::QuatMatrix a = load_input(args.io.in);
    json doc;
    doc["method"] = args.method;
    doc["rank"] = args.rank;
    qlr::QuatMatrix solution;

    if (args.method == "qsvdtr") {
        const auto conv = qlr::parse_convention(args.convention);
        qlr::QsvdTrResult r = qlr::qsvd_tr_baseline(a, args.rank, conv);
        doc["convention"] = qlr::convention_name(conv);
        doc["truncation_rank"] = r.truncation_rank;
        doc["result_rank"] = r.result_rank;
        doc["objective"] = r.objective;
        doc["elapsed_seconds"] = r.elapsed;
        solution = std::move(r.solution);
    } else {
        qlr::AltProjConfig ap;
        ap.rank = args.rank;
        ap.max_iters = args.max_iters;
        ap.residual_tol = args.tol;
        qlr::AltProjReport rep;
        if (args.method == "altproj") {
            rep = qlr::alt_proj(a, ap);
        } else if (args.method == "hybrid") {
            qlr::DrsmConfig d;
            d.rank = args.rank;
            d.steps = args.drsm_steps;
            rep = qlr::hybrid_solve(a, d, ap);
        } else {
            throw qlr::ValidationError("approx: unknown method '" + args.method + "'");
        }
        if (!args.trace.empty()) {
            qlr::write_file_atomic(args.trace, qlr::trace_csv(rep));
        }
        json r = qlr::report_json(rep);
        r.erase("residual_trace");
        r.erase("drsm_residual_trace");
        doc.update(r);
        doc["result_rank"] = qlr::solution_rank(rep);
        solution = std::move(rep.solution);
    }
    if (!args.io.out.empty()) {
        save_output(solution, args.io.out, args.bit_depth);
    }
    print(doc);
}

void run_gen(const std::string& kind, qlr::Index m, qlr::Index n, qlr::Index rank, std::uint64_t seed,
             const std::string& out) {
    qlr::QuatMatrix a;
    if (kind == "random_pure") {
        a = qlr::gen_random_pure(m, n, seed);
    } else if (kind == "random_lowrank") {
        a = qlr::gen_random_pure_lowrank(m, n, rank, seed);
    } else if (kind == "random_quaternion") {
        a = qlr::gen_random_quaternion(m, n, seed);
    } else if (kind == "synthetic_5x5") {
        a = qlr::synthetic_5x5();
    } else {
        throw qlr::ValidationError("gen: unknown kind '" + kind + "'");
    }
    qlr::save_quat_matrix(a, out);
    print({{"kind", kind}, {"m", a.rows()}, {"n", a.cols()}, {"rank", qlr::numerical_rank(a)}, {"out", out}});
}

void run_experiment(const std::string& spec_path, const std::string& out_dir, std::optional<std::uint64_t> seed) {
    json doc;
    try {
        doc = json::parse(qlr::read_file(spec_path));
    } catch (const json::parse_error& e) {
        throw qlr::ValidationError(spec_path + ": " + e.what());
    }
    qlr::ExperimentSpec spec = qlr::experiment_spec_from_json(doc);
    if (seed) {
        spec.seed = *seed;
    }
    if (spec.kind == qlr::ExperimentKind::Image && !spec.image_path.empty()) {
        const std::filesystem::path p(spec.image_path);
        if (p.is_relative()) {
            spec.image_path = (std::filesystem::path(spec_path).parent_path() / p).string();
        }
    }
    const qlr::ExperimentResult r = qlr::run_experiment(spec, out_dir);
    json brief = json::array();
    for (const auto& c : r.cells) {
        brief.push_back({{"solver", qlr::solver_name(c.solver)},
                         {"rank", c.rank},
                         {"objective", c.objective},
                         {"result_rank", c.result_rank},
                         {"iterations", c.iterations},
                         {"converged", c.converged}});
    }
    print({{"out", out_dir}, {"cells", brief}});
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Low-rank pure quaternion matrix approximation"};
    app.require_subcommand(1);

    Common qsvd_io;
    std::optional<qlr::Index> qsvd_rank;
    int qsvd_sweeps = qlr::QsvdOptions{}.max_sweeps;
    auto* qsvd_cmd = app.add_subcommand("qsvd", "Quaternion SVD of a matrix (.json or .ppm)");
    qsvd_cmd->add_option("--in", qsvd_io.in, "Input matrix")->required();
    qsvd_cmd->add_option("--out", qsvd_io.out, "Write U, sigma, V as JSON");
    qsvd_cmd->add_option("--rank", qsvd_rank, "Also report the rank-r truncation error");
    qsvd_cmd->add_option("--max-sweeps", qsvd_sweeps, "Jacobi sweep budget")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();

    ApproxArgs ap;
    auto* approx_cmd = app.add_subcommand("approx", "Rank-r pure approximation");
    approx_cmd->add_option("method", ap.method, "altproj | hybrid | qsvdtr")
        ->check(CLI::IsMember({"altproj", "hybrid", "qsvdtr"}));
    approx_cmd->add_option("--in", ap.io.in, "Input matrix (.json or .ppm)")->required();
    approx_cmd->add_option("--out", ap.io.out, "Solution (.json or .ppm)");
    approx_cmd->add_option("--rank", ap.rank, "Target rank")->required();
    approx_cmd->add_option("--max-iters", ap.max_iters, "AltProj iteration budget")->capture_default_str();
    approx_cmd->add_option("--tol", ap.tol, "Residual tolerance on ||Re Y||")->capture_default_str();
    approx_cmd->add_option("--drsm-steps", ap.drsm_steps, "DRSM steps before AltProj (hybrid)")
        ->capture_default_str();
    approx_cmd->add_option("--trace", ap.trace, "Write the residual trace CSV here");
    approx_cmd->add_option("--convention", ap.convention, "QsvdTr truncation: a (at r) or b (at r/4)")
        ->check(CLI::IsMember({"a", "b"}))
        ->capture_default_str();
    approx_cmd->add_option("--bit-depth", ap.bit_depth, "PPM output depth")->check(CLI::IsMember({8, 16}));

    std::string gen_kind = "random_pure";
    qlr::Index gen_m = 100, gen_n = 100, gen_rank = 1;
    std::uint64_t gen_seed = 0;
    std::string gen_out;
    auto* gen_cmd = app.add_subcommand("gen", "Generate a test matrix");
    gen_cmd->add_option("kind", gen_kind, "random_pure | random_lowrank | random_quaternion | synthetic_5x5")
        ->check(CLI::IsMember({"random_pure", "random_lowrank", "random_quaternion", "synthetic_5x5"}));
    gen_cmd->add_option("-m,--rows", gen_m, "Rows")->capture_default_str();
    gen_cmd->add_option("-n,--cols", gen_n, "Columns")->capture_default_str();
    gen_cmd->add_option("--rank", gen_rank, "Quaternion rank before dropping the real part (random_lowrank)");
    gen_cmd->add_option("--seed", gen_seed, "RNG seed")->capture_default_str();
    gen_cmd->add_option("--out", gen_out, "Output JSON")->required();

    std::string exp_spec, exp_out;
    std::optional<std::uint64_t> exp_seed;
    auto* exp_cmd = app.add_subcommand("experiment", "Run an experiment described by a JSON spec");
    exp_cmd->add_option("--spec", exp_spec, "Experiment spec JSON")->required();
    exp_cmd->add_option("--out", exp_out, "Output directory")->required();
    exp_cmd->add_option("--seed", exp_seed, "Override the spec's seed");

    Common img_io;
    auto* img2q_cmd = app.add_subcommand("img2q", "PPM image to quaternion matrix JSON");
    img2q_cmd->add_option("--in", img_io.in, "PPM (P6 or P3)")->required();
    img2q_cmd->add_option("--out", img_io.out, "Output JSON")->required();

    Common q2img_io;
    int q2img_depth = 8;
    auto* q2img_cmd = app.add_subcommand("q2img", "Pure quaternion matrix JSON to PPM image");
    q2img_cmd->add_option("--in", q2img_io.in, "Input JSON")->required();
    q2img_cmd->add_option("--out", q2img_io.out, "Output PPM")->required();
    q2img_cmd->add_option("--bit-depth", q2img_depth, "8 or 16")->check(CLI::IsMember({8, 16}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitValidation;
    }

    try {
        if (*qsvd_cmd) {
            run_qsvd(qsvd_io, qsvd_rank, qsvd_sweeps);
        } else if (*approx_cmd) {
            run_approx(ap);
        } else if (*gen_cmd) {
            run_gen(gen_kind, gen_m, gen_n, gen_rank, gen_seed, gen_out);
        } else if (*exp_cmd) {
            run_experiment(exp_spec, exp_out, exp_seed);
        } else if (*img2q_cmd) {
            qlr::save_quat_matrix(qlr::image_to_quat(qlr::read_ppm(img_io.in)), img_io.out);
        } else if (*q2img_cmd) {
            qlr::write_ppm(qlr::quat_to_image(qlr::load_quat_matrix(q2img_io.in), q2img_depth), q2img_io.out);
        }
    } catch (const qlr::ConvergenceError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const qlr::ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitValidation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitValidation;
    }
    return 0;
}
