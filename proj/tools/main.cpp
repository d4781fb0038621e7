// opnorm: operator-norm toolkit CLI. Subcommands cover norm estimation,
// the label-cover reduction, embedding constructions, Kronecker checks,
// the verification suites and a small benchmark. Every run prints one
// JSON record per result with its full effective configuration.

#include <CLI11.hpp>
#include <chrono>
#include <cstdint>
#include <iostream>
#include <json.hpp>
#include <string>

#include "opnorm/amplify.hpp"
#include "opnorm/embeddings.hpp"
#include "opnorm/errors.hpp"
#include "opnorm/io.hpp"
#include "opnorm/moments.hpp"
#include "opnorm/norm_engine.hpp"
#include "opnorm/reduction.hpp"
#include "opnorm/rng.hpp"
#include "opnorm/verify.hpp"

using json = nlohmann::json;
using namespace opnorm;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerifyFail = 1;
constexpr int kExitInputError = 2;
constexpr int kExitResourceCap = 3;

json base_record(const std::string& command) {
    json rec;
    rec["schema_version"] = 1;
    rec["command"] = command;
    return rec;
}

void emit(const json& rec) { std::cout << rec.dump() << "\n"; }

json estimate_to_json(const engine::NormEstimate& est) {
    json j;
    j["value"] = est.value;
    j["method"] = engine::method_name(est.method);
    j["kind"] = norm_kind_name(est.kind);
    j["witness"] = std::vector<double>(est.witness.data(),
                                       est.witness.data() + est.witness.size());
    return j;
}

struct NormArgs {
    std::string input;
    std::string p = "2", q = "2";
    std::string kind = "counting";
    std::string engine_name = "auto";
    int restarts = 24;
    double tol = 1e-10;
    std::uint64_t seed = 1;
    int resolution = 400;
};

int run_norm(const NormArgs& a) {
    const Matrix A = io::read_matrix(a.input);
    const ExponentPair pq{parse_exponent(a.p), parse_exponent(a.q)};
    const NormKind kind =
        (a.kind == "expectation") ? NormKind::expectation : NormKind::counting;

    engine::EstimateOptions opts;
    opts.ascent.restarts = a.restarts;
    opts.ascent.tol = a.tol;
    opts.ascent.seed = a.seed;
    opts.grid_resolution = a.resolution;

    engine::NormEstimate est;
    if (a.engine_name == "auto") {
        est = engine::estimate_norm(A, pq, opts);
    } else if (a.engine_name == "closed-form") {
        auto cf = engine::norm_closed_form(A, pq);
        if (!cf) throw std::domain_error("closed form needs p = 1 or q = inf");
        est = *cf;
    } else if (a.engine_name == "sign-enum") {
        est = pq.q.is(1.0) && !pq.p.is_inf() ? engine::norm_exact_signenum_dual(A, pq)
                                             : engine::norm_exact_signenum(A, pq);
    } else if (a.engine_name == "heuristic") {
        est = engine::norm_heuristic(A, pq, opts.ascent);
    } else if (a.engine_name == "grid") {
        est = engine::norm_grid_oracle(A, pq, a.resolution);
    } else if (a.engine_name == "spectral") {
        if (!(pq.p.is(2.0) && pq.q.is(2.0)))
            throw std::domain_error("spectral engine needs p = q = 2");
        est = engine::norm_spectral(A);
    } else {
        throw std::domain_error("unknown engine: " + a.engine_name);
    }
    if (kind == NormKind::expectation)
        est = engine::convert_estimate(est, A.rows(), A.cols(), pq, kind);

    json rec = base_record("norm");
    rec["input"] = a.input;
    rec["rows"] = A.rows();
    rec["cols"] = A.cols();
    rec["p"] = a.p;
    rec["q"] = a.q;
    rec["engine"] = a.engine_name;
    rec["restarts"] = a.restarts;
    rec["tol"] = a.tol;
    rec["seed"] = a.seed;
    rec["estimate"] = estimate_to_json(est);
    rec["witness_ratio"] = engine::witness_ratio(A, est.witness, pq, kind);
    emit(rec);
    return kExitOk;
}

struct ReduceArgs {
    std::string instance_file;
    std::string plant;  // "V,DEG,R,L"
    bool unsat = false;
    std::uint64_t seed = 1;
    std::string labeling_file;
    std::string output;
    std::string instance_out;
    Index cap = reduction::kDefaultReductionCap;
};

int run_reduce(const ReduceArgs& a) {
    reduction::LabelCoverInstance inst;
    std::optional<reduction::Labeling> labeling;
    if (!a.plant.empty()) {
        int v, deg, r, l;
        if (std::sscanf(a.plant.c_str(), "%d,%d,%d,%d", &v, &deg, &r, &l) != 4)
            throw std::domain_error("--plant expects V,DEG,R,L");
        auto planted = reduction::generate_planted(v, deg, r, l, a.seed, !a.unsat);
        inst = std::move(planted.instance);
        labeling = std::move(planted.labeling);
    } else if (!a.instance_file.empty()) {
        inst = io::read_instance(a.instance_file);
        if (!a.labeling_file.empty())
            labeling = io::read_labeling(a.labeling_file, inst.num_vertices);
    } else {
        throw std::domain_error("reduce needs --instance or --plant");
    }

    const auto out = reduction::build_reduction_matrix(inst, a.cap);
    io::write_matrix(a.output, out.A);
    if (!a.instance_out.empty()) io::write_instance(a.instance_out, inst);

    json rec = base_record("reduce");
    rec["seed"] = a.seed;
    rec["output"] = a.output;
    rec["vertices"] = inst.num_vertices;
    rec["edges"] = inst.edges.size();
    rec["big_labels"] = inst.big_labels;
    rec["small_labels"] = inst.small_labels;
    rec["size"] = out.A.rows();
    rec["projector_rank"] = out.projector_rank;
    rec["trace"] = out.A.trace();
    rec["symmetry_residual"] = (out.A - out.A.transpose()).cwiseAbs().maxCoeff();
    rec["idempotence_residual"] = (out.A * out.A - out.A).cwiseAbs().maxCoeff();
    const auto stats = reduction::instance_stats(inst);
    rec["d_to_1"] = stats.d_to_1;
    rec["smoothness_emp"] = stats.smoothness_emp;
    rec["connected"] = stats.connected;
    if (labeling) {
        const Vector f = reduction::completeness_vector(inst, *labeling);
        rec["completeness_residual"] = (out.A * f - f).cwiseAbs().maxCoeff();
        rec["labeling_satisfies"] = reduction::satisfies_all(inst, *labeling);
    }
    emit(rec);
    return kExitOk;
}

struct EmbedArgs {
    std::string kind;
    int n = 8;
    Index m = 0;
    int q_int = 4;
    double q = 0.0;
    double p = 1.5;
    double eps = 0.2;
    std::uint64_t seed = 1;
    int trials = 200;
    std::string output;
};

int run_embed(const EmbedArgs& a) {
    json rec = base_record("embed");
    rec["kind"] = a.kind;
    rec["seed"] = a.seed;
    rec["trials"] = a.trials;

    if (a.kind == "gaussian") {
        const double q = (a.q > 0.0) ? a.q : a.q_int;
        const Index m = (a.m > 0) ? a.m : Index(20000);
        const Matrix B = embed::gaussian_embedding(a.n, m, a.seed);
        if (!a.output.empty()) io::write_matrix(a.output, B);
        const auto rep = embed::isometry_report(B, q, a.trials, derive_seed(a.seed, 7));
        rec["n"] = a.n;
        rec["m"] = m;
        rec["q"] = q;
        rec["target"] = rep.target;
        rec["max_rel_dev"] = rep.max_rel_dev;
        rec["mean_rel_dev"] = rep.mean_rel_dev;
    } else if (a.kind == "kwise") {
        const Matrix B = embed::derandomized_embedding(a.n, a.q_int);
        if (!a.output.empty()) io::write_matrix(a.output, B);
        // exact-identity residual against the enumerated Rademacher moment
        Rng rng(a.seed);
        double worst = 0.0;
        for (int t = 0; t < a.trials; ++t) {
            Vector x(a.n);
            for (int i = 0; i < a.n; ++i) x[i] = rng.gaussian();
            const double lhs = std::pow(vector_norm(B * x, Exponent(double(a.q_int))), a.q_int);
            const double rhs =
                double(B.rows()) * moments::rademacher_moment(x, a.q_int);
            worst = std::max(worst, std::abs(lhs - rhs) / rhs);
        }
        rec["n"] = a.n;
        rec["m"] = B.rows();
        rec["q"] = a.q_int;
        rec["identity_residual"] = worst;
    } else if (a.kind == "stable") {
        const double q = (a.q > 0.0) ? a.q : 1.2;
        const auto emb = embed::schechtman_embedding(a.n, a.p, q, a.eps, a.seed);
        if (!a.output.empty()) io::write_matrix(a.output, emb.E);
        const auto rep =
            embed::lp_isometry_report(emb.E, a.p, q, a.trials, derive_seed(a.seed, 9));
        rec["n"] = a.n;
        rec["m"] = emb.m;
        rec["p"] = a.p;
        rec["q"] = q;
        rec["eps"] = a.eps;
        rec["c_pq"] = emb.c_pq;
        rec["tau"] = emb.tau;
        rec["trunc_prob"] = emb.trunc_prob;
        rec["max_rel_dev"] = rep.max_rel_dev;
        rec["mean_rel_dev"] = rep.mean_rel_dev;
    } else {
        throw std::domain_error("embed kind must be gaussian, kwise or stable");
    }
    if (!a.output.empty()) rec["output"] = a.output;
    emit(rec);
    return kExitOk;
}

struct TensorArgs {
    std::string input_a;
    std::string input_b;
    std::string p = "2", q = "2";
    int k = 1;
    int restarts = 24;
    std::uint64_t seed = 1;
};

int run_tensor(const TensorArgs& a) {
    const ExponentPair pq{parse_exponent(a.p), parse_exponent(a.q)};
    engine::EstimateOptions opts;
    opts.ascent.restarts = a.restarts;
    opts.ascent.seed = a.seed;
    const Matrix A = io::read_matrix(a.input_a);

    if (!a.input_b.empty()) {
        const Matrix B = io::read_matrix(a.input_b);
        const auto run = tensor::tensor_norm_check(A, B, pq, opts);
        json rec = base_record("tensor");
        rec["mode"] = "product-check";
        rec["a"] = a.input_a;
        rec["b"] = a.input_b;
        rec["p"] = a.p;
        rec["q"] = a.q;
        rec["seed"] = a.seed;
        rec["restarts"] = a.restarts;
        rec["norm_a"] = run.a.value;
        rec["norm_b"] = run.b.value;
        rec["norm_product"] = run.product_est.value;
        rec["factor_product"] = run.factor_product;
        rec["rel_gap"] = run.rel_gap;
        rec["equality_expected"] = run.equality_expected;
        emit(rec);
        return kExitOk;
    }

    Matrix P = A;
    engine::NormEstimate base = engine::estimate_norm(A, pq, opts);
    for (int k = 1; k <= a.k; ++k) {
        if (k > 1) P = kron(P, A);
        const auto est = engine::estimate_norm(P, pq, opts);
        json rec = base_record("tensor");
        rec["mode"] = "power";
        rec["a"] = a.input_a;
        rec["p"] = a.p;
        rec["q"] = a.q;
        rec["seed"] = a.seed;
        rec["restarts"] = a.restarts;
        rec["k"] = k;
        rec["size"] = P.rows();
        rec["norm"] = est.value;
        rec["base_norm_pow_k"] = std::pow(base.value, k);
        emit(rec);
    }
    return kExitOk;
}

int run_verify(const std::string& suite, bool list_only) {
    if (list_only) {
        for (const auto& [id, name] : verify::criteria()) {
            json rec = base_record("verify-list");
            rec["id"] = id;
            rec["name"] = name;
            emit(rec);
        }
        return kExitOk;
    }
    const auto results = verify::run(suite);
    bool all_pass = true;
    for (const auto& r : results) {
        std::cout << (r.pass ? "[PASS] " : "[FAIL] ") << r.id << " " << r.name << " ("
                  << r.seconds << " s): " << r.detail << "\n";
        all_pass = all_pass && r.pass;
    }
    json rec = base_record("verify");
    rec["suite"] = suite;
    rec["criteria"] = results.size();
    rec["passed"] = all_pass;
    emit(rec);
    return all_pass ? kExitOk : kExitVerifyFail;
}

int run_bench(const std::string& engine_name, const std::string& sizes_csv, std::uint64_t seed) {
    std::vector<int> sizes;
    std::stringstream ss(sizes_csv);
    for (std::string tok; std::getline(ss, tok, ',');) sizes.push_back(std::stoi(tok));
    if (sizes.empty()) sizes = {8, 16, 32, 64};

    for (int n : sizes) {
        Rng rng(derive_seed(seed, n));
        Matrix A(n, n);
        for (Index i = 0; i < n; ++i)
            for (Index j = 0; j < n; ++j) A(i, j) = rng.uniform(-1.0, 1.0);

        json rec = base_record("bench");
        rec["engine"] = engine_name;
        rec["n"] = n;
        rec["seed"] = seed;
        const auto t0 = std::chrono::steady_clock::now();
        double value = 0.0;
        if (engine_name == "sign-enum") {
            if (n > engine::kSignEnumMaxDim) continue;
            value = engine::norm_exact_signenum(A, {Exponent::inf(), Exponent(1.0)}).value;
            rec["p"] = "inf";
            rec["q"] = "1";
        } else {
            engine::AscentOptions opts;
            opts.seed = derive_seed(seed, 1000 + n);
            value = engine::norm_heuristic(A, {Exponent(2.5), Exponent(1.5)}, opts).value;
            rec["p"] = "2.5";
            rec["q"] = "1.5";
        }
        const auto t1 = std::chrono::steady_clock::now();
        rec["value"] = value;
        rec["millis"] = std::chrono::duration<double, std::milli>(t1 - t0).count();
        emit(rec);
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"operator norm toolkit: norm engines, label-cover reduction, embeddings"};
    app.require_subcommand(1);

    NormArgs na;
    auto* norm = app.add_subcommand("norm", "estimate ||A||_{p->q} for a matrix file");
    norm->add_option("--input", na.input, "matrix file (.mtx/.mm, .csv, .bin)")->required();
    norm->add_option("--p", na.p, "input exponent in [1,inf]");
    norm->add_option("--q", na.q, "output exponent in [1,inf]");
    norm->add_option("--kind", na.kind, "counting or expectation");
    norm->add_option("--engine", na.engine_name,
                     "auto, closed-form, sign-enum, heuristic, grid, spectral");
    norm->add_option("--restarts", na.restarts, "ascent restarts");
    norm->add_option("--tol", na.tol, "ascent stopping tolerance");
    norm->add_option("--seed", na.seed, "ascent seed");
    norm->add_option("--resolution", na.resolution, "grid oracle resolution");

    ReduceArgs ra;
    auto* reduce = app.add_subcommand("reduce", "build the reduction operator from label cover");
    reduce->add_option("--instance", ra.instance_file, "instance file");
    reduce->add_option("--plant", ra.plant, "generate: V,DEG,R,L");
    reduce->add_flag("--unsat", ra.unsat, "plant without a satisfying labeling");
    reduce->add_option("--seed", ra.seed, "generator seed");
    reduce->add_option("--labeling", ra.labeling_file, "labeling file for the certificate");
    reduce->add_option("--output", ra.output, "matrix output file")->required();
    reduce->add_option("--instance-out", ra.instance_out, "also write the instance file");
    reduce->add_option("--cap", ra.cap, "matrix size cap");

    EmbedArgs ea;
    auto* embed_cmd = app.add_subcommand("embed", "construct an embedding matrix and report");
    embed_cmd->add_option("kind", ea.kind, "gaussian | kwise | stable")->required();
    embed_cmd->add_option("--n", ea.n, "source dimension");
    embed_cmd->add_option("--m", ea.m, "target dimension (gaussian)");
    embed_cmd->add_option("--q", ea.q, "target exponent");
    embed_cmd->add_option("--q-int", ea.q_int, "even target exponent (kwise)");
    embed_cmd->add_option("--p", ea.p, "source exponent (stable)");
    embed_cmd->add_option("--eps", ea.eps, "distortion budget (stable)");
    embed_cmd->add_option("--seed", ea.seed, "seed");
    embed_cmd->add_option("--trials", ea.trials, "report trials");
    embed_cmd->add_option("--output", ea.output, "matrix output file");

    TensorArgs ta;
    auto* tensor_cmd = app.add_subcommand("tensor", "Kronecker power / product norm checks");
    tensor_cmd->add_option("--input", ta.input_a, "matrix A")->required();
    tensor_cmd->add_option("--b", ta.input_b, "matrix B (product check mode)");
    tensor_cmd->add_option("--p", ta.p, "input exponent");
    tensor_cmd->add_option("--q", ta.q, "output exponent");
    tensor_cmd->add_option("--k", ta.k, "max tensor power");
    tensor_cmd->add_option("--restarts", ta.restarts, "ascent restarts");
    tensor_cmd->add_option("--seed", ta.seed, "ascent seed");

    std::string suite = "all";
    bool list_only = false;
    auto* verify_cmd = app.add_subcommand("verify", "run a verification suite");
    verify_cmd->add_option("suite", suite, "suite name, id, or 'all'");
    verify_cmd->add_flag("--list", list_only, "list available suites");

    std::string bench_engine = "heuristic";
    std::string bench_sizes = "8,16,32,64";
    std::uint64_t bench_seed = 1;
    auto* bench = app.add_subcommand("bench", "timing sweep for the norm engines");
    bench->add_option("--engine", bench_engine, "heuristic | sign-enum");
    bench->add_option("--sizes", bench_sizes, "comma-separated matrix sizes");
    bench->add_option("--seed", bench_seed, "seed");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*norm) return run_norm(na);
        if (*reduce) return run_reduce(ra);
        if (*embed_cmd) return run_embed(ea);
        if (*tensor_cmd) return run_tensor(ta);
        if (*verify_cmd) return run_verify(suite, list_only);
        if (*bench) return run_bench(bench_engine, bench_sizes, bench_seed);
    } catch (const parse_error& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitInputError;
    } catch (const resource_error& e) {
        std::cerr << "resource cap: " << e.what() << "\n";
        return kExitResourceCap;
    } catch (const std::domain_error& e) {
        std::cerr << "domain error: " << e.what() << "\n";
        return kExitInputError;
    } catch (const std::invalid_argument& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitInputError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitVerifyFail;
    }
    return kExitOk;
}
