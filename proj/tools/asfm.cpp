// Command-line front end: instance generation and ingestion, single solves
// with trace export, benchmark suites, performance profiles, and instance
// verification against the exhaustive oracles.

#include <cstdint>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include <asfm/harness.hpp>
#include <asfm/io.hpp>
#include <asfm/oracle.hpp>
#include <asfm/perturb.hpp>

namespace {

struct GenerateArgs {
    std::string type = "loc";
    int n = 12, m = 0, k = 3;
    double gamma_lower = 0.8;
    std::uint64_t seed = 1;
    int perturb_count = 0;
    std::string out;
};

int cmd_generate(const GenerateArgs& a) {
    asfm::SuiteClass cls;
    cls.type = asfm::instance_type_from_string(a.type);
    cls.n = a.n;
    cls.m = a.m;
    cls.k = a.k;
    cls.gamma_lower = a.gamma_lower;
    cls.perturb_count = a.perturb_count;
    asfm::Instance inst = asfm::make_suite_instance(cls, a.seed);
    asfm::save_instance(inst, a.out);
    std::cout << "wrote " << inst.id() << " (gamma_lower=" << inst.gamma_lower
              << ", overlay=" << inst.overlay.count() << ") to " << a.out << "\n";
    return 0;
}

struct IngestArgs {
    std::string csv;
    int n = 0, k = 3;
    std::uint64_t seed = 1;
    std::string out;
};

int cmd_ingest_ca(const IngestArgs& a) {
    asfm::TransactionData data = asfm::read_transactions_file(a.csv);
    asfm::Instance inst = asfm::make_ca_instance(data, a.n, a.k, a.seed);
    asfm::save_instance(inst, a.out);
    std::cout << "wrote " << inst.id() << " (items=" << inst.n
              << ", transactions=" << data.transactions.size()
              << ", gamma_lower=" << inst.gamma_lower << ") to " << a.out << "\n";
    return 0;
}

struct SolveArgs {
    std::string instance;
    std::string algo = "bc-icg";
    int lambda = 10'000;
    double time_limit_s = 0.0;
    std::uint64_t node_limit = 0;
    std::string out;
    std::string trace;
    std::string node_trace;
};

int cmd_solve(const SolveArgs& a) {
    asfm::Instance inst = asfm::load_instance(a.instance);
    asfm::Algorithm algo = asfm::algorithm_from_string(a.algo);
    asfm::SolveLimits limits{a.time_limit_s, a.node_limit};
    asfm::RunOutput out =
        asfm::run_one(inst, algo, a.lambda, limits, !a.node_trace.empty());

    const asfm::RunRecord& r = out.record;
    std::cout << std::setprecision(12) << r.instance << " " << to_string(r.algorithm)
              << ": status=" << to_string(r.status) << " value=" << r.value
              << " bound=" << r.bound << " nodes=" << r.nodes
              << " subsolver_calls=" << r.subsolver_calls
              << " oracle_calls=" << r.oracle_calls << " millis=" << r.millis
              << "\n  best=" << out.best.to_string() << "\n";
    if (!a.out.empty())
        asfm::write_csv_file(a.out, std::vector<asfm::RunRecord>{r},
                             [](std::ostream& os, const auto& v) {
                                 asfm::write_records_csv(os, v);
                             });
    if (!a.trace.empty())
        asfm::write_csv_file(a.trace, out.trace, [](std::ostream& os, const auto& v) {
            asfm::write_trace_csv(os, v);
        });
    if (!a.node_trace.empty())
        asfm::write_csv_file(a.node_trace, out.node_trace,
                             [](std::ostream& os, const auto& v) {
                                 asfm::write_node_trace_csv(os, v);
                             });
    return 0;
}

int cmd_suite(const std::string& config_path, const std::string& out_path) {
    std::ifstream in(config_path);
    if (!in) throw std::runtime_error("cannot read " + config_path);
    nlohmann::json j;
    in >> j;
    asfm::SuiteConfig cfg = asfm::parse_suite_config(j);
    std::vector<asfm::RunRecord> records = asfm::run_suite(cfg);
    asfm::write_csv_file(out_path, records, [](std::ostream& os, const auto& v) {
        asfm::write_records_csv(os, v);
    });
    std::cout << "wrote " << records.size() << " records to " << out_path << "\n";
    return 0;
}

int cmd_profile(const std::string& records_path, const std::string& out_path) {
    std::ifstream in(records_path);
    if (!in) throw std::runtime_error("cannot read " + records_path);
    std::vector<asfm::RunRecord> records = asfm::read_records_csv(in);
    std::vector<asfm::ProfilePoint> points = asfm::performance_profile(records);
    asfm::write_csv_file(out_path, points, [](std::ostream& os, const auto& v) {
        asfm::write_profile_csv(os, v);
    });
    std::cout << "wrote " << points.size() << " profile points to " << out_path << "\n";
    return 0;
}

struct VerifyArgs {
    std::string instance;
    int lambda = 10'000;
};

int cmd_verify(const VerifyArgs& a) {
    asfm::Instance inst = asfm::load_instance(a.instance);
    const asfm::GroundSet gs = inst.ground();
    asfm::EvaluatedFunction f = inst.make_function();
    int failures = 0;

    std::cout << std::setprecision(12) << "verify " << inst.id() << " (n=" << inst.n
              << ", k=" << inst.k << ", gamma_lower=" << inst.gamma_lower << ")\n";

    if (asfm::feasible_subset_count(gs.n, gs.k) <= 10'000'000ull) {
        asfm::OracleReport oracle = asfm::brute_force_opt(f, gs);
        std::cout << "  brute-force optimum: " << oracle.optimum << " at "
                  << oracle.optimizers.front().to_string() << "\n";
        for (asfm::Algorithm algo :
             {asfm::Algorithm::AstarMod, asfm::Algorithm::Mcg, asfm::Algorithm::Icg,
              asfm::Algorithm::BcIcg}) {
            asfm::RunOutput run = asfm::run_one(inst, algo, a.lambda);
            bool ok = run.record.status == asfm::SolveStatus::Optimal &&
                      std::abs(run.record.value - oracle.optimum) <= 1e-9;
            std::cout << "  " << to_string(algo) << " agreement: "
                      << (ok ? "ok" : "MISMATCH") << " (value=" << run.record.value
                      << ")\n";
            if (!ok) ++failures;
        }
        asfm::RunOutput g = asfm::run_one(inst, asfm::Algorithm::Greedy);
        std::cout << "  greedy value: " << g.record.value << " ("
                  << g.record.value / oracle.optimum << " of optimum)\n";
    } else {
        std::cout << "  brute-force agreement skipped (instance too large)\n";
    }

    if (gs.n <= 10) {
        auto [gamma, gamma_bar] = asfm::ratio_bounds_bruteforce(f);
        std::cout << "  exhaustive ratio bounds: gamma=" << gamma
                  << " gamma_bar=" << gamma_bar << "\n";
        if (inst.gamma_lower > gamma + 1e-9) {
            std::cout << "  declared gamma_lower exceeds exhaustive gamma: FAIL\n";
            ++failures;
        }
        auto v1 = asfm::check_prop1(f, gs, gamma, gamma_bar);
        auto v2 = asfm::check_prop2(f, gs, gamma, gamma_bar);
        auto v3 = asfm::check_prop3(f, gs, gamma, gamma_bar);
        std::cout << "  property checks: " << v1.size() << " / " << v2.size() << " / "
                  << v3.size() << " violations\n";
        failures += static_cast<int>(v1.size() + v2.size() + v3.size());
        for (const auto* vs : {&v1, &v2, &v3})
            for (std::size_t i = 0; i < vs->size() && i < 3; ++i)
                std::cout << "    " << (*vs)[i].condition << " lhs=" << (*vs)[i].lhs
                          << " rhs=" << (*vs)[i].rhs << "\n";
    } else {
        std::cout << "  property checks skipped (n > 10)\n";
    }

    std::cout << (failures == 0 ? "verify: ok" : "verify: FAILED") << "\n";
    return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"approximately submodular maximization toolkit"};
    app.require_subcommand(1);

    GenerateArgs gen;
    CLI::App* g = app.add_subcommand("generate", "generate a benchmark instance");
    g->add_option("--type", gen.type, "instance type: loc, cov, inf")->required();
    g->add_option("--n", gen.n, "ground set size")->required();
    g->add_option("--m", gen.m, "secondary dimension (default n+1)");
    g->add_option("--k", gen.k, "cardinality budget")->required();
    g->add_option("--gamma-lower", gen.gamma_lower, "target ratio bound when perturbing");
    g->add_option("--seed", gen.seed, "random seed");
    g->add_option("--perturb-count", gen.perturb_count, "number of reward perturbations");
    g->add_option("--out", gen.out, "output instance file")->required();

    IngestArgs ing;
    CLI::App* i = app.add_subcommand("ingest-ca", "build an instance from transactions");
    i->add_option("--csv", ing.csv, "transaction CSV, one transaction per line")
        ->required();
    i->add_option("--n", ing.n, "item count (0 = all distinct items)");
    i->add_option("--k", ing.k, "cardinality budget")->required();
    i->add_option("--seed", ing.seed, "random seed for item utilities");
    i->add_option("--out", ing.out, "output instance file")->required();

    SolveArgs sol;
    CLI::App* s = app.add_subcommand("solve", "run one algorithm on an instance file");
    s->add_option("--instance", sol.instance, "instance file")->required();
    s->add_option("--algo", sol.algo,
                  "greedy, astar-mod, cg, mcg, icg, bc-icg, brute");
    s->add_option("--lambda", sol.lambda, "samples per cut-generation round");
    s->add_option("--time-limit-s", sol.time_limit_s, "wall clock limit, 0 = none");
    s->add_option("--node-limit", sol.node_limit, "node/iteration limit, 0 = none");
    s->add_option("--out", sol.out, "records CSV");
    s->add_option("--trace", sol.trace, "per-iteration trace CSV");
    s->add_option("--node-trace", sol.node_trace, "per-node trace CSV (bc-icg)");

    std::string suite_config, suite_out;
    CLI::App* su = app.add_subcommand("suite", "run a benchmark suite from a config");
    su->add_option("--config", suite_config, "suite config JSON")->required();
    su->add_option("--out", suite_out, "records CSV")->required();

    std::string prof_records, prof_out;
    CLI::App* p = app.add_subcommand("profile", "performance profile from records");
    p->add_option("--records", prof_records, "records CSV")->required();
    p->add_option("--out", prof_out, "profile CSV")->required();

    VerifyArgs ver;
    CLI::App* v = app.add_subcommand("verify", "check an instance against the oracles");
    v->add_option("--instance", ver.instance, "instance file")->required();
    v->add_option("--lambda", ver.lambda, "samples per cut-generation round");

    CLI11_PARSE(app, argc, argv);

    try {
        if (g->parsed()) return cmd_generate(gen);
        if (i->parsed()) return cmd_ingest_ca(ing);
        if (s->parsed()) return cmd_solve(sol);
        if (su->parsed()) return cmd_suite(suite_config, suite_out);
        if (p->parsed()) return cmd_profile(prof_records, prof_out);
        if (v->parsed()) return cmd_verify(ver);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
