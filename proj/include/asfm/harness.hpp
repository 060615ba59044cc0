#ifndef ASFM_HARNESS_HPP
#define ASFM_HARNESS_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "astar.hpp"
#include "branch_and_cut.hpp"
#include "constraint_generation.hpp"
#include "greedy.hpp"
#include "instances.hpp"
#include "limits.hpp"
#include "oracle.hpp"
#include "perturb.hpp"
#include "subset.hpp"

namespace asfm {

enum class Algorithm { Greedy, AstarMod, Cg, Mcg, Icg, BcIcg, Brute };

inline std::string to_string(Algorithm a) {
    switch (a) {
        case Algorithm::Greedy: return "GREEDY";
        case Algorithm::AstarMod: return "ASTAR-MOD";
        case Algorithm::Cg: return "CG";
        case Algorithm::Mcg: return "MCG";
        case Algorithm::Icg: return "ICG";
        case Algorithm::BcIcg: return "BC-ICG";
        case Algorithm::Brute: return "BRUTE";
    }
    return "?";
}

inline Algorithm algorithm_from_string(const std::string& s) {
    std::string u;
    for (char c : s) u += static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    if (u == "GREEDY") return Algorithm::Greedy;
    if (u == "ASTAR-MOD" || u == "ASTAR" || u == "ASTAR_MOD") return Algorithm::AstarMod;
    if (u == "CG") return Algorithm::Cg;
    if (u == "MCG") return Algorithm::Mcg;
    if (u == "ICG") return Algorithm::Icg;
    if (u == "BC-ICG" || u == "BC" || u == "BC_ICG") return Algorithm::BcIcg;
    if (u == "BRUTE") return Algorithm::Brute;
    throw std::invalid_argument("unknown algorithm: " + s);
}

struct RunRecord {
    std::string instance;
    Algorithm algorithm = Algorithm::Greedy;
    SolveStatus status = SolveStatus::Optimal;
    double value = 0.0;
    double bound = 0.0;
    std::uint64_t nodes = 0;
    std::uint64_t subsolver_calls = 0;
    std::uint64_t oracle_calls = 0;
    std::int64_t millis = 0;
    std::uint64_t seed = 0;
};

struct RunOutput {
    RunRecord record;
    Subset best;
    std::vector<CgTraceEntry> trace;           // CG-family per-iteration rows
    std::vector<BcNodeTraceEntry> node_trace;  // branch-and-cut per-node rows
};

/// Runs one algorithm on one instance. Runs that hit the wall-clock limit are
/// recorded with elapsed = limit, the convention the profile math relies on.
inline RunOutput run_one(const Instance& inst, Algorithm algo, int lambda = 10'000,
                         const SolveLimits& limits = {}, bool keep_node_trace = false) {
    EvaluatedFunction f = inst.make_function();
    const GroundSet gs = inst.ground();
    Stopwatch clock;

    RunOutput out;
    RunRecord& rec = out.record;
    rec.instance = inst.id();
    rec.algorithm = algo;
    rec.seed = inst.seed;

    switch (algo) {
        case Algorithm::Greedy: {
            GreedyChain chain = greedy(f, gs);
            out.best = chain.solution();
            rec.value = chain.value();
            rec.bound = chain.value();
            break;
        }
        case Algorithm::AstarMod: {
            AstarResult r = astar_solve(f, gs, f.gamma_lower(), limits);
            out.best = r.best;
            rec.status = r.status;
            rec.value = r.value;
            rec.bound = r.value;
            rec.nodes = r.nodes;
            break;
        }
        case Algorithm::Cg:
        case Algorithm::Mcg: {
            CgMode mode = algo == Algorithm::Cg ? CgMode::SfmExact : CgMode::Asfm;
            CgResult r = cg_solve(f, gs, mode, limits);
            out.best = r.best;
            rec.status = r.status;
            rec.value = r.value;
            rec.bound = r.status == SolveStatus::Optimal ? r.value : r.bound;
            rec.nodes = r.subsolver_nodes;
            rec.subsolver_calls = r.subsolver_calls;
            out.trace = std::move(r.trace);
            break;
        }
        case Algorithm::Icg: {
            CgResult r = icg_solve(f, gs, lambda, limits, inst.seed);
            out.best = r.best;
            rec.status = r.status;
            rec.value = r.value;
            rec.bound = r.status == SolveStatus::Optimal ? r.value : r.bound;
            rec.nodes = r.subsolver_nodes;
            rec.subsolver_calls = r.subsolver_calls;
            out.trace = std::move(r.trace);
            break;
        }
        case Algorithm::BcIcg: {
            BcResult r = bc_icg_solve(f, gs, lambda, limits, inst.seed, keep_node_trace);
            out.best = r.best;
            rec.status = r.status;
            rec.value = r.value;
            rec.bound = r.status == SolveStatus::Optimal ? r.value : r.bound;
            rec.nodes = r.stats.nodes_processed;
            rec.subsolver_calls = r.stats.subsolver_calls;
            out.trace = std::move(r.warmup_trace);
            out.node_trace = std::move(r.node_trace);
            break;
        }
        case Algorithm::Brute: {
            OracleReport r = brute_force_opt(f, gs);
            out.best = r.optimizers.front();
            rec.value = r.optimum;
            rec.bound = r.optimum;
            rec.nodes = r.subsets_enumerated;
            break;
        }
    }
    rec.oracle_calls = f.oracle_calls();
    rec.millis = rec.status == SolveStatus::Limit && limits.time_limit_s > 0.0
                     ? static_cast<std::int64_t>(limits.time_limit_s * 1000.0)
                     : clock.elapsed_ms();
    return out;
}

// ---------------------------------------------------------------------------
// Suite configuration and execution.
// ---------------------------------------------------------------------------

struct SuiteClass {
    InstanceType type = InstanceType::Loc;
    int n = 0;
    int m = 0;  // 0 -> n + 1
    int k = 1;
    double gamma_lower = 0.8;  // target ratio when perturbing
    int perturb_count = 0;
    std::vector<std::uint64_t> seeds;
};

struct SuiteConfig {
    std::vector<SuiteClass> classes;
    std::vector<Algorithm> algorithms;
    int lambda = 10'000;
    SolveLimits limits;
};

inline SuiteConfig parse_suite_config(const nlohmann::json& j) {
    SuiteConfig cfg;
    try {
        for (const auto& a : j.value("algorithms", nlohmann::json::array()))
            cfg.algorithms.push_back(algorithm_from_string(a.get<std::string>()));
        cfg.lambda = j.value("lambda", 10'000);
        cfg.limits.time_limit_s = j.value("time_limit_s", 0.0);
        cfg.limits.node_limit = j.value("node_limit", std::uint64_t{0});
        for (const auto& c : j.at("classes")) {
            SuiteClass cls;
            cls.type = instance_type_from_string(c.at("type").get<std::string>());
            cls.n = c.at("n").get<int>();
            cls.m = c.value("m", 0);
            cls.k = c.at("k").get<int>();
            cls.gamma_lower = c.value("gamma_lower", 0.8);
            cls.perturb_count = c.value("perturb_count", 0);
            const auto& seeds = c.at("seeds");
            if (seeds.is_number()) {
                for (std::uint64_t s = 1; s <= seeds.get<std::uint64_t>(); ++s)
                    cls.seeds.push_back(s);
            } else {
                cls.seeds = seeds.get<std::vector<std::uint64_t>>();
            }
            cfg.classes.push_back(std::move(cls));
        }
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error(std::string("suite config: ") + e.what());
    }
    return cfg;
}

/// Materializes one generated (and optionally perturbed) benchmark instance.
inline Instance make_suite_instance(const SuiteClass& cls, std::uint64_t seed) {
    Instance inst;
    inst.type = cls.type;
    inst.n = cls.n;
    inst.m = cls.m > 0 ? cls.m : cls.n + 1;
    inst.k = cls.k;
    inst.seed = seed;
    inst.gamma_lower = 1.0;
    switch (cls.type) {
        case InstanceType::Loc:
            inst.data = generate_loc(inst.n, inst.m, seed);
            break;
        case InstanceType::Cov:
            inst.data = generate_cov(inst.n, inst.m, seed);
            break;
        case InstanceType::Inf:
            inst.data = generate_inf(inst.n, inst.m, seed);
            break;
        case InstanceType::Ca:
            throw std::runtime_error(
                "suite config: CA instances come from transaction ingestion, not "
                "generation");
    }
    if (cls.perturb_count > 0)
        perturb_in_place(inst, cls.perturb_count, cls.gamma_lower, seed);
    return inst;
}

inline std::vector<RunRecord> run_suite(const SuiteConfig& cfg) {
    std::vector<RunRecord> records;
    for (const SuiteClass& cls : cfg.classes)
        for (std::uint64_t seed : cls.seeds) {
            Instance inst = make_suite_instance(cls, seed);
            for (Algorithm algo : cfg.algorithms)
                records.push_back(
                    run_one(inst, algo, cfg.lambda, cfg.limits).record);
        }
    std::sort(records.begin(), records.end(), [](const RunRecord& a, const RunRecord& b) {
        if (a.instance != b.instance) return a.instance < b.instance;
        return to_string(a.algorithm) < to_string(b.algorithm);
    });
    return records;
}

// ---------------------------------------------------------------------------
// Performance profiles.
// ---------------------------------------------------------------------------

struct ProfilePoint {
    Algorithm algorithm = Algorithm::Greedy;
    double beta = 1.0;
    std::uint64_t rho = 0;  // instances with time ratio <= beta
};

inline std::vector<double> default_beta_grid() {
    std::vector<double> betas;
    for (int i = 0; i <= 36; ++i) betas.push_back(1.0 + 0.25 * i);
    return betas;
}

/// Time ratios R over the records grid. A run that hit its limit enters the
/// ratio with its (limit-valued) elapsed time; the ratio is infinite only on
/// instances no algorithm solved.
inline std::vector<ProfilePoint> performance_profile(
    const std::vector<RunRecord>& records,
    const std::vector<double>& betas = default_beta_grid()) {
    std::map<std::string, std::vector<const RunRecord*>> by_instance;
    std::vector<Algorithm> algos;
    for (const RunRecord& r : records) {
        by_instance[r.instance].push_back(&r);
        if (std::find(algos.begin(), algos.end(), r.algorithm) == algos.end())
            algos.push_back(r.algorithm);
    }
    for (const auto& [id, rs] : by_instance)
        if (rs.size() != algos.size())
            throw std::runtime_error("performance_profile: incomplete grid at " + id);

    // R[algorithm][instance]
    std::map<std::string, std::map<std::string, double>> ratio;
    for (const auto& [id, rs] : by_instance) {
        double t_min = std::numeric_limits<double>::infinity();
        bool any_solved = false;
        for (const RunRecord* r : rs) {
            t_min = std::min(t_min, static_cast<double>(std::max<std::int64_t>(r->millis, 1)));
            any_solved = any_solved || r->status == SolveStatus::Optimal;
        }
        for (const RunRecord* r : rs) {
            double t = static_cast<double>(std::max<std::int64_t>(r->millis, 1));
            ratio[to_string(r->algorithm)][id] =
                any_solved ? t / t_min : std::numeric_limits<double>::infinity();
        }
    }

    std::vector<ProfilePoint> points;
    for (Algorithm a : algos)
        for (double beta : betas) {
            ProfilePoint p;
            p.algorithm = a;
            p.beta = beta;
            for (const auto& [id, r] : ratio[to_string(a)])
                if (r <= beta) ++p.rho;
            points.push_back(p);
        }
    return points;
}

// ---------------------------------------------------------------------------
// CSV serialization. Formats are versioned by a leading comment line.
// ---------------------------------------------------------------------------

inline constexpr const char* kRecordsCsvVersion = "records-v1";
inline constexpr const char* kTraceCsvVersion = "trace-v1";
inline constexpr const char* kNodeTraceCsvVersion = "bc-nodes-v1";
inline constexpr const char* kProfileCsvVersion = "profile-v1";

inline void write_records_csv(std::ostream& out, const std::vector<RunRecord>& records) {
    out << "# format: " << kRecordsCsvVersion << "\n";
    out << "instance,algorithm,status,value,bound,nodes,subsolver_calls,oracle_calls,"
           "millis,seed\n";
    out << std::setprecision(17);
    for (const RunRecord& r : records)
        out << r.instance << ',' << to_string(r.algorithm) << ',' << to_string(r.status)
            << ',' << r.value << ',' << r.bound << ',' << r.nodes << ','
            << r.subsolver_calls << ',' << r.oracle_calls << ',' << r.millis << ','
            << r.seed << "\n";
}

inline void write_trace_csv(std::ostream& out, const std::vector<CgTraceEntry>& trace) {
    out << "# format: " << kTraceCsvVersion << "\n";
    out << "t,z,f_solution,f_best,q_size,qplus_size,subsolver_nodes,millis\n";
    out << std::setprecision(17);
    for (const CgTraceEntry& e : trace)
        out << e.t << ',' << e.z << ',' << e.f_solution << ',' << e.f_best << ','
            << e.q_size << ',' << e.qplus_size << ',' << e.subsolver_nodes << ','
            << e.millis << "\n";
}

inline void write_node_trace_csv(std::ostream& out,
                                 const std::vector<BcNodeTraceEntry>& trace) {
    out << "# format: " << kNodeTraceCsvVersion << "\n";
    out << "id,depth,s1_card,zbar,z,f_best,action\n";
    out << std::setprecision(17);
    for (const BcNodeTraceEntry& e : trace)
        out << e.id << ',' << e.depth << ',' << e.s1_card << ',' << e.zbar << ',' << e.z
            << ',' << e.f_best << ',' << e.action << "\n";
}

inline void write_profile_csv(std::ostream& out,
                              const std::vector<ProfilePoint>& points) {
    out << "# format: " << kProfileCsvVersion << "\n";
    out << "algorithm,beta,rho\n";
    out << std::setprecision(17);
    for (const ProfilePoint& p : points)
        out << to_string(p.algorithm) << ',' << p.beta << ',' << p.rho << "\n";
}

namespace detail {
inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    return cells;
}
}  // namespace detail

inline std::vector<RunRecord> read_records_csv(std::istream& in) {
    std::vector<RunRecord> records;
    std::string line;
    bool saw_header = false;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (!saw_header) {  // column header row
            saw_header = true;
            continue;
        }
        auto cells = detail::split_csv_line(line);
        if (cells.size() != 10)
            throw std::runtime_error("records csv: bad row: " + line);
        RunRecord r;
        r.instance = cells[0];
        r.algorithm = algorithm_from_string(cells[1]);
        r.status = cells[2] == "optimal" ? SolveStatus::Optimal : SolveStatus::Limit;
        r.value = std::stod(cells[3]);
        r.bound = std::stod(cells[4]);
        r.nodes = std::stoull(cells[5]);
        r.subsolver_calls = std::stoull(cells[6]);
        r.oracle_calls = std::stoull(cells[7]);
        r.millis = std::stoll(cells[8]);
        r.seed = std::stoull(cells[9]);
        records.push_back(std::move(r));
    }
    return records;
}

inline void write_csv_file(const std::string& path, const auto& payload, auto writer) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    writer(out, payload);
}

}  // namespace asfm

#endif
