#ifndef ASFM_IO_HPP
#define ASFM_IO_HPP

#include <algorithm>
#include <fstream>
#include <istream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "instances.hpp"
#include "subset.hpp"

namespace asfm {

inline constexpr const char* kInstanceFormat = "asfm-instance-v1";

inline nlohmann::json instance_to_json(const Instance& inst) {
    nlohmann::json j;
    j["format"] = kInstanceFormat;
    j["type"] = to_string(inst.type);
    j["n"] = inst.n;
    j["m"] = inst.m;
    j["k"] = inst.k;
    j["gamma_lower"] = inst.gamma_lower;
    j["seed"] = inst.seed;
    nlohmann::json payload;
    switch (inst.type) {
        case InstanceType::Loc:
            payload["g"] = std::get<LocInstance>(inst.data).g;
            break;
        case InstanceType::Cov: {
            const auto& d = std::get<CovInstance>(inst.data);
            payload["a"] = d.a;
            payload["w"] = d.w;
            break;
        }
        case InstanceType::Inf: {
            const auto& d = std::get<InfInstance>(inst.data);
            payload["edges"] = d.edge;
            payload["p"] = d.p;
            break;
        }
        case InstanceType::Ca: {
            const auto& d = std::get<CaInstance>(inst.data);
            payload["w"] = d.w;
            payload["r"] = d.r;
            break;
        }
    }
    j["payload"] = payload;

    // overlay as (sorted 1-based element list, reward) pairs, stable order
    std::vector<std::pair<std::vector<int>, double>> entries;
    for (const auto& [subset, reward] : inst.overlay.rewards) {
        std::vector<int> elems = subset.elements();
        for (int& e : elems) ++e;
        entries.emplace_back(std::move(elems), reward);
    }
    std::sort(entries.begin(), entries.end());
    nlohmann::json overlay = nlohmann::json::array();
    for (const auto& [elems, reward] : entries)
        overlay.push_back({{"subset", elems}, {"reward", reward}});
    j["overlay"] = overlay;
    return j;
}

inline Instance instance_from_json(const nlohmann::json& j) {
    if (j.value("format", "") != kInstanceFormat)
        throw std::runtime_error("instance file: unknown format tag");
    Instance inst;
    inst.type = instance_type_from_string(j.at("type").get<std::string>());
    inst.n = j.at("n").get<int>();
    inst.m = j.at("m").get<int>();
    inst.k = j.at("k").get<int>();
    inst.gamma_lower = j.at("gamma_lower").get<double>();
    inst.seed = j.at("seed").get<std::uint64_t>();
    const auto& payload = j.at("payload");
    switch (inst.type) {
        case InstanceType::Loc: {
            LocInstance d;
            d.n = inst.n;
            d.m = inst.m;
            d.g = payload.at("g").get<std::vector<std::vector<double>>>();
            inst.data = std::move(d);
            break;
        }
        case InstanceType::Cov: {
            CovInstance d;
            d.n = inst.n;
            d.m = inst.m;
            d.a = payload.at("a").get<std::vector<std::vector<std::uint8_t>>>();
            d.w = payload.at("w").get<std::vector<double>>();
            inst.data = std::move(d);
            break;
        }
        case InstanceType::Inf: {
            InfInstance d;
            d.n = inst.n;
            d.m = inst.m;
            d.edge = payload.at("edges").get<std::vector<std::vector<std::uint8_t>>>();
            d.p = payload.at("p").get<std::vector<double>>();
            inst.data = std::move(d);
            break;
        }
        case InstanceType::Ca: {
            CaInstance d;
            d.n = inst.n;
            d.w = payload.at("w").get<std::vector<double>>();
            d.r = payload.at("r").get<std::vector<std::vector<double>>>();
            inst.data = std::move(d);
            break;
        }
    }
    for (const auto& entry : j.value("overlay", nlohmann::json::array())) {
        std::vector<int> elems = entry.at("subset").get<std::vector<int>>();
        for (int& e : elems) --e;
        inst.overlay.rewards.emplace(Subset::of(inst.n, elems),
                                     entry.at("reward").get<double>());
    }
    return inst;
}

inline void save_instance(const Instance& inst, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << instance_to_json(inst).dump(1) << "\n";
}

inline Instance load_instance(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read " + path);
    nlohmann::json j;
    in >> j;
    return instance_from_json(j);
}

/// Transaction rows parsed from a groceries-style CSV: one transaction per
/// line, comma-separated item names, quoted or bare.
struct TransactionData {
    std::vector<std::string> items;              // index -> name
    std::vector<std::vector<int>> transactions;  // 0-based item indices
};

inline TransactionData read_transactions(std::istream& in) {
    TransactionData data;
    std::unordered_map<std::string, int> index;
    std::string line;
    while (std::getline(in, line)) {
        std::vector<int> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            auto first = cell.find_first_not_of(" \t\r\"");
            auto last = cell.find_last_not_of(" \t\r\"");
            if (first == std::string::npos) continue;
            std::string name = cell.substr(first, last - first + 1);
            auto [it, inserted] = index.emplace(name, static_cast<int>(data.items.size()));
            if (inserted) data.items.push_back(name);
            row.push_back(it->second);
        }
        if (!row.empty()) data.transactions.push_back(std::move(row));
    }
    if (data.transactions.empty())
        throw std::runtime_error("transaction stream is empty");
    return data;
}

inline TransactionData read_transactions_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read " + path);
    return read_transactions(in);
}

/// Full CA pipeline: parse transactions, build the instance, and derive the
/// closed-form ratio lower bound for the budget.
inline Instance make_ca_instance(const TransactionData& data, int n, int k,
                                 std::uint64_t seed) {
    const int distinct = static_cast<int>(data.items.size());
    if (n == 0) n = distinct;
    if (distinct > n)
        throw std::runtime_error("transactions mention more than n distinct items");
    Instance inst;
    inst.type = InstanceType::Ca;
    inst.n = n;
    inst.m = 0;
    inst.k = k;
    inst.seed = seed;
    CaInstance ca = ingest_ca(data.transactions, n, seed);
    inst.gamma_lower = ca_gamma_lower(ca, k);
    inst.data = std::move(ca);
    return inst;
}

}  // namespace asfm

#endif
