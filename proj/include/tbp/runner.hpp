#pragma once

/**
 * @file runner.hpp
 * @brief Task orchestration and JSON reports for the command-line tool.
 *
 * Tasks: search, hessian, tumanov, all. Reports carry "schema": 1; rationals are
 * serialized as strings. A run fails with the name of the first failing stage.
 */

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "tbp/hessian.hpp"
#include "tbp/search.hpp"
#include "tbp/tumanov.hpp"

namespace tbp {

using Json = nlohmann::json;

struct RunConfig {
    std::string task = "all";
    std::string potential = "g3";  // g2..g6, g10#, or "all" for the global proof
    std::string tumanov_case = "all";
    bool extended = false;
    std::optional<int> scale_log2;
    std::optional<int> epsilon0_log2;
    int thread_count = 0;  // 0: TBP_THREADS or 1
    std::optional<std::string> checkpoint_path;
    std::uint64_t checkpoint_every = 1000000;
    bool resume = false;
    std::optional<std::string> subregion;
    std::optional<std::string> report_path;
    std::uint64_t max_blocks = 0;
    std::uint64_t pd_budget = kDefaultPdBudget;
    bool confirm_long = false;
};

struct RunResult {
    int exit_code = 0;
    std::string failed_stage;  // empty on success
    Json report;
};

inline int resolve_threads(int requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("TBP_THREADS")) {
        const int n = std::atoi(env);
        if (n > 0) return n;
    }
    return 1;
}

/// Writes to a temporary sibling then renames, so readers never see a partial file.
inline void write_report_atomic(const std::string& path, const Json& j) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write report " + tmp);
        out << j.dump(2) << '\n';
        if (!out) throw std::runtime_error("error writing report " + tmp);
    }
    std::filesystem::rename(tmp, path);
}

inline std::string hessian_tag(const Potential& F) {
    if (F == Potential::g10_sharp()) return "g10#";
    return F.name();
}

// ---------------------------------------------------------------------------
// Stages

inline Json run_search_stage(const RunConfig& cfg, const Potential& F) {
    SearchParams p = SearchParams::defaults_for(F);
    if (cfg.scale_log2) p.scale_log2 = *cfg.scale_log2;
    if (cfg.epsilon0_log2) p.epsilon0_log2 = *cfg.epsilon0_log2;
    p.thread_count = resolve_threads(cfg.thread_count);
    p.checkpoint_path = cfg.checkpoint_path;
    p.checkpoint_every = cfg.checkpoint_every;
    p.resume = cfg.resume;
    p.subregion = cfg.subregion;
    p.max_blocks = cfg.max_blocks;
    Json j = {{"task", "search"}, {"potential", F.name()}, {"scale_log2", p.scale_log2}, {"epsilon0_log2", p.epsilon0_log2}, {"threads", p.thread_count}};
    if (p.subregion) j["subregion"] = *p.subregion;
    if (F.max_k() >= 10 && !p.subregion && !cfg.confirm_long) {
        j["status"] = "refused";
        j["message"] = "full search for " + F.name() + " takes days; pass --confirm-long or --subregion";
        return j;
    }
    const auto r = search(p);
    j["status"] = status_name(r.status);
    j["partition_size"] = r.partition_size;
    Json counts = Json::object();
    for (int i = 0; i < kVerdictCount; ++i) counts[verdict_name(static_cast<Verdict>(i))] = r.counts[static_cast<std::size_t>(i)];
    j["counts"] = counts;
    j["blocks_graded"] = r.blocks_graded;
    j["max_depth"] = r.max_depth;
    j["elapsed_seconds"] = r.elapsed_seconds;
    if (!r.message.empty()) j["message"] = r.message;
    return j;
}

inline Json run_hessian_stage(const Potential& F) {
    const std::string tag = hessian_tag(F);
    Json j = {{"task", "hessian"}, {"potential", F.name()}};
    try {
        const auto c = certify_local_minimum(tag);
        j["status"] = "success";
        j["lambda"] = c.lambda.get_str();
        j["epsilon"] = c.epsilon.get_str();
        j["f_bound"] = c.f_bound.get_str();
        j["final_margin"] = c.final_margin.get_str();
        Json parts = Json::array();
        for (const auto& p : c.parts)
            parts.push_back({{"k", p.k}, {"epsilon", p.eps.get_str()}, {"offset", p.offset.get_str()}, {"remainder", p.remainder.get_str()},
                             {"bound", p.bound.get_str()}});
        j["parts"] = parts;
    } catch (const CertificationFailure& e) {
        j["status"] = "failure";
        j["message"] = e.what();
    } catch (const std::invalid_argument& e) {  // no published eigenvalue bound
        j["status"] = "failure";
        j["message"] = e.what();
    }
    return j;
}

inline Json certified_function_json(const CertifiedFunction& f) {
    return {{"function", f.function},
            {"s_interval", {f.piece.s_lo.get_str(), f.piece.s_hi.get_str()}},
            {"expansion", {{"two_k", f.piece.two_k}, {"side", f.piece.side == Side::left ? "left" : "right"}}},
            {"wpd", f.wpd},
            {"wpd_pieces", f.pieces},
            {"pd", f.pd}};
}

inline Json run_tumanov_case(int id, bool extended, std::uint64_t pd_budget) {
    const auto r = verify_coefficient_positivity(id, extended && id == 3);
    Json j = {{"case", id}, {"extended", extended && id == 3}};
    Json items = Json::array();
    for (const auto& f : r.items) items.push_back(certified_function_json(f));
    j["certified"] = items;
    Json ends = Json::array();
    for (const auto& e : r.endpoints)
        ends.push_back({{"function", e.function}, {"s", e.s}, {"lower", e.value.lo().get_str()}, {"positive", e.positive}});
    j["endpoints"] = ends;
    j["functions"] = r.items.size();
    j["wpd_whole"] = r.wpd_count();
    j["wpd_certified"] = r.certified_count();
    j["pd"] = r.pd_count();
    j["failures"] = r.failures;
    bool ok = r.ok();
    if (id == 3) {
        const auto roots = case3_simple_roots(pd_budget);
        Json ivs = Json::array();
        for (const auto& i : roots.intervals)
            ivs.push_back({{"s_interval", {i.piece.s_lo.get_str(), i.piece.s_hi.get_str()}},
                           {"status", i.result.status == PdStatus::certified ? "certified" : "budget_exhausted"},
                           {"nodes", i.result.nodes},
                           {"expansions", i.result.expansions},
                           {"max_depth", i.result.max_depth}});
        j["simple_roots"] = ivs;
        ok = ok && roots.ok();
        const auto phi = case3_phi_at(6);
        Json psi = Json::array();
        for (const auto& c : phi) psi.push_back(Rational(c.lo() / phi.back().lo()).get_str());
        j["psi_s6_monic"] = psi;  // t^0 first
    }
    j["status"] = ok ? "success" : "failure";
    return j;
}

inline Json run_tumanov_stage(const RunConfig& cfg) {
    std::vector<int> ids;
    if (cfg.tumanov_case == "all")
        ids = {1, 2, 3};
    else
        ids = {std::stoi(cfg.tumanov_case)};
    for (int id : ids)
        if (id < 1 || id > 3) throw std::invalid_argument("tumanov case must be 1, 2, 3 or all");
    Json j = {{"task", "tumanov"}};
    Json cases = Json::array();
    bool ok = true;
    for (int id : ids) {
        cases.push_back(run_tumanov_case(id, cfg.extended, cfg.pd_budget));
        ok = ok && cases.back()["status"] == "success";
    }
    j["cases"] = cases;
    j["status"] = ok ? "success" : "failure";
    return j;
}

// ---------------------------------------------------------------------------

inline std::vector<Potential> selected_potentials(const std::string& name) {
    if (name == "all") return {Potential::g(3), Potential::g(4), Potential::g(5), Potential::g(6), Potential::g10_sharp()};
    return {Potential::parse(name)};
}

inline RunResult run(const RunConfig& cfg) {
    const auto t0 = std::chrono::steady_clock::now();
    RunResult res;
    Json stages = Json::array();
    auto record = [&](const std::string& stage, Json j) {
        if (res.failed_stage.empty() && j["status"] != "success") res.failed_stage = stage;
        stages.push_back(std::move(j));
    };
    if (cfg.task == "search") {
        for (const auto& F : selected_potentials(cfg.potential)) record("search:" + F.name(), run_search_stage(cfg, F));
    } else if (cfg.task == "hessian") {
        for (const auto& F : selected_potentials(cfg.potential)) record("hessian:" + F.name(), run_hessian_stage(F));
    } else if (cfg.task == "tumanov") {
        record("tumanov", run_tumanov_stage(cfg));
    } else if (cfg.task == "all") {
        for (const auto& F : selected_potentials(cfg.potential)) {
            record("search:" + F.name(), run_search_stage(cfg, F));
            record("hessian:" + F.name(), run_hessian_stage(F));
        }
        if (cfg.potential == "all") {
            RunConfig all_cases = cfg;
            all_cases.tumanov_case = "all";
            record("tumanov", run_tumanov_stage(all_cases));
        }
    } else {
        throw std::invalid_argument("unknown task: " + cfg.task);
    }

    if (stages.size() == 1 && cfg.task != "all") {
        res.report = stages[0];
    } else {
        res.report = {{"task", cfg.task}, {"potential", cfg.potential}, {"stages", stages}};
        res.report["status"] = res.failed_stage.empty() ? "success" : "failure";
    }
    res.report["schema"] = 1;
    if (!res.failed_stage.empty()) res.report["failed_stage"] = res.failed_stage;
    res.report["wall_seconds"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    res.exit_code = res.failed_stage.empty() ? 0 : 1;
    if (cfg.report_path) write_report_atomic(*cfg.report_path, res.report);
    return res;
}

}  // namespace tbp
