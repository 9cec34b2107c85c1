#pragma once

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "qsv/registry.hpp"

namespace qsv {

inline constexpr const char* kToolVersion = "1.0.0";

/// Formats a double as a decimal string with 17 significant digits, enough
/// to round-trip the exact binary value.
inline std::string format_double17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

enum class ReportFormat { json, csv };

struct SuiteConfig {
    std::vector<std::string> suites;  // registry ids, or the single entry "all"
    std::vector<double> q_values{0.3, 0.5, 0.8};
    std::uint64_t seed = 42;
    int samples_per_identity = 20;
    std::map<std::string, double> tol_overrides;
    std::string report_path;
    ReportFormat report_format = ReportFormat::json;
    TruncationPolicy policy = kDefaultPolicy;

    void validate() const {
        if (suites.empty()) throw std::invalid_argument("config: empty suite selection");
        if (samples_per_identity < 1) throw std::invalid_argument("config: samples_per_identity must be >= 1");
        for (double q : q_values)
            if (!(q > 0.0 && q < 1.0)) throw std::invalid_argument("config: q values must lie in (0,1)");
        for (const auto& s : suites)
            if (s != "all" && find_registry_entry(s) == nullptr)
                throw std::invalid_argument("config: unknown suite id '" + s + "'");
    }

    std::vector<const RegistryEntry*> selected_entries() const {
        std::vector<const RegistryEntry*> out;
        if (suites.size() == 1 && suites[0] == "all") {
            for (const auto& e : registry()) out.push_back(&e);
            return out;
        }
        for (const auto& s : suites) out.push_back(find_registry_entry(s));
        return out;
    }
};

struct ResultRow {
    std::string id;
    ParamMap params;
    CheckResult result;
};

struct Report {
    std::string version = kToolVersion;
    SuiteConfig config;
    std::vector<ResultRow> rows;
    double wall_time_s = 0.0;

    std::map<std::string, long> summary() const {
        std::map<std::string, long> s{{"pass", 0}, {"fail", 0}, {"skipped-pole", 0}, {"diverged", 0}};
        for (const auto& row : rows) s[to_string(row.result.status)] += 1;
        return s;
    }

    bool all_ok() const {
        const auto s = summary();
        return s.at("fail") == 0 && s.at("diverged") == 0;
    }
};

namespace detail {

inline nlohmann::ordered_json result_rows_json(const Report& rep) {
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (const auto& row : rep.rows) {
        nlohmann::ordered_json jr;
        jr["id"] = row.id;
        nlohmann::ordered_json params;
        for (const auto& [k, v] : row.params) params[k] = format_double17(v);
        jr["params"] = params;
        jr["lhs"] = format_double17(row.result.lhs);
        jr["rhs"] = format_double17(row.result.rhs);
        jr["abs_err"] = format_double17(row.result.abs_err);
        jr["rel_err"] = format_double17(row.result.rel_err);
        jr["status"] = to_string(row.result.status);
        jr["terms_used"] = row.result.terms_used;
        rows.push_back(std::move(jr));
    }
    return rows;
}

}  // namespace detail

/// The deterministic part of a report: results and summary, excluding the
/// wall time. Two runs with the same config and seed must produce identical
/// payload bytes.
inline std::string results_payload(const Report& rep) {
    nlohmann::ordered_json j;
    j["results"] = detail::result_rows_json(rep);
    j["summary"] = rep.summary();
    return j.dump();
}

inline std::string report_json(const Report& rep) {
    nlohmann::ordered_json j;
    j["version"] = rep.version;
    nlohmann::ordered_json cfg;
    cfg["suites"] = rep.config.suites;
    nlohmann::ordered_json qv = nlohmann::ordered_json::array();
    for (double q : rep.config.q_values) qv.push_back(format_double17(q));
    cfg["q_values"] = qv;
    cfg["seed"] = rep.config.seed;
    cfg["samples_per_identity"] = rep.config.samples_per_identity;
    nlohmann::ordered_json tols;
    for (const auto& [k, v] : rep.config.tol_overrides) tols[k] = format_double17(v);
    cfg["tol_overrides"] = tols;
    cfg["report_format"] = rep.config.report_format == ReportFormat::json ? "json" : "csv";
    j["config"] = cfg;
    j["results"] = detail::result_rows_json(rep);
    j["summary"] = rep.summary();
    j["wall_time_s"] = rep.wall_time_s;
    return j.dump(2) + "\n";
}

inline std::string report_csv(const Report& rep) {
    std::string out = "id,params,lhs,rhs,abs_err,rel_err,status,terms_used\n";
    for (const auto& row : rep.rows) {
        std::string params;
        for (const auto& [k, v] : row.params) {
            if (!params.empty()) params += ';';
            params += k + "=" + format_double17(v);
        }
        out += row.id + ",\"" + params + "\"," + format_double17(row.result.lhs) + "," +
               format_double17(row.result.rhs) + "," + format_double17(row.result.abs_err) + "," +
               format_double17(row.result.rel_err) + "," + to_string(row.result.status) + "," +
               std::to_string(row.result.terms_used) + "\n";
    }
    return out;
}

/// Writes via a temporary file in the target directory followed by a rename.
inline void write_report_atomic(const std::string& path, const std::string& content) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    const fs::path tmp = target.parent_path() / (target.filename().string() + ".tmp");
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw std::ios_base::failure("cannot open " + tmp.string() + " for writing");
        f << content;
        if (!f.good()) throw std::ios_base::failure("short write to " + tmp.string());
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) throw std::ios_base::failure("cannot rename report into place: " + ec.message());
}

inline int report_threads() {
    if (const char* env = std::getenv("QSV_THREADS")) {
        const int n = std::atoi(env);
        if (n >= 1) return n;
    }
    return 1;
}

/// Runs every selected suite over the q grid and sample indices. Work may be
/// dispatched across threads (capped by QSV_THREADS) but results land in a
/// fixed slot per task, so row order and payload bytes never depend on the
/// schedule.
inline Report run_verify(const SuiteConfig& config) {
    config.validate();
    const auto t0 = std::chrono::steady_clock::now();
    Report rep;
    rep.config = config;

    struct Task {
        const RegistryEntry* entry;
        double q;
        std::uint64_t index;
        double tol;
    };
    std::vector<Task> tasks;
    for (const RegistryEntry* e : config.selected_entries()) {
        double tol = e->default_tol;
        if (auto it = config.tol_overrides.find(e->id); it != config.tol_overrides.end()) tol = it->second;
        const std::vector<double> qs = e->uses_q ? config.q_values : std::vector<double>{0.5};
        for (double q : qs)
            for (int i = 0; i < config.samples_per_identity; ++i)
                tasks.push_back({e, q, static_cast<std::uint64_t>(i), tol});
    }

    rep.rows.resize(tasks.size());
    const int nthreads = std::min<int>(report_threads(), static_cast<int>(tasks.size()) > 0 ? static_cast<int>(tasks.size()) : 1);
    auto work = [&](int tid) {
        for (std::size_t i = tid; i < tasks.size(); i += nthreads) {
            const Task& t = tasks[i];
            auto [params, result] = t.entry->run(config.seed, t.index, t.q, t.tol, config.policy);
            rep.rows[i] = ResultRow{t.entry->id, std::move(params), std::move(result)};
        }
    };
    if (nthreads <= 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < nthreads; ++t) pool.emplace_back(work, t);
        for (auto& th : pool) th.join();
    }

    rep.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rep;
}

}  // namespace qsv
