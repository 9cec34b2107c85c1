#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <set>

#include <json.hpp>

#include "qsv/registry.hpp"
#include "qsv/report.hpp"
#include "qsv/sampler.hpp"

using namespace qsv;

TEST_CASE("sampler streams are deterministic and keyed") {
    SampleRng a(42, "SUITE", 3);
    SampleRng b(42, "SUITE", 3);
    for (int i = 0; i < 20; ++i) CHECK(a.next_u64() == b.next_u64());
    SampleRng c(42, "SUITE", 4);
    SampleRng d(42, "OTHER", 3);
    CHECK(SampleRng(42, "SUITE", 3).next_u64() != c.next_u64());
    CHECK(SampleRng(42, "SUITE", 3).next_u64() != d.next_u64());
    SampleRng e(42, "SUITE", 0);
    for (int i = 0; i < 200; ++i) {
        const double u = e.uniform(0.25, 0.75);
        CHECK(u >= 0.25);
        CHECK(u < 0.75);
        const long n = e.uniform_int(2, 5);
        CHECK(n >= 2);
        CHECK(n <= 5);
    }
}

TEST_CASE("registry ids are unique and cover every suite family") {
    std::set<std::string> ids;
    for (const auto& entry : registry()) ids.insert(entry.id);
    CHECK(ids.size() == registry().size());
    for (const char* required :
         {"Q_KUMMER", "ROGERS_6PHI5", "HEINE_II", "LEM23_3PHI2", "Q_GAUSS", "LEM23_M1_CASE",
          "CURIOUS_3_1", "TEN_PHI_9", "TERMINATING_3_2", "THEOREM_3_1", "QUADRATIC_3_4", "THEOREM_3_2",
          "THEOREM_3_3", "Q_BETA_4_3", "QBETAT_4_5", "QBETAT2_4_6", "BETAF_1_1", "SPEC2_1_2",
          "SPEC3_1_3", "BETAT_5_1", "SPEC1_5_2", "ERDELYI_5_4", "SPEC5_5_5", "BETAT2_5_6", "SPEC4_5_7",
          "HALFLINE", "Q_LIMIT_BRIDGE"})
        CHECK(ids.count(required) == 1);
}

TEST_CASE("a small verify run passes and is reproducible byte for byte") {
    SuiteConfig config;
    config.suites = {"Q_GAUSS", "BETAF_1_1"};
    config.q_values = {0.5};
    config.samples_per_identity = 5;
    config.seed = 42;
    const Report r1 = run_verify(config);
    const Report r2 = run_verify(config);
    CHECK(r1.all_ok());
    CHECK(results_payload(r1) == results_payload(r2));
    CHECK(r1.rows.size() == 10);
    for (const auto& row : r1.rows) CHECK(row.result.status == CheckStatus::pass);
}

TEST_CASE("a different seed produces different parameter draws") {
    SuiteConfig config;
    config.suites = {"Q_GAUSS"};
    config.q_values = {0.5};
    config.samples_per_identity = 3;
    config.seed = 42;
    SuiteConfig other = config;
    other.seed = 43;
    CHECK(results_payload(run_verify(config)) != results_payload(run_verify(other)));
}

TEST_CASE("report JSON carries the stable schema") {
    SuiteConfig config;
    config.suites = {"Q_GAUSS"};
    config.q_values = {0.5};
    config.samples_per_identity = 2;
    const Report rep = run_verify(config);
    const auto j = nlohmann::json::parse(report_json(rep));
    for (const char* key : {"version", "config", "results", "summary", "wall_time_s"})
        CHECK(j.contains(key));
    REQUIRE(j["results"].is_array());
    REQUIRE(j["results"].size() == 2);
    for (const char* key : {"id", "params", "lhs", "rhs", "abs_err", "rel_err", "status", "terms_used"})
        CHECK(j["results"][0].contains(key));
    // numbers are serialized as 17-significant-digit strings
    CHECK(j["results"][0]["lhs"].is_string());
    const auto summary = j["summary"];
    long total = 0;
    for (const auto& [k, v] : summary.items()) total += v.get<long>();
    CHECK(total == 2);
}

TEST_CASE("CSV report has one row per result") {
    SuiteConfig config;
    config.suites = {"Q_GAUSS"};
    config.q_values = {0.5};
    config.samples_per_identity = 3;
    const Report rep = run_verify(config);
    const std::string csv = report_csv(rep);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);  // header + 3 rows
    CHECK(csv.rfind("id,params,lhs,rhs,abs_err,rel_err,status,terms_used\n", 0) == 0);
}

TEST_CASE("atomic report write lands on disk") {
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "qsv_report_test";
    fs::create_directories(dir);
    const fs::path path = dir / "report.json";
    write_report_atomic(path.string(), "{}\n");
    std::ifstream f(path);
    std::string content((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
    CHECK(content == "{}\n");
    CHECK(!fs::exists(dir / "report.json.tmp"));
    fs::remove_all(dir);
}

TEST_CASE("config validation rejects bad selections") {
    SuiteConfig empty;
    empty.suites = {};
    CHECK_THROWS_AS(run_verify(empty), std::invalid_argument);

    SuiteConfig unknown;
    unknown.suites = {"NO_SUCH_SUITE"};
    CHECK_THROWS_AS(run_verify(unknown), std::invalid_argument);

    SuiteConfig badq;
    badq.suites = {"Q_GAUSS"};
    badq.q_values = {1.5};
    CHECK_THROWS_AS(run_verify(badq), std::invalid_argument);
}

TEST_CASE("format_double17 round-trips doubles") {
    for (double v : {1.0 / 3.0, 0.1, 123456.789, 1e-300, -2.5e17}) {
        const std::string s = format_double17(v);
        CHECK(std::stod(s) == v);
    }
}

TEST_CASE("tolerance overrides reach the checks") {
    SuiteConfig config;
    config.suites = {"Q_GAUSS"};
    config.q_values = {0.5};
    config.samples_per_identity = 2;
    config.tol_overrides["Q_GAUSS"] = 1e-30;  // impossible tolerance must fail
    const Report rep = run_verify(config);
    CHECK(!rep.all_ok());
}

TEST_CASE("verify over 'all' covers every registry id") {
    SuiteConfig config;
    config.suites = {"all"};
    config.q_values = {0.5};
    config.samples_per_identity = 1;
    const Report rep = run_verify(config);
    std::set<std::string> seen;
    for (const auto& row : rep.rows) seen.insert(row.id);
    CHECK(seen.size() == registry().size());
}

TEST_CASE("thread fan-out does not change the payload") {
    SuiteConfig config;
    config.suites = {"Q_GAUSS", "HEINE_II", "BETAF_1_1"};
    config.q_values = {0.5};
    config.samples_per_identity = 4;
    const std::string serial = results_payload(run_verify(config));
    setenv("QSV_THREADS", "4", 1);
    const std::string threaded = results_payload(run_verify(config));
    unsetenv("QSV_THREADS");
    CHECK(serial == threaded);
}
