#include <cctype>
#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qsv/classical.hpp"
#include "qsv/qcore.hpp"
#include "qsv/qintegral.hpp"
#include "qsv/quadrature.hpp"
#include "qsv/registry.hpp"
#include "qsv/report.hpp"

namespace {

std::vector<std::string> split_csv(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.push_back(item);
    return out;
}

std::vector<double> parse_doubles(const std::string& s) {
    std::vector<double> out;
    for (const auto& tok : split_csv(s)) out.push_back(std::stod(tok));
    return out;
}

int cmd_verify(const qsv::SuiteConfig& config) {
    qsv::Report rep;
    try {
        rep = qsv::run_verify(config);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    const auto summary = rep.summary();
    for (const auto& [k, v] : summary) std::cout << k << ": " << v << "\n";
    std::cout << "wall_time_s: " << rep.wall_time_s << "\n";
    if (!config.report_path.empty()) {
        try {
            qsv::write_report_atomic(config.report_path,
                                     config.report_format == qsv::ReportFormat::json
                                         ? qsv::report_json(rep)
                                         : qsv::report_csv(rep));
            std::cout << "report: " << config.report_path << "\n";
        } catch (const std::ios_base::failure& e) {
            std::cerr << "error: " << e.what() << "\n";
            return 3;
        }
    }
    return rep.all_ok() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"numerical verification harness for q-series expansions and beta-type integrals"};
    app.require_subcommand(1);

    // verify
    auto* verify = app.add_subcommand("verify", "run identity/integral suites over seeded parameter grids");
    std::string suites_arg = "all";
    std::string q_arg = "0.3,0.5,0.8";
    std::vector<std::string> tol_args;
    qsv::SuiteConfig config;
    verify->add_option("--suite", suites_arg, "comma-separated registry ids, or 'all'");
    verify->add_option("--q", q_arg, "comma-separated bases in (0,1)");
    verify->add_option("--samples", config.samples_per_identity, "samples per suite per q");
    verify->add_option("--seed", config.seed, "sampler seed");
    verify->add_option("--tol", tol_args, "tolerance override ID=value (repeatable)");
    verify->add_option("--report", config.report_path, "report output path");
    std::string format_arg = "json";
    verify->add_option("--format", format_arg, "report format: json or csv")
        ->check(CLI::IsMember({"json", "csv"}));

    // eval series
    auto* eval = app.add_subcommand("eval", "evaluate one series, q-integral, or classical integral");
    eval->require_subcommand(1);
    auto* eser = eval->add_subcommand("series", "evaluate a hypergeometric or q-hypergeometric series");
    std::string kind = "qphi", num_arg, den_arg;
    double ser_q = 0.5, ser_z = 0.0;
    eser->add_option("--kind", kind, "qphi or f")->check(CLI::IsMember({"qphi", "f"}));
    eser->add_option("--num", num_arg, "comma-separated numerator parameters")->required();
    eser->add_option("--den", den_arg, "comma-separated denominator parameters");
    eser->add_option("--q", ser_q, "base (qphi kind)");
    eser->add_option("--z", ser_z, "argument")->required();

    auto* eqint = eval->add_subcommand("qintegral", "evaluate a q-integral on the geometric grid");
    std::string qint_f = "one";
    double qint_alpha = 1.0, qint_beta = 1.0, qint_q = 0.5;
    eqint->add_option("--f", qint_f, "integrand: one, t, pow (t^{alpha-1}), qbeta")
        ->check(CLI::IsMember({"one", "t", "pow", "qbeta"}));
    eqint->add_option("--alpha", qint_alpha, "exponent parameter");
    eqint->add_option("--beta", qint_beta, "qbeta second parameter");
    eqint->add_option("--q", qint_q, "base");

    auto* eint = eval->add_subcommand("integral", "evaluate one beta-family integral by selector");
    std::string selector;
    qsv::BetaFamilyParams bp;
    eint->add_option("--selector", selector, "BETAF_1_1, SPEC2_1_2, SPEC3_1_3, BETAT_5_1, SPEC1_5_2, SPEC5_5_5, BETAT2_5_6, SPEC4_5_7")
        ->required();
    eint->add_option("--alpha", bp.alpha);
    eint->add_option("--beta", bp.beta);
    eint->add_option("--a", bp.a);
    eint->add_option("--c", bp.c);
    eint->add_option("--e", bp.e);
    eint->add_option("--m", bp.m);

    // list
    auto* list = app.add_subcommand("list", "print registry ids and descriptions");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (*verify) {
            config.suites = split_csv(suites_arg);
            for (auto& s : config.suites)
                if (s != "all")
                    for (auto& ch : s) ch = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
            config.q_values = parse_doubles(q_arg);
            config.report_format = format_arg == "csv" ? qsv::ReportFormat::csv : qsv::ReportFormat::json;
            for (const auto& t : tol_args) {
                const auto pos = t.find('=');
                if (pos == std::string::npos) {
                    std::cerr << "error: --tol expects ID=value\n";
                    return 2;
                }
                config.tol_overrides[t.substr(0, pos)] = std::stod(t.substr(pos + 1));
            }
            return cmd_verify(config);
        }
        if (*list) {
            (void)list;
            for (const auto& e : qsv::registry())
                std::printf("%-16s %s%s\n", e.id.c_str(), e.description.c_str(),
                            e.uses_q ? "" : " [classical]");
            return 0;
        }
        if (*eser) {
            qsv::SeriesSpec spec;
            spec.kind = kind == "qphi" ? qsv::SeriesKind::q_hypergeometric
                                       : qsv::SeriesKind::ordinary_hypergeometric;
            spec.numerator_params = parse_doubles(num_arg);
            spec.denominator_params = den_arg.empty() ? std::vector<double>{} : parse_doubles(den_arg);
            spec.base = ser_q;
            spec.argument = ser_z;
            const auto v = kind == "qphi" ? qsv::eval_series_ex(spec) : qsv::eval_hyper_ex(spec);
            std::printf("value = %.17g  (terms used: %ld)\n", v.value, v.terms_used);
            return 0;
        }
        if (*eqint) {
            const qsv::Base base{qint_q};
            qsv::QIntegrand f;
            if (qint_f == "one") {
                f = {[](double) { return 1.0; }, "one"};
            } else if (qint_f == "t") {
                f = {[](double t) { return t; }, "t"};
            } else if (qint_f == "pow") {
                const double e = qint_alpha - 1.0;
                f = {[e](double t) { return std::pow(t, e); }, "pow"};
            } else {
                const double beta = qint_beta, alpha = qint_alpha;
                f = {[base, alpha, beta](double t) {
                         return qsv::qpoch_infinite(base.q * t, base) /
                                qsv::qpoch_infinite(std::pow(base.q, beta) * t, base) *
                                std::pow(t, alpha - 1.0);
                     },
                     "qbeta"};
            }
            const auto v = qsv::q_integrate_ex(f, base);
            std::printf("value = %.17g  (grid points: %ld)\n", v.value, v.terms_used);
            return 0;
        }
        if (*eint) {
            qsv::IntegralId id;
            bool found = false;
            for (qsv::IntegralId cand :
                 {qsv::IntegralId::BETAF_1_1, qsv::IntegralId::SPEC2_1_2, qsv::IntegralId::SPEC3_1_3,
                  qsv::IntegralId::BETAT_5_1, qsv::IntegralId::SPEC1_5_2, qsv::IntegralId::SPEC5_5_5,
                  qsv::IntegralId::BETAT2_5_6, qsv::IntegralId::SPEC4_5_7}) {
                if (selector == qsv::to_string(cand)) {
                    id = cand;
                    found = true;
                }
            }
            if (!found) {
                std::cerr << "error: unknown selector '" << selector << "'\n";
                return 2;
            }
            const auto cs = qsv::make_beta_family_case(id, bp);
            const auto quad = qsv::integrate01(cs.integrand, 1e-10);
            std::printf("value = %.17g  (closed form: %.17g, error estimate: %.3g)\n",
                        cs.prefactor * quad.value, cs.closed_form, cs.prefactor * quad.error_estimate);
            return 0;
        }
    } catch (const qsv::DomainError& e) {
        std::cerr << "domain error: " << e.what() << "\n";
        return 1;
    } catch (const qsv::DivergenceError& e) {
        std::cerr << "divergence: " << e.what() << "\n";
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
