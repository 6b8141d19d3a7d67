#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "returnstat/distribution.hpp"
#include "returnstat/errors.hpp"
#include "returnstat/experiments.hpp"
#include "returnstat/model_config.hpp"
#include "returnstat/returns.hpp"

namespace rs = returnstat;
using nlohmann::json;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitDomain = 3;
constexpr int kExitCapacity = 4;

json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw rs::ParameterError("cannot open " + path);
    json j;
    in >> j;
    return j;
}

std::uint64_t resolve_seed(const json& config, std::uint64_t cli_seed, bool cli_set) {
    std::uint64_t seed = config.value("seed", 1ULL);
    if (const char* env = std::getenv("RETURNSTAT_SEED")) seed = std::strtoull(env, nullptr, 10);
    if (cli_set) seed = cli_seed;
    return seed;
}

void print_pmf_table(const rs::DistributionOnN& dist, std::size_t kmax) {
    std::printf("%4s  %-22s\n", "k", "pmf");
    for (std::size_t k = 0; k <= kmax; ++k) std::printf("%4zu  %.15g\n", k, dist.mass(k));
    std::printf("tail  %.15g\n", dist.tail_from(kmax + 1));
}

int write_report(const rs::ExperimentReport& report, const std::string& out_dir,
                 const std::string& format) {
    std::filesystem::create_directories(out_dir);
    std::string stem = report.kind + "_" + report.config_hash() + "_" +
                       std::to_string(report.seed);
    if (format != "csv") {
        std::ofstream out(out_dir + "/" + stem + ".json");
        out << report.to_json().dump(2) << '\n';
        std::cout << "wrote " << out_dir << "/" << stem << ".json\n";
    }
    if (format != "json") {
        std::ofstream out(out_dir + "/" + stem + ".csv");
        out << report.to_csv();
        std::cout << "wrote " << out_dir << "/" << stem << ".csv\n";
    }
    return report.any_cell_failed() ? kExitCapacity : 0;
}

int run_dist(const std::string& family, double t, double p, std::size_t kmax) {
    if (family == "pois") {
        print_pmf_table(rs::DistributionOnN::poisson(t), kmax);
        return 0;
    }
    if (family == "geo") {
        print_pmf_table(rs::DistributionOnN::geometric(p), kmax);
        return 0;
    }
    if (family == "cp") {
        rs::DistributionOnN nu = rs::DistributionOnN::geometric(p);
        print_pmf_table(rs::DistributionOnN::compound_poisson(t, nu, 1e-12), kmax);
        return 0;
    }
    rs::DistributionOnN pa = rs::DistributionOnN::polya_aeppli(t, p);
    print_pmf_table(pa, kmax);
    double worst = 0.0;
    for (double x : {0.1, 0.7, 1.3, 2.9}) {
        auto lhs = rs::characteristic_function(pa, x);
        auto geo = rs::characteristic_function(rs::DistributionOnN::geometric(p), x);
        auto rhs = std::exp(t * (geo - 1.0));
        worst = std::max(worst, std::abs(lhs - rhs));
    }
    std::printf("E9 characteristic-identity residual (max over x grid): %.3e\n", worst);
    return 0;
}

int run_cluster(const json& model_spec, const std::string& word_csv, std::size_t n,
                double t, const std::vector<int>& d) {
    auto model = rs::make_model(model_spec);
    rs::Word block = rs::Word::parse(word_csv);
    rs::ReturnSetup setup(t, d);
    rs::ClusterStats stats = rs::cluster_stats(*model, block, n, setup);
    std::printf("word        %s (n = %zu)\n",
                rs::periodic_extension(block, n).to_string().c_str(), n);
    std::printf("period pi   %zu\n", stats.period_r);
    std::printf("kappa       %lld\n", stats.kappa_value);
    std::printf("exponent a  %lld/%lld = %.17g\n", stats.exponent_a.num,
                stats.exponent_a.den, stats.exponent_a.value());
    std::printf("P(A_n)      %.17g\n", stats.cylinder_p);
    std::printf("N_n         %llu\n", static_cast<unsigned long long>(stats.trials));
    std::printf("beta_n      %.17g\n", stats.beta_n);
    std::printf("rho_n       %.17g\n", stats.rho_n);
    if (std::isfinite(stats.rho_predicted)) {
        std::printf("rho_limit   %.17g\n", stats.rho_predicted);
        std::printf("PA params   t(1-rho) = %.17g, rho = %.17g\n", stats.pa_t, stats.pa_p);
    } else {
        std::printf("rho_limit   (no closed-form inverse Jacobian)\n");
    }
    return 0;
}

int run_experiment(const std::string& mode, const json& config, std::uint64_t seed,
                   int workers, const std::string& out_dir, const std::string& format) {
    if (mode == "converge") {
        auto model = rs::make_model(config.at("model"));
        rs::Word block(config.at("word").get<std::vector<rs::Symbol>>());
        rs::ReturnSetup setup(config.value("t", 1.0),
                              config.value("d", std::vector<int>{1}));
        rs::ConvergenceOptions opts;
        opts.n_list = config.at("n_list").get<std::vector<std::size_t>>();
        opts.samples = config.value("samples", 10000ULL);
        opts.seed = seed;
        opts.workers = workers;
        if (config.contains("rho_override") && !config.at("rho_override").is_null())
            opts.rho_override = config.at("rho_override").get<double>();
        auto report = rs::convergence_experiment(*model, block, setup, opts);
        for (const auto& c : report.cells) {
            if (c.error.empty())
                std::printf("n=%zu  P=%.6g  N=%llu  beta=%.8g  rho=%.8g  tv=%.5f (se %.5f)\n",
                            c.n, c.cylinder_p, static_cast<unsigned long long>(c.trials),
                            c.beta_n, c.rho_n, c.tv, c.tv_se);
            else
                std::printf("n=%zu  FAILED: %s\n", c.n, c.error.c_str());
        }
        return write_report(report, out_dir, format);
    }
    if (mode == "oscillate") {
        auto model_ptr = rs::make_model(config.at("model"));
        auto* group = dynamic_cast<rs::GroupConvModel*>(model_ptr.get());
        if (!group) throw rs::ParameterError("oscillate needs a group model");
        auto report = rs::oscillation_report(*group, config.value("n_max", 40ULL),
                                             config.value("require_strict", false));
        std::printf("E25 limit %.12g, E26 limit %.12g%s\n",
                    report.extra.at("e25").get<double>(),
                    report.extra.at("e26").get<double>(),
                    report.extra.at("degenerate_equality").get<bool>()
                        ? "  (degenerate equality: no oscillation)"
                        : "");
        for (const auto& row : report.extra.at("rows")) {
            std::string dev;
            if (row.contains("deviation"))
                dev = "  dev=" + std::to_string(row.at("deviation").get<double>());
            std::printf("n=%-4zu cond=%.12g class=%d%s\n", row.at("n").get<std::size_t>(),
                        row.at("conditional").get<double>(), row.at("class").get<int>(),
                        dev.c_str());
        }
        return write_report(report, out_dir, format);
    }
    if (mode == "poisson-limit") {
        auto model_ptr = rs::make_model(config.at("model"));
        auto* successor = dynamic_cast<rs::SuccessorModel*>(model_ptr.get());
        if (!successor) throw rs::ParameterError("poisson-limit needs a successor model");
        auto report = rs::poisson_limit_report(
            *successor, config.at("n_list").get<std::vector<std::size_t>>(),
            config.value("t", 1.0), config.value("samples", 20000ULL), seed, workers);
        for (const auto& row : report.extra.at("beta_bounds"))
            std::printf("n=%zu  beta=%.10g  bound=%.10g  %s\n",
                        row.at("n").get<std::size_t>(), row.at("beta").get<double>(),
                        row.at("bound").get<double>(),
                        row.at("within_bound").get<bool>() ? "ok" : "VIOLATED");
        for (const auto& c : report.cells)
            if (c.error.empty())
                std::printf("n=%zu  tv(Pois)=%.5f (se %.5f)\n", c.n, c.tv, c.tv_se);
        return write_report(report, out_dir, format);
    }
    throw rs::ParameterError("unknown experiment mode: " + mode);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"shift-space return statistics: distributions, cluster "
                 "parameters and Monte Carlo experiments"};
    app.require_subcommand(1);

    // dist
    auto* dist = app.add_subcommand("dist", "print pmf tables for the exact families");
    dist->require_subcommand(1);
    double dist_t = 1.0, dist_p = 0.0;
    std::size_t dist_kmax = 20;
    std::string dist_family;
    for (const char* fam : {"pa", "pois", "geo", "cp"}) {
        auto* sub = dist->add_subcommand(fam);
        sub->add_option("--t", dist_t, "rate parameter");
        sub->add_option("--p", dist_p, "geometric success parameter");
        sub->add_option("--kmax", dist_kmax, "rows to print");
        sub->callback([&dist_family, fam]() { dist_family = fam; });
    }

    // cluster
    auto* cluster = app.add_subcommand("cluster", "cluster parameters of one cylinder");
    std::string cl_model_file, cl_model_inline, cl_word;
    std::size_t cl_n = 0;
    double cl_t = 1.0;
    std::vector<int> cl_d = {1};
    cluster->add_option("--model-config", cl_model_file, "model spec JSON file");
    cluster->add_option("--model-json", cl_model_inline, "inline model spec JSON");
    cluster->add_option("--word", cl_word, "periodic block, comma separated")->required();
    cluster->add_option("--n", cl_n, "cylinder length")->required();
    cluster->add_option("--t", cl_t, "intensity t");
    cluster->add_option("--d", cl_d, "return times d_1 < ... < d_ell")->delimiter(',');

    // experiment
    auto* experiment = app.add_subcommand("experiment", "run a reproduction experiment");
    experiment->require_subcommand(1);
    std::string ex_mode, ex_config, ex_out = "reports", ex_format = "both", ex_report;
    std::uint64_t ex_seed = 0;
    bool ex_seed_set = false;
    int ex_workers = 0;
    for (const char* mode : {"converge", "oscillate", "poisson-limit"}) {
        auto* sub = experiment->add_subcommand(mode);
        sub->add_option("--config", ex_config, "experiment config JSON")->required();
        sub->add_option("--out", ex_out, "output directory");
        sub->add_option("--format", ex_format, "json|csv|both");
        sub->add_option("--seed", ex_seed, "master seed")->each([&](const std::string&) {
            ex_seed_set = true;
        });
        sub->add_option("--workers", ex_workers, "worker threads (0 = all cores)");
        sub->callback([&ex_mode, mode]() { ex_mode = mode; });
    }
    auto* tight = experiment->add_subcommand("tightness");
    tight->add_option("--report", ex_report, "previously written report JSON")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    try {
        if (*dist) return run_dist(dist_family, dist_t, dist_p, dist_kmax);
        if (*cluster) {
            json spec;
            if (!cl_model_file.empty())
                spec = load_json_file(cl_model_file);
            else if (!cl_model_inline.empty())
                spec = json::parse(cl_model_inline);
            else
                throw rs::ParameterError("need --model-config or --model-json");
            return run_cluster(spec, cl_word, cl_n, cl_t, cl_d);
        }
        if (*experiment) {
            if (*tight) {
                auto report = rs::ExperimentReport::from_json(load_json_file(ex_report));
                auto result = rs::tightness_diagnostic(report);
                std::cout << result.to_json().dump(2) << '\n';
                std::printf("tightness: %s\n", result.pass ? "PASS" : "FAIL");
                return result.pass ? 0 : 1;
            }
            json config = load_json_file(ex_config);
            std::uint64_t seed = resolve_seed(config, ex_seed, ex_seed_set);
            if (ex_workers == 0) ex_workers = config.value("workers", 0);
            if (config.contains("output_dir") && ex_out == "reports")
                ex_out = config.at("output_dir").get<std::string>();
            return run_experiment(ex_mode, config, seed, ex_workers, ex_out, ex_format);
        }
    } catch (const rs::CapacityError& e) {
        std::cerr << "capacity error: " << e.what() << '\n';
        return kExitCapacity;
    } catch (const rs::DomainError& e) {
        std::cerr << "domain error: " << e.what() << '\n';
        return kExitDomain;
    } catch (const rs::UnsupportedError& e) {
        std::cerr << "unsupported: " << e.what() << '\n';
        return kExitDomain;
    } catch (const rs::ParameterError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const json::exception& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitUsage;
    }
    return 0;
}
