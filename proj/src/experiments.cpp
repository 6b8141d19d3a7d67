#include "returnstat/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <sstream>

#include "returnstat/errors.hpp"

namespace returnstat {

namespace {

std::string now_iso8601() {
    std::time_t t = std::time(nullptr);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%FT%TZ", std::gmtime(&t));
    return buf;
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::uint64_t sample_binomial(std::uint64_t n, double p, RngStream& rng) {
    if (p <= 0.0 || n == 0) return 0;
    if (p >= 1.0) return n;
    bool flipped = p > 0.5;
    double q = flipped ? 1.0 - p : p;
    std::uint64_t y;
    if (static_cast<double>(n) * q < 30.0) {
        // skip over failures with geometric jumps
        y = 0;
        std::uint64_t pos = 0;
        const double log1mq = std::log1p(-q);
        while (true) {
            double u = rng.next_unit_open();
            pos += 1 + static_cast<std::uint64_t>(std::floor(std::log(u) / log1mq));
            if (pos > n) break;
            ++y;
        }
    } else {
        // normal approximation is plenty for bootstrap error bars
        double u1 = rng.next_unit_open();
        double u2 = rng.next_unit_open();
        double z = std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
        double mean = static_cast<double>(n) * q;
        double val = mean + std::sqrt(mean * (1.0 - q)) * z;
        val = std::clamp(val, 0.0, static_cast<double>(n));
        y = static_cast<std::uint64_t>(val + 0.5);
    }
    return flipped ? n - y : y;
}

// Nonparametric bootstrap of the TV distance: resample the histogram
// multinomially, recompute TV against the predicted law.
double bootstrap_tv_se(const DistributionOnN& empirical, const DistributionOnN& predicted,
                       std::uint64_t m, int replicates, RngStream& rng) {
    const std::size_t bins = empirical.k_max() + 1;
    std::vector<double> probs(bins);
    for (std::size_t k = 0; k < bins; ++k) probs[k] = empirical.mass(k);

    std::vector<double> tvs;
    tvs.reserve(replicates);
    std::vector<double> resampled(bins);
    for (int rep = 0; rep < replicates; ++rep) {
        std::uint64_t remaining = m;
        double rest = 1.0;
        for (std::size_t k = 0; k < bins && remaining > 0; ++k) {
            double cond = rest > 0.0 ? std::min(1.0, probs[k] / rest) : 1.0;
            std::uint64_t c = (k + 1 == bins)
                                  ? remaining
                                  : sample_binomial(remaining, cond, rng);
            resampled[k] = static_cast<double>(c) / static_cast<double>(m);
            remaining -= c;
            rest -= probs[k];
        }
        std::size_t kmax = std::max(bins - 1, predicted.k_max());
        long double l1 = 0.0L;
        for (std::size_t k = 0; k <= kmax; ++k) {
            double e = k < bins ? resampled[k] : 0.0;
            l1 += std::fabs(e - predicted.mass(k));
        }
        tvs.push_back(0.5 * static_cast<double>(l1) + 0.5 * predicted.tail_mass());
        std::fill(resampled.begin(), resampled.end(), 0.0);
    }
    double mean = 0.0;
    for (double v : tvs) mean += v;
    mean /= tvs.size();
    double var = 0.0;
    for (double v : tvs) var += (v - mean) * (v - mean);
    var /= tvs.size() > 1 ? tvs.size() - 1 : 1;
    return std::sqrt(var);
}

nlohmann::json cell_to_json(const CellRecord& c) {
    nlohmann::json j;
    j["n"] = c.n;
    j["P_A"] = c.cylinder_p;
    j["N"] = c.trials;
    j["beta"] = c.beta_n;
    j["rho"] = c.rho_n;
    j["rho_pred"] = c.rho_predicted;
    j["pa_t"] = c.pa_t;
    j["pa_p"] = c.pa_p;
    if (c.empirical) j["empirical"] = c.empirical->to_json();
    j["tv"] = c.tv;
    j["tv_se"] = c.tv_se;
    j["M"] = c.samples;
    j["wall_time_s"] = c.wall_time_s;
    if (!c.error.empty()) j["error"] = c.error;
    return j;
}

CellRecord cell_from_json(const nlohmann::json& j) {
    CellRecord c;
    c.n = j.at("n").get<std::size_t>();
    c.cylinder_p = j.at("P_A").get<double>();
    c.trials = j.at("N").get<std::uint64_t>();
    c.beta_n = j.at("beta").get<double>();
    c.rho_n = j.at("rho").get<double>();
    c.rho_predicted = j.at("rho_pred").get<double>();
    c.pa_t = j.at("pa_t").get<double>();
    c.pa_p = j.at("pa_p").get<double>();
    if (j.contains("empirical")) c.empirical = DistributionOnN::from_json(j.at("empirical"));
    c.tv = j.at("tv").get<double>();
    c.tv_se = j.at("tv_se").get<double>();
    c.samples = j.at("M").get<std::uint64_t>();
    c.wall_time_s = j.at("wall_time_s").get<double>();
    if (j.contains("error")) c.error = j.at("error").get<std::string>();
    return c;
}

}  // namespace

bool ExperimentReport::any_cell_failed() const {
    return std::any_of(cells.begin(), cells.end(),
                       [](const CellRecord& c) { return !c.error.empty(); });
}

nlohmann::json ExperimentReport::to_json() const {
    nlohmann::json j;
    j["kind"] = kind;
    j["model"] = model;
    j["word"] = word;
    j["setup"] = {{"t", t}, {"d", d}};
    j["seed"] = seed;
    j["samples_per_n"] = samples_per_n;
    j["psi0"] = psi0;
    j["timestamp"] = timestamp;
    j["cells"] = nlohmann::json::array();
    for (const auto& c : cells) j["cells"].push_back(cell_to_json(c));
    j["extra"] = extra;
    return j;
}

ExperimentReport ExperimentReport::from_json(const nlohmann::json& j) {
    ExperimentReport r;
    r.kind = j.at("kind").get<std::string>();
    r.model = j.at("model");
    r.word = j.at("word").get<std::vector<Symbol>>();
    r.t = j.at("setup").at("t").get<double>();
    r.d = j.at("setup").at("d").get<std::vector<int>>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.samples_per_n = j.at("samples_per_n").get<std::uint64_t>();
    r.psi0 = j.at("psi0").get<double>();
    r.timestamp = j.at("timestamp").get<std::string>();
    for (const auto& c : j.at("cells")) r.cells.push_back(cell_from_json(c));
    r.extra = j.at("extra");
    return r;
}

std::string ExperimentReport::to_csv() const {
    std::ostringstream out;
    if (kind == "oscillate") {
        out << "n,conditional,class,limit,deviation\n";
        for (const auto& row : extra.at("rows")) {
            out << row.at("n").get<std::size_t>() << ','
                << format_double(row.at("conditional").get<double>()) << ','
                << row.at("class").get<int>() << ',';
            if (row.contains("limit")) out << format_double(row.at("limit").get<double>());
            out << ',';
            if (row.contains("deviation"))
                out << format_double(row.at("deviation").get<double>());
            out << '\n';
        }
        return out.str();
    }
    out << "n,P_A,N,beta,rho,rho_pred,tv,tv_se,M\n";
    for (const auto& c : cells) {
        out << c.n << ',' << format_double(c.cylinder_p) << ',' << c.trials << ','
            << format_double(c.beta_n) << ',' << format_double(c.rho_n) << ','
            << format_double(c.rho_predicted) << ',' << format_double(c.tv) << ','
            << format_double(c.tv_se) << ',' << c.samples << '\n';
    }
    return out.str();
}

std::string ExperimentReport::config_hash() const {
    nlohmann::json j = to_json();
    j.erase("timestamp");
    for (auto& c : j.at("cells")) c.erase("wall_time_s");
    std::string dump = j.dump();
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char ch : dump) {
        h ^= ch;
        h *= 1099511628211ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

ExperimentReport convergence_experiment(const ShiftModel& model, const Word& block,
                                        const ReturnSetup& setup,
                                        const ConvergenceOptions& opts) {
    if (opts.n_list.empty()) throw ParameterError("need at least one n");

    ExperimentReport report;
    report.kind = "converge";
    report.model = model.describe();
    report.word = block.symbols();
    report.t = setup.t;
    report.d = setup.d;
    report.seed = opts.seed;
    report.samples_per_n = opts.samples;
    report.psi0 = model.mixing_profile().psi0;
    report.timestamp = now_iso8601();

    double rho_hat = opts.rho_override ? *opts.rho_override
                                       : predicted_rho(model, block, setup);
    DistributionOnN predicted =
        DistributionOnN::polya_aeppli(setup.t * (1.0 - rho_hat), rho_hat, 1e-12);
    report.extra["rho_limit"] = rho_hat;
    report.extra["burn_in"] = model.rho_burn_in();

    for (std::size_t n : opts.n_list) {
        CellRecord cell;
        cell.n = n;
        cell.samples = opts.samples;
        cell.rho_predicted = rho_hat;
        cell.pa_t = setup.t * (1.0 - rho_hat);
        cell.pa_p = rho_hat;
        auto begin = std::chrono::steady_clock::now();
        try {
            Word ext = periodic_extension(block, n);
            cell.cylinder_p = model.cylinder_prob(ext);
            cell.trials = trials_count(model, ext, setup);
            cell.beta_n = beta(model, block, n);
            cell.rho_n = rho(model, ext, setup);
            auto counts = simulate_many(model, ext, setup, opts.samples, opts.seed,
                                        n, opts.workers);
            cell.empirical = empirical_distribution(counts);
            cell.tv = total_variation(*cell.empirical, predicted).value;
            RngStream boot = RngStream::derive(opts.seed, n, 0xb00757eeULL);
            cell.tv_se = bootstrap_tv_se(*cell.empirical, predicted, opts.samples,
                                         opts.bootstrap_replicates, boot);
        } catch (const Error& e) {
            cell.error = e.what();
        }
        cell.wall_time_s =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - begin)
                .count();
        report.cells.push_back(std::move(cell));
    }
    return report;
}

BetaCurve beta_curve(const ShiftModel& model, const Word& block, std::size_t n_from,
                     std::size_t n_to) {
    if (n_from < block.size() || n_to < n_from)
        throw ParameterError("invalid n range for beta curve");
    BetaCurve curve;
    for (std::size_t n = n_from; n <= n_to; ++n)
        curve.values.emplace_back(n, beta(model, block, n));
    if (model.has_closed_form_jacobian()) {
        double prod = 1.0;
        std::vector<Symbol> rot = block.symbols();
        for (std::size_t j = 0; j < block.size(); ++j) {
            prod *= model.inverse_jacobian(Word(rot));
            std::rotate(rot.begin(), rot.begin() + 1, rot.end());
        }
        curve.predicted_limit = prod;
    }
    return curve;
}

ExperimentReport oscillation_report(const GroupConvModel& model, std::size_t n_max,
                                    bool require_strict_dominant) {
    if (require_strict_dominant && !model.has_strict_dominant())
        throw ParameterError(
            "Theorem-7 limits need a strictly dominant base probability");
    if (n_max < 1) throw ParameterError("n_max must be >= 1");

    const int window = model.window();
    const Symbol target = model.target_symbol();
    const double ph = model.base_prob(model.dominant());
    const double pr = model.base_prob(model.runner_up());
    const double e25 = (pr + (window - 1) * ph) / window;
    const double e26 = window * ph * pr / ((window - 1) * pr + ph);

    auto words = model.sum_words(target);
    std::vector<double> weight(words.size());
    std::vector<std::vector<double>> prefix(words.size());
    double tmax = 0.0;
    for (std::size_t i = 0; i < words.size(); ++i) {
        double prod = 1.0;
        prefix[i].assign(window, 1.0);
        for (int b = 0; b < window; ++b) {
            prefix[i][b] = prod;  // product of the first b symbols
            prod *= model.base_prob(words[i][b]);
        }
        weight[i] = prod;
        tmax = std::max(tmax, prod);
    }

    // P0[s^n] = tmax^{a_n} * sum_i (w_i/tmax)^{a_n} prefix_i(b_n), with
    // n + N - 1 = a_n N + b_n; the normalized sums stay O(1) for large n.
    auto normalized = [&](std::size_t n) {
        std::size_t a = (n + window - 1) / window;
        std::size_t b = (n + window - 1) % window;
        double sum = 0.0;
        for (std::size_t i = 0; i < words.size(); ++i)
            sum += std::pow(weight[i] / tmax, static_cast<double>(a)) * prefix[i][b];
        return std::pair<double, std::size_t>(sum, a);
    };

    ExperimentReport report;
    report.kind = "oscillate";
    report.model = model.describe();
    report.word = {target};
    report.t = 1.0;
    report.d = {1};
    report.psi0 = model.mixing_profile().psi0;
    report.timestamp = now_iso8601();
    report.extra["e25"] = e25;
    report.extra["e26"] = e26;
    report.extra["strict_dominant"] = model.has_strict_dominant();
    report.extra["degenerate_equality"] = std::fabs(e25 - e26) < 1e-15;
    report.extra["rows"] = nlohmann::json::array();

    auto [cur, cur_a] = normalized(1);
    for (std::size_t n = 1; n <= n_max; ++n) {
        auto [next, next_a] = normalized(n + 1);
        double conditional =
            std::pow(tmax, static_cast<double>(next_a - cur_a)) * next / cur;
        int b_class = static_cast<int>((n + window - 1) % window);
        nlohmann::json row;
        row["n"] = n;
        row["conditional"] = conditional;
        row["class"] = b_class;
        if (b_class == 0) {
            row["limit"] = e25;
            row["deviation"] = std::fabs(conditional - e25);
        } else if (b_class == window - 1) {
            row["limit"] = e26;
            row["deviation"] = std::fabs(conditional - e26);
        }
        report.extra["rows"].push_back(std::move(row));
        cur = next;
        cur_a = next_a;
    }
    return report;
}

ExperimentReport poisson_limit_report(const SuccessorModel& model,
                                      const std::vector<std::size_t>& n_list, double t,
                                      std::uint64_t samples, std::uint64_t seed,
                                      int workers) {
    Word block(std::vector<Symbol>{1});
    ReturnSetup setup = ReturnSetup::conventional(t);
    ConvergenceOptions opts;
    opts.n_list = n_list;
    opts.samples = samples;
    opts.seed = seed;
    opts.workers = workers;
    opts.rho_override = 0.0;  // Theorem 8: beta_n -> 0, so the limit is Pois(t)
    ExperimentReport report = convergence_experiment(model, block, setup, opts);
    report.kind = "poisson-limit";
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& cell : report.cells) {
        if (!cell.error.empty()) continue;
        double bound = std::ldexp(1.0, -static_cast<int>(cell.n) - 1);
        rows.push_back({{"n", cell.n},
                        {"beta", cell.beta_n},
                        {"bound", bound},
                        {"within_bound", cell.beta_n <= bound}});
    }
    report.extra["beta_bounds"] = std::move(rows);
    return report;
}

nlohmann::json TightnessResult::to_json() const {
    nlohmann::json j;
    j["pass"] = pass;
    j["tail_cutoff"] = tail_cutoff;
    j["rows"] = nlohmann::json::array();
    for (const auto& r : rows)
        j["rows"].push_back({{"n", r.n},
                             {"mean", r.mean},
                             {"mean_bound", r.mean_bound},
                             {"mean_margin", r.mean_margin},
                             {"tail", r.tail},
                             {"mean_ok", r.mean_ok},
                             {"tail_ok", r.tail_ok}});
    return j;
}

TightnessResult tightness_diagnostic(const ExperimentReport& report) {
    const int ell = static_cast<int>(report.d.size());
    std::vector<const CellRecord*> usable;
    for (const auto& c : report.cells)
        if (c.error.empty() && c.empirical) usable.push_back(&c);
    if (usable.empty()) throw ParameterError("report holds no usable cells");

    // Tail cutoff from the largest-n cell: smallest b with mass[b,inf) <= 1%.
    const CellRecord* largest = usable.back();
    for (const auto* c : usable)
        if (c->n > largest->n) largest = c;
    std::size_t b_star = 0;
    while (largest->empirical->tail_from(b_star) > 0.01) ++b_star;

    TightnessResult out;
    out.tail_cutoff = b_star;
    out.pass = true;
    const double envelope = 1.0 + std::pow(1.0 + report.psi0, ell) * report.t;
    for (const auto* c : usable) {
        const DistributionOnN& emp = *c->empirical;
        double mean = emp.mean();
        double second = 0.0;
        for (std::size_t k = 1; k <= emp.k_max(); ++k)
            second += static_cast<double>(k) * static_cast<double>(k) * emp.mass(k);
        double var = std::max(0.0, second - mean * mean);
        double se = std::sqrt(var / static_cast<double>(c->samples));
        TightnessRow row;
        row.n = c->n;
        row.mean = mean;
        row.mean_bound = envelope + 5.0 * se;
        row.mean_margin = row.mean_bound - mean;
        row.mean_ok = mean <= row.mean_bound;
        row.tail = emp.tail_from(b_star);
        row.tail_ok = usable.size() == 1 || row.tail <= 0.05;
        out.pass = out.pass && row.mean_ok && row.tail_ok;
        out.rows.push_back(row);
    }
    return out;
}

}  // namespace returnstat
