#include "returnstat/models/gibbs_markov.hpp"

#include <algorithm>
#include <cmath>

#include "returnstat/errors.hpp"

namespace returnstat {

namespace {

constexpr double kPerronTol = 1e-14;
constexpr int kPerronMaxIter = 100000;

class MarkovWalker : public PrefixWalker {
public:
    explicit MarkovWalker(const GibbsMarkovModel& model) : model_(model) {}

    double push(Symbol s) override {
        double p;
        if (last_.empty()) {
            p = s >= 0 && s < model_.alphabet_size() ? model_.stationary()[s] : 0.0;
        } else {
            Symbol prev = last_.back();
            p = prob_.back();
            p *= (prev >= 0 && s >= 0 && s < model_.alphabet_size() &&
                  prev < model_.alphabet_size())
                     ? model_.transition(prev, s)
                     : 0.0;
        }
        last_.push_back(s);
        prob_.push_back(p);
        return p;
    }
    void pop() override {
        last_.pop_back();
        prob_.pop_back();
    }
    std::size_t depth() const override { return last_.size(); }

private:
    const GibbsMarkovModel& model_;
    std::vector<Symbol> last_;
    std::vector<double> prob_;
};

}  // namespace

GibbsMarkovModel::GibbsMarkovModel(std::vector<std::vector<int>> adjacency,
                                   std::vector<std::vector<double>> potential) {
    size_ = static_cast<int>(adjacency.size());
    if (size_ < 2) throw ParameterError("gibbs model needs at least 2 symbols");
    if (potential.size() != adjacency.size())
        throw ParameterError("potential and adjacency sizes differ");
    adj_.resize(static_cast<std::size_t>(size_) * size_);
    phi_.resize(adj_.size());
    for (int a = 0; a < size_; ++a) {
        if (static_cast<int>(adjacency[a].size()) != size_ ||
            static_cast<int>(potential[a].size()) != size_)
            throw ParameterError("adjacency/potential must be square");
        for (int b = 0; b < size_; ++b) {
            adj_[idx(a, b)] = adjacency[a][b] != 0;
            phi_[idx(a, b)] = potential[a][b];
        }
    }

    // No all-zero rows/columns, and primitivity (topological mixing).
    for (int a = 0; a < size_; ++a) {
        bool row = false, col = false;
        for (int b = 0; b < size_; ++b) {
            row |= adj_[idx(a, b)] != 0;
            col |= adj_[idx(b, a)] != 0;
        }
        if (!row || !col) throw ParameterError("adjacency has an all-zero row or column");
    }
    std::vector<int> reach = adj_;
    int exponent = 1;
    auto all_positive = [&]() {
        return std::all_of(reach.begin(), reach.end(), [](int v) { return v > 0; });
    };
    int limit = (size_ - 1) * (size_ - 1) + 1;
    while (!all_positive() && exponent < limit) {
        std::vector<int> next(reach.size(), 0);
        for (int a = 0; a < size_; ++a)
            for (int k = 0; k < size_; ++k) {
                if (!reach[idx(a, k)]) continue;
                for (int b = 0; b < size_; ++b)
                    if (adj_[idx(k, b)]) next[idx(a, b)] = 1;
            }
        reach = std::move(next);
        ++exponent;
    }
    if (!all_positive()) throw ParameterError("adjacency matrix is not primitive");

    solve_perron();
    compute_psi0();
}

void GibbsMarkovModel::solve_perron() {
    const std::size_t n = static_cast<std::size_t>(size_);
    std::vector<double> m(adj_.size());
    for (std::size_t i = 0; i < m.size(); ++i) m[i] = adj_[i] ? std::exp(phi_[i]) : 0.0;

    auto iterate = [&](bool transpose, std::vector<double>& v) -> double {
        v.assign(n, 1.0 / static_cast<double>(n));
        double lambda = 0.0;
        for (int it = 0; it < kPerronMaxIter; ++it) {
            std::vector<double> w(n, 0.0);
            for (std::size_t a = 0; a < n; ++a)
                for (std::size_t b = 0; b < n; ++b)
                    w[a] += (transpose ? m[b * n + a] : m[a * n + b]) * v[b];
            double norm = 0.0;
            for (double x : w) norm += x;
            for (double& x : w) x /= norm;
            double delta = 0.0;
            for (std::size_t a = 0; a < n; ++a) delta = std::max(delta, std::fabs(w[a] - v[a]));
            v = std::move(w);
            lambda = norm;
            if (delta < kPerronTol) return lambda;
        }
        throw ParameterError("Perron iteration did not converge to 1e-14");
    };

    lambda_ = iterate(false, h_);
    double lambda_left = iterate(true, nu_);
    if (std::fabs(lambda_ - lambda_left) > 1e-10 * std::max(1.0, lambda_))
        throw ParameterError("left/right Perron eigenvalues disagree");
    pressure_ = std::log(lambda_);

    q_.assign(n * n, 0.0);
    for (std::size_t a = 0; a < n; ++a) {
        double row = 0.0;
        for (std::size_t b = 0; b < n; ++b) {
            q_[a * n + b] = m[a * n + b] * h_[b] / (lambda_ * h_[a]);
            row += q_[a * n + b];
        }
        if (std::fabs(row - 1.0) > 1e-12)
            throw ParameterError("transition rows must sum to 1 within 1e-12");
        for (std::size_t b = 0; b < n; ++b) q_[a * n + b] /= row;
    }

    pi_.assign(n, 0.0);
    double total = 0.0;
    for (std::size_t a = 0; a < n; ++a) {
        pi_[a] = nu_[a] * h_[a];
        total += pi_[a];
    }
    for (double& x : pi_) x /= total;
    for (std::size_t b = 0; b < n; ++b) {
        double acc = 0.0;
        for (std::size_t a = 0; a < n; ++a) acc += pi_[a] * q_[a * n + b];
        if (std::fabs(acc - pi_[b]) > 1e-10)
            throw ParameterError("stationary law check pi Q = pi failed at 1e-10");
    }

    pi_cdf_.resize(n);
    double cum = 0.0;
    for (std::size_t a = 0; a < n; ++a) {
        cum += pi_[a];
        pi_cdf_[a] = cum;
    }
    pi_cdf_.back() = 1.0;
    q_cdf_.resize(n * n);
    for (std::size_t a = 0; a < n; ++a) {
        cum = 0.0;
        for (std::size_t b = 0; b < n; ++b) {
            cum += q_[a * n + b];
            q_cdf_[a * n + b] = cum;
        }
        q_cdf_[a * n + n - 1] = 1.0;
    }
}

void GibbsMarkovModel::compute_psi0() {
    // psi_m = max_{b,c} |Q^{m+1}(b,c)/pi_c - 1|; take the sup over gaps
    // until the geometric decay makes further terms irrelevant.
    const std::size_t n = static_cast<std::size_t>(size_);
    std::vector<double> power = q_;
    psi0_ = 0.0;
    for (int m = 0; m < 256; ++m) {
        double worst = 0.0;
        for (std::size_t b = 0; b < n; ++b)
            for (std::size_t c = 0; c < n; ++c)
                worst = std::max(worst, std::fabs(power[b * n + c] / pi_[c] - 1.0));
        psi0_ = std::max(psi0_, worst);
        if (worst < 1e-15) break;
        std::vector<double> next(n * n, 0.0);
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t k = 0; k < n; ++k)
                for (std::size_t b = 0; b < n; ++b)
                    next[a * n + b] += power[a * n + k] * q_[k * n + b];
        power = std::move(next);
    }
}

bool GibbsMarkovModel::admissible(const Word& w) const {
    if (!ShiftModel::admissible(w)) return false;
    for (std::size_t i = 0; i + 1 < w.size(); ++i)
        if (!adj_[idx(w[i], w[i + 1])]) return false;
    return true;
}

double GibbsMarkovModel::cylinder_prob(const Word& w) const {
    if (!admissible(w)) return 0.0;
    double p = pi_[w[0]];
    for (std::size_t i = 0; i + 1 < w.size(); ++i) p *= q_[idx(w[i], w[i + 1])];
    return p;
}

std::unique_ptr<PrefixWalker> GibbsMarkovModel::prefix_walker() const {
    return std::make_unique<MarkovWalker>(*this);
}

void GibbsMarkovModel::sample_path(std::span<Symbol> out, RngStream& rng) const {
    if (out.empty()) return;
    const std::size_t n = static_cast<std::size_t>(size_);
    double u = rng.next_unit();
    out[0] = static_cast<Symbol>(
        std::upper_bound(pi_cdf_.begin(), pi_cdf_.end(), u) - pi_cdf_.begin());
    if (out[0] >= size_) out[0] = size_ - 1;
    for (std::size_t i = 1; i < out.size(); ++i) {
        const double* row = q_cdf_.data() + static_cast<std::size_t>(out[i - 1]) * n;
        u = rng.next_unit();
        std::size_t b = 0;
        while (b + 1 < n && row[b] <= u) ++b;
        out[i] = static_cast<Symbol>(b);
    }
}

double GibbsMarkovModel::inverse_jacobian(const Word& context) const {
    Symbol a = context[0];
    Symbol b = context.size() > 1 ? context[1] : context[0];
    if (a < 0 || a >= size_ || b < 0 || b >= size_ || !adj_[idx(a, b)])
        throw DomainError("inverse Jacobian at an inadmissible transition");
    // J(w) = pi_{w0} Q(w0 -> w1) / pi_{w1} = e^{phi - P} u_{w0}/u_{w1},
    // u_a = pi_a/h_a being the transfer-operator eigenfunction.
    return pi_[a] * q_[idx(a, b)] / pi_[b];
}

std::optional<double> GibbsMarkovModel::gamma_bound() const {
    double qmax = 0.0;
    for (double v : q_) qmax = std::max(qmax, v);
    return qmax < 1.0 ? std::optional<double>(-std::log(qmax)) : std::nullopt;
}

nlohmann::json GibbsMarkovModel::describe() const {
    nlohmann::json j;
    j["model"] = "gibbs";
    j["alphabet"] = size_;
    j["pressure"] = pressure_;
    j["lambda"] = lambda_;
    j["right_eigenvector"] = h_;
    j["left_eigenvector"] = nu_;
    j["stationary"] = pi_;
    j["psi0"] = psi0_;
    return j;
}

}  // namespace returnstat
