#include "returnstat/models/bernoulli.hpp"

#include <algorithm>
#include <cmath>

#include "returnstat/errors.hpp"

namespace returnstat {

namespace {

class BernoulliWalker : public PrefixWalker {
public:
    explicit BernoulliWalker(const BernoulliModel& model) : model_(model) {}

    double push(Symbol s) override {
        prob_.push_back(prob_.back() * model_.symbol_prob(s));
        return prob_.back();
    }
    void pop() override { prob_.pop_back(); }
    std::size_t depth() const override { return prob_.size() - 1; }

private:
    const BernoulliModel& model_;
    std::vector<double> prob_{1.0};
};

}  // namespace

BernoulliModel::BernoulliModel(std::vector<double> probs) : probs_(std::move(probs)) {
    if (probs_.empty()) throw ParameterError("bernoulli needs at least one symbol");
    long double sum = 0.0L;
    for (double p : probs_) {
        if (!(p > 0.0)) throw ParameterError("bernoulli probabilities must be positive");
        sum += p;
    }
    if (std::fabs(static_cast<double>(sum - 1.0L)) > 1e-12)
        throw ParameterError("bernoulli probabilities must sum to 1 within 1e-12");
    cdf_.resize(probs_.size());
    long double cum = 0.0L;
    for (std::size_t i = 0; i < probs_.size(); ++i) {
        cum += probs_[i];
        cdf_[i] = static_cast<double>(cum);
    }
    cdf_.back() = 1.0;
}

BernoulliModel::BernoulliModel(GeometricTailTag, double q, int truncation)
    : countable_(true), q_(q), truncation_(truncation) {
    if (!(q > 0.0 && q < 1.0)) throw ParameterError("geometric tail q must be in (0,1)");
    if (truncation < 1) throw ParameterError("truncation must be >= 1");
}

BernoulliModel BernoulliModel::geometric_tail(double q, int truncation) {
    return BernoulliModel(GeometricTailTag{}, q, truncation);
}

int BernoulliModel::alphabet_size() const {
    return countable_ ? truncation_ : static_cast<int>(probs_.size());
}

double BernoulliModel::symbol_prob(Symbol a) const {
    if (a < 0) return 0.0;
    if (countable_) return (1.0 - q_) * std::pow(q_, static_cast<double>(a));
    return a < static_cast<Symbol>(probs_.size()) ? probs_[a] : 0.0;
}

double BernoulliModel::cylinder_prob(const Word& w) const {
    double p = 1.0;
    for (Symbol s : w.symbols()) p *= symbol_prob(s);
    return p;
}

std::unique_ptr<PrefixWalker> BernoulliModel::prefix_walker() const {
    return std::make_unique<BernoulliWalker>(*this);
}

Symbol BernoulliModel::sample_symbol(RngStream& rng) const {
    if (countable_) {
        // p_a = (1-q) q^a  <=>  a = floor(log(u)/log(q))
        double u = rng.next_unit_open();
        double a = std::floor(std::log(u) / std::log(q_));
        return static_cast<Symbol>(std::min(a, 2.0e9));
    }
    double u = rng.next_unit();
    auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
    if (it == cdf_.end()) --it;
    return static_cast<Symbol>(it - cdf_.begin());
}

void BernoulliModel::sample_path(std::span<Symbol> out, RngStream& rng) const {
    for (Symbol& s : out) s = sample_symbol(rng);
}

double BernoulliModel::inverse_jacobian(const Word& context) const {
    double p = symbol_prob(context[0]);
    if (p <= 0.0) throw DomainError("inverse Jacobian at a zero-measure symbol");
    return p;
}

std::optional<double> BernoulliModel::gamma_bound() const {
    double pmax = countable_ ? 1.0 - q_  // p_a decreases in a
                             : *std::max_element(probs_.begin(), probs_.end());
    return pmax < 1.0 ? std::optional<double>(-std::log(pmax)) : std::nullopt;
}

nlohmann::json BernoulliModel::describe() const {
    nlohmann::json j;
    j["model"] = "bernoulli";
    if (countable_) {
        j["geometric_q"] = q_;
        j["truncation"] = truncation_;
    } else {
        j["probs"] = probs_;
    }
    return j;
}

}  // namespace returnstat
