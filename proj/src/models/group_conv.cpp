#include "returnstat/models/group_conv.hpp"

#include <algorithm>
#include <cmath>

#include "returnstat/errors.hpp"

namespace returnstat {

namespace {

constexpr long long kEnumerationGuard = 1000000;

// Per-assignment state for incremental prefix probabilities: each of the
// |G|^{N-1} choices of leading base symbols carries its weight and the
// rolling window of the last N-1 base symbols.
class GroupWalker : public PrefixWalker {
public:
    explicit GroupWalker(const GroupConvModel& model, long long assignments)
        : model_(model) {
        const int w = model_.window() - 1;
        for (long long idx = 0; idx < assignments; ++idx) {
            State st;
            long long rest = idx;
            double prob = 1.0;
            Symbol sum = 0;
            for (int i = 0; i < w; ++i) {
                Symbol g = static_cast<Symbol>(rest % model_.alphabet_size());
                rest /= model_.alphabet_size();
                st.window.push_back(g);
                prob *= model_.base_prob(g);
                sum = model_.add(sum, g);
            }
            st.prob = prob;
            st.sum = sum;
            states_.push_back(std::move(st));
        }
    }

    double push(Symbol s) override {
        Frame frame;
        if (s < 0 || s >= model_.alphabet_size()) frame.invalid_symbol = true;
        if (frame.invalid_symbol || dead_ > 0) {
            if (frame.invalid_symbol) ++dead_;
            trace_.push_back(std::move(frame));
            return 0.0;
        }
        frame.applied = true;
        frame.forced.reserve(states_.size());
        double total = 0.0;
        for (State& st : states_) {
            Symbol y = model_.subtract(s, st.sum);
            frame.forced.push_back({st.prob, st.sum});
            st.prob *= model_.base_prob(y);
            Symbol oldest = st.window[cursor_ % st.window.size()];
            st.window[cursor_ % st.window.size()] = y;
            st.sum = model_.add(model_.subtract(st.sum, oldest), y);
            total += st.prob;
        }
        ++cursor_;
        trace_.push_back(std::move(frame));
        return total;
    }

    void pop() override {
        Frame frame = std::move(trace_.back());
        trace_.pop_back();
        if (frame.invalid_symbol) --dead_;
        if (!frame.applied) return;
        --cursor_;
        for (std::size_t i = 0; i < states_.size(); ++i) {
            State& st = states_[i];
            Symbol y = st.window[cursor_ % st.window.size()];
            Symbol oldest =
                model_.subtract(model_.add(frame.forced[i].sum, y), st.sum);
            st.window[cursor_ % st.window.size()] = oldest;
            st.prob = frame.forced[i].prob;
            st.sum = frame.forced[i].sum;
        }
    }

    std::size_t depth() const override { return trace_.size(); }

private:
    struct State {
        double prob;
        Symbol sum;
        std::vector<Symbol> window;
    };
    struct Saved {
        double prob;
        Symbol sum;
    };
    struct Frame {
        bool applied = false;
        bool invalid_symbol = false;
        std::vector<Saved> forced;
    };

    const GroupConvModel& model_;
    std::vector<State> states_;
    std::vector<Frame> trace_;
    std::size_t cursor_ = 0;
    int dead_ = 0;
};

}  // namespace

GroupConvModel::GroupConvModel(std::vector<int> moduli, std::vector<double> probs,
                               int window)
    : moduli_(std::move(moduli)), window_(window), probs_(std::move(probs)) {
    if (moduli_.empty()) throw ParameterError("group needs at least one cyclic factor");
    long long size = 1;
    for (int m : moduli_) {
        if (m < 2) throw ParameterError("cyclic moduli must be >= 2");
        size *= m;
        if (size > kEnumerationGuard) throw CapacityError("group too large");
    }
    group_size_ = static_cast<int>(size);
    if (window_ < 2) throw ParameterError("window N must be >= 2");
    if (static_cast<int>(probs_.size()) != group_size_)
        throw ParameterError("need one probability per group element");
    long double sum = 0.0L;
    for (double p : probs_) {
        if (!(p > 0.0)) throw ParameterError("group probabilities must be positive");
        sum += p;
    }
    if (std::fabs(static_cast<double>(sum - 1.0L)) > 1e-12)
        throw ParameterError("group probabilities must sum to 1 within 1e-12");

    free_count_ = 1;
    for (int i = 0; i + 1 < window_; ++i) {
        free_count_ *= group_size_;
        if (free_count_ > kEnumerationGuard)
            throw CapacityError("|G|^{N-1} exceeds the exact-enumeration guard 1e6");
    }

    cdf_.resize(probs_.size());
    long double cum = 0.0L;
    for (std::size_t i = 0; i < probs_.size(); ++i) {
        cum += probs_[i];
        cdf_[i] = static_cast<double>(cum);
    }
    cdf_.back() = 1.0;

    dominant_ = static_cast<Symbol>(
        std::max_element(probs_.begin(), probs_.end()) - probs_.begin());
    strict_dominant_ = true;
    double best_other = -1.0;
    for (Symbol g = 0; g < group_size_; ++g) {
        if (g == dominant_) continue;
        if (probs_[g] >= probs_[dominant_]) strict_dominant_ = false;
        if (probs_[g] > best_other) {
            best_other = probs_[g];
            runner_up_ = g;
        }
    }
    target_ = add(scale(window_ - 1, dominant_), runner_up_);
    lambda_min_ = *std::min_element(probs_.begin(), probs_.end());
}

Symbol GroupConvModel::add(Symbol a, Symbol b) const {
    Symbol out = 0, mult = 1;
    for (int m : moduli_) {
        Symbol ca = a % m, cb = b % m;
        a /= m;
        b /= m;
        out += ((ca + cb) % m) * mult;
        mult *= m;
    }
    return out;
}

Symbol GroupConvModel::subtract(Symbol a, Symbol b) const {
    Symbol out = 0, mult = 1;
    for (int m : moduli_) {
        Symbol ca = a % m, cb = b % m;
        a /= m;
        b /= m;
        out += ((ca - cb + m) % m) * mult;
        mult *= m;
    }
    return out;
}

Symbol GroupConvModel::scale(int k, Symbol g) const {
    Symbol out = 0, mult = 1;
    for (int m : moduli_) {
        Symbol c = g % m;
        g /= m;
        out += static_cast<Symbol>((static_cast<long long>(k) * c) % m) * mult;
        mult *= m;
    }
    return out;
}

double GroupConvModel::cylinder_prob(const Word& w) const {
    if (!admissible(w)) return 0.0;
    const int free_syms = window_ - 1;
    double total = 0.0;
    std::vector<Symbol> window(free_syms);
    for (long long idx = 0; idx < free_count_; ++idx) {
        long long rest = idx;
        double prob = 1.0;
        Symbol sum = 0;
        for (int i = 0; i < free_syms; ++i) {
            window[i] = static_cast<Symbol>(rest % group_size_);
            rest /= group_size_;
            prob *= probs_[window[i]];
            sum = add(sum, window[i]);
        }
        for (std::size_t j = 0; j < w.size(); ++j) {
            Symbol y = subtract(w[j], sum);
            prob *= probs_[y];
            Symbol oldest = window[j % free_syms];
            window[j % free_syms] = y;
            sum = add(subtract(sum, oldest), y);
        }
        total += prob;
    }
    return total;
}

std::unique_ptr<PrefixWalker> GroupConvModel::prefix_walker() const {
    return std::make_unique<GroupWalker>(*this, free_count_);
}

void GroupConvModel::sample_path(std::span<Symbol> out, RngStream& rng) const {
    if (out.empty()) return;
    std::vector<Symbol> base(out.size() + window_ - 1);
    for (Symbol& b : base) {
        double u = rng.next_unit();
        auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
        if (it == cdf_.end()) --it;
        b = static_cast<Symbol>(it - cdf_.begin());
    }
    Symbol sum = 0;
    for (int i = 0; i < window_; ++i) sum = add(sum, base[i]);
    out[0] = sum;
    for (std::size_t j = 1; j < out.size(); ++j) {
        sum = add(subtract(sum, base[j - 1]), base[j + window_ - 1]);
        out[j] = sum;
    }
}

MixingProfile GroupConvModel::mixing_profile() const {
    // |P0(A cap T^{-n-l}B) - P0(A)P0(B)| <= (1 + lambda^{-(N-1)}) P0(A)P0(B)
    // for short gaps; factorization is exact once l >= N-1.
    double psi0 = 1.0 + std::pow(lambda_min_, -static_cast<double>(window_ - 1));
    return {psi0, window_ - 1};
}

std::optional<double> GroupConvModel::gamma_bound() const {
    // Observed symbols at distance >= N-1 factorize exactly, so grouping
    // coordinates 0, N-1, 2(N-1), ... bounds P0[w] by pmax^{ceil(n/(N-1))}.
    double pmax = 0.0;
    for (Symbol g = 0; g < group_size_; ++g) {
        double pg = 0.0;
        std::vector<Symbol> w{g};
        pg = cylinder_prob(Word(w));
        pmax = std::max(pmax, pg);
    }
    if (!(pmax < 1.0)) return std::nullopt;
    return -std::log(pmax) / static_cast<double>(window_ - 1);
}

nlohmann::json GroupConvModel::describe() const {
    nlohmann::json j;
    j["model"] = "group";
    j["moduli"] = moduli_;
    j["group_size"] = group_size_;
    j["window"] = window_;
    j["probs"] = probs_;
    j["dominant"] = dominant_;
    j["strict_dominant"] = strict_dominant_;
    j["runner_up"] = runner_up_;
    j["target_symbol"] = target_;
    j["lambda_min"] = lambda_min_;
    return j;
}

std::vector<std::vector<Symbol>> GroupConvModel::sum_words(Symbol target) const {
    std::vector<std::vector<Symbol>> out;
    out.reserve(static_cast<std::size_t>(free_count_));
    for (long long idx = 0; idx < free_count_; ++idx) {
        std::vector<Symbol> word(window_);
        long long rest = idx;
        Symbol sum = 0;
        for (int i = 0; i + 1 < window_; ++i) {
            word[i] = static_cast<Symbol>(rest % group_size_);
            rest /= group_size_;
            sum = add(sum, word[i]);
        }
        word[window_ - 1] = subtract(target, sum);
        out.push_back(std::move(word));
    }
    return out;
}

}  // namespace returnstat
