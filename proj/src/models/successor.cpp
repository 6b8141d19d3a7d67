#include "returnstat/models/successor.hpp"

#include <cmath>
#include <numeric>

#include "returnstat/errors.hpp"

namespace returnstat {

namespace {

// DP column: mass[k-1] = P(prefix observed, current base symbol = k), k = 1..K.
using Column = std::vector<double>;

Column initial_column(int K) {
    Column v(K);
    for (int k = 1; k <= K; ++k) v[k - 1] = std::ldexp(1.0, -k);
    return v;
}

// One observed bit: b=1 forces k -> k+1; b=0 allows any next symbol m != k+1.
Column step(const Column& v, Symbol b, int K) {
    Column next(K, 0.0);
    if (b == 1) {
        for (int k = 1; k < K; ++k) next[k] = v[k - 1] * std::ldexp(1.0, -(k + 1));
    } else {
        double total = std::accumulate(v.begin(), v.end(), 0.0);
        for (int m = 1; m <= K; ++m) {
            double excluded = m >= 2 ? v[m - 2] : 0.0;
            next[m - 1] = (total - excluded) * std::ldexp(1.0, -m);
        }
    }
    return next;
}

class SuccessorWalker : public PrefixWalker {
public:
    explicit SuccessorWalker(int K) : K_(K) { columns_.push_back(initial_column(K)); }

    double push(Symbol s) override {
        if (s != 0 && s != 1) {
            columns_.emplace_back(K_, 0.0);
        } else {
            columns_.push_back(step(columns_.back(), s, K_));
        }
        const Column& c = columns_.back();
        return std::accumulate(c.begin(), c.end(), 0.0);
    }
    void pop() override { columns_.pop_back(); }
    std::size_t depth() const override { return columns_.size() - 1; }

private:
    int K_;
    std::vector<Column> columns_;
};

}  // namespace

SuccessorModel::SuccessorModel(int truncation) : truncation_(truncation) {
    if (truncation_ < 4) throw ParameterError("successor truncation must be >= 4");
}

double SuccessorModel::cylinder_prob(const Word& w) const {
    if (!admissible(w)) return 0.0;
    Column v = initial_column(truncation_);
    for (Symbol b : w.symbols()) v = step(v, b, truncation_);
    return std::accumulate(v.begin(), v.end(), 0.0);
}

std::unique_ptr<PrefixWalker> SuccessorModel::prefix_walker() const {
    return std::make_unique<SuccessorWalker>(truncation_);
}

void SuccessorModel::sample_path(std::span<Symbol> out, RngStream& rng) const {
    if (out.empty()) return;
    // base symbols are Geo(1/2) on {1,2,...}: count leading zero bits
    auto draw = [&rng]() -> int {
        std::uint64_t bits = rng.next_u64();
        return bits == 0 ? 65 : __builtin_clzll(bits) + 1;
    };
    int prev = draw();
    for (Symbol& s : out) {
        int cur = draw();
        s = cur == prev + 1 ? 1 : 0;
        prev = cur;
    }
}

std::optional<double> SuccessorModel::gamma_bound() const {
    // Coordinates two apart factorize exactly, and a single observed bit
    // has probability at most 5/6, so P0[w] <= (5/6)^{ceil(n/2)}.
    return 0.5 * std::log(6.0 / 5.0);
}

double SuccessorModel::truncation_error_bound(std::size_t n) const {
    return static_cast<double>(n + 1) * std::ldexp(1.0, -truncation_);
}

nlohmann::json SuccessorModel::describe() const {
    nlohmann::json j;
    j["model"] = "successor";
    j["truncation"] = truncation_;
    return j;
}

}  // namespace returnstat
