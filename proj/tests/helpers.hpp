#ifndef RETURNSTAT_TESTS_HELPERS_HPP
#define RETURNSTAT_TESTS_HELPERS_HPP

#include <vector>

#include "returnstat/shift_model.hpp"

namespace returnstat::testing {

// P(E cap T^{-(|E|+gap)} F) by summing the exact cylinder probabilities of
// E g F over every gap filling g; finite alphabets only.
inline double joint_gap_prob(const ShiftModel& model, const Word& e, int gap,
                             const Word& f) {
    std::vector<Symbol> buffer = e.symbols();
    const Symbol lo = model.min_symbol();
    const Symbol hi = lo + model.alphabet_size();
    double total = 0.0;
    auto fill = [&](auto&& self, int remaining) -> void {
        if (remaining == 0) {
            std::vector<Symbol> whole = buffer;
            whole.insert(whole.end(), f.symbols().begin(), f.symbols().end());
            total += model.cylinder_prob(Word(whole));
            return;
        }
        for (Symbol a = lo; a < hi; ++a) {
            buffer.push_back(a);
            self(self, remaining - 1);
            buffer.pop_back();
        }
    };
    fill(fill, gap);
    return total;
}

// admissible random words drawn from the model's own stationary sampler
inline Word random_word(const ShiftModel& model, std::size_t length, RngStream& rng) {
    std::vector<Symbol> symbols(length);
    model.sample_path(symbols, rng);
    return Word(std::move(symbols));
}

struct DecayFit {
    double gamma;      // decay rate, positive when P(A_n) shrinks
    double log_c;      // intercept such that P(A_n) <= exp(log_c - gamma n)
    double max_resid;  // worst absolute residual of the linear fit
};

// least-squares fit of log P(A_n) = log_c - gamma n along a periodic point
inline DecayFit fit_cylinder_decay(const ShiftModel& model, const Word& block,
                                   std::size_t n_from, std::size_t n_to) {
    std::vector<double> xs, ys;
    for (std::size_t n = n_from; n <= n_to; ++n) {
        double p = model.cylinder_prob(periodic_extension(block, n));
        xs.push_back(static_cast<double>(n));
        ys.push_back(std::log(p));
    }
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= xs.size();
    my /= ys.size();
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
    }
    double slope = sxy / sxx;
    double intercept = my - slope * mx;
    double max_resid = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i)
        max_resid = std::max(max_resid,
                             std::fabs(ys[i] - (intercept + slope * xs[i])));
    return {-slope, intercept + max_resid, max_resid};
}

}  // namespace returnstat::testing

#endif
