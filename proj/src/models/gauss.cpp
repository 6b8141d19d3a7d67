#include "returnstat/models/gauss.hpp"

#include <cmath>
#include <limits>

#include "returnstat/errors.hpp"

namespace returnstat {

namespace {

constexpr double kLn2 = 0.6931471805599453;
constexpr long kDigitCap = 2147483646;  // symbols are int32

// num/den as a double for arbitrarily large positive integers: shift each
// down to a 128-bit head and track the exponents through ldexp.
double exact_ratio(const mpz_class& num, const mpz_class& den) {
    if (num == 0) return 0.0;
    long nb = static_cast<long>(mpz_sizeinbase(num.get_mpz_t(), 2));
    long db = static_cast<long>(mpz_sizeinbase(den.get_mpz_t(), 2));
    long sn = nb > 128 ? nb - 128 : 0;
    long sd = db > 128 ? db - 128 : 0;
    mpz_class nh = num >> static_cast<unsigned long>(sn);
    mpz_class dh = den >> static_cast<unsigned long>(sd);
    return std::ldexp(nh.get_d() / dh.get_d(), static_cast<int>(sn - sd));
}

// mu_G of the interval between the fractions na/da and nb/db, evaluated as
// log1p((num-den)/den)/ln2 with exact integer num, den so that deep (nearly
// equal) endpoints lose no precision.
double mu_interval(const mpz_class& na, const mpz_class& da, const mpz_class& nb,
                   const mpz_class& db) {
    // order the endpoints: a < b iff na*db < nb*da
    mpz_class lhs = na * db, rhs = nb * da;
    const mpz_class *nu = &na, *du = &da, *nv = &nb, *dv = &db;
    if (lhs > rhs) {
        nu = &nb;
        du = &db;
        nv = &na;
        dv = &da;
    } else if (lhs == rhs) {
        return 0.0;
    }
    // (1+v)/(1+u) = ((nv+dv)*du) / ((nu+du)*dv)
    mpz_class num = (*nv + *dv) * (*du);
    mpz_class den = (*nu + *du) * (*dv);
    mpz_class diff = num - den;
    return std::log1p(exact_ratio(diff, den)) / kLn2;
}

double prefix_measure(const GaussConvergents& c) {
    if (c.depth == 0) return 1.0;
    return mu_interval(c.p_cur, c.q_cur, c.p_cur + c.p_prev, c.q_cur + c.q_prev);
}

// Measure of {x in prefix cylinder : next digit > bound}.
double tail_measure(const GaussConvergents& c, long bound) {
    mpz_class nb = c.p_cur * (bound + 1) + c.p_prev;
    mpz_class db = c.q_cur * (bound + 1) + c.q_prev;
    return mu_interval(c.p_cur, c.q_cur, nb, db);
}

class GaussWalker : public PrefixWalker {
public:
    GaussWalker() { stack_.push_back(GaussConvergents{}); }

    double push(Symbol s) override {
        if (s < 1) {
            stack_.push_back(stack_.back());
            zero_from_ = zero_from_ < 0 ? static_cast<int>(stack_.size()) - 1 : zero_from_;
            return 0.0;
        }
        GaussConvergents next = stack_.back();
        next.push(s);
        stack_.push_back(std::move(next));
        return zero_from_ >= 0 ? 0.0 : prefix_measure(stack_.back());
    }
    void pop() override {
        stack_.pop_back();
        if (zero_from_ >= 0 && static_cast<int>(stack_.size()) <= zero_from_) zero_from_ = -1;
    }
    std::size_t depth() const override { return stack_.size() - 1; }

private:
    std::vector<GaussConvergents> stack_;
    int zero_from_ = -1;
};

}  // namespace

void GaussConvergents::push(long digit) {
    mpz_class np = digit * p_cur + p_prev;
    mpz_class nq = digit * q_cur + q_prev;
    p_prev = p_cur;
    q_prev = q_cur;
    p_cur = std::move(np);
    q_cur = std::move(nq);
    ++depth;
}

double GaussConvergents::y() const {
    if (q_prev == 0) return 0.0;
    long nb = static_cast<long>(mpz_sizeinbase(q_prev.get_mpz_t(), 2));
    long db = static_cast<long>(mpz_sizeinbase(q_cur.get_mpz_t(), 2));
    long sn = nb > 128 ? nb - 128 : 0;
    long sd = db > 128 ? db - 128 : 0;
    mpz_class nh = q_prev >> static_cast<unsigned long>(sn);
    mpz_class dh = q_cur >> static_cast<unsigned long>(sd);
    return std::ldexp(nh.get_d() / dh.get_d(), static_cast<int>(sn - sd));
}

GaussModel::GaussModel(int exact_depth, int truncation)
    : exact_depth_(exact_depth), truncation_(truncation) {
    if (exact_depth_ < 1) throw ParameterError("exact_depth must be >= 1");
    if (truncation_ < 2) throw ParameterError("truncation must be >= 2");
}

double GaussModel::cylinder_prob(const Word& w) const {
    if (!admissible(w)) return 0.0;
    GaussConvergents c;
    for (Symbol s : w.symbols()) c.push(s);
    return prefix_measure(c);
}

std::unique_ptr<PrefixWalker> GaussModel::prefix_walker() const {
    return std::make_unique<GaussWalker>();
}

void GaussModel::sample_path(std::span<Symbol> out, RngStream& rng) const {
    GaussConvergents conv;
    double y = 0.0;
    bool kernel_mode = false;
    for (Symbol& slot : out) {
        double u = rng.next_unit_open();
        long k;
        if (!kernel_mode) {
            double mu = prefix_measure(conv);
            double target = (1.0 - u) * mu;
            double yy = conv.y();
            // kernel warm start, then exact adjustment against tail measures
            double guess = (1.0 + yy) / (1.0 - u) - 1.0 - yy;
            k = guess < 1.0 ? 1 : static_cast<long>(std::ceil(guess));
            k = std::min(std::max(k, 1L), kDigitCap);
            while (k < kDigitCap && tail_measure(conv, k) > target) ++k;
            while (k > 1 && tail_measure(conv, k - 1) <= target) --k;
            conv.push(k);
            if (conv.depth >= exact_depth_) {
                kernel_mode = true;
                y = conv.y();
            }
        } else {
            // P(k|y) has CDF 1 - (1+y)/(k+1+y); invert analytically.
            double guess = (1.0 + y) / (1.0 - u) - 1.0 - y;
            k = guess < 1.0 ? 1 : static_cast<long>(std::ceil(guess));
            if (k > kDigitCap) k = kDigitCap;
            auto cdf = [&](long j) { return 1.0 - (1.0 + y) / (static_cast<double>(j) + 1.0 + y); };
            while (k < kDigitCap && cdf(k) < u) ++k;
            while (k > 1 && cdf(k - 1) >= u) --k;
            y = 1.0 / (static_cast<double>(k) + y);
        }
        slot = static_cast<Symbol>(k);
    }
}

double GaussModel::cylinder_tail_prob(const std::vector<Symbol>& prefix,
                                      long bound) const {
    GaussConvergents c;
    for (Symbol s : prefix) {
        if (s < 1) throw ParameterError("continued-fraction digits are >= 1");
        c.push(s);
    }
    return tail_measure(c, bound);
}

double GaussModel::periodic_point_value(const Word& block) const {
    if (!admissible(block)) throw DomainError("invalid digit in periodic block");
    GaussConvergents c;
    for (Symbol s : block.symbols()) c.push(s);
    // x = g_w(x):  q_{r-1} x^2 + (q_r - p_{r-1}) x - p_r = 0, positive root.
    double a = c.q_prev.get_d();
    double b = c.q_cur.get_d() - c.p_prev.get_d();
    double cc = c.p_cur.get_d();
    if (a == 0.0) return cc / b;  // r = 0 cannot happen; keep the algebra total
    return 2.0 * cc / (b + std::sqrt(b * b + 4.0 * a * cc));
}

double GaussModel::inverse_jacobian(const Word& context) const {
    double x = periodic_point_value(context);
    std::vector<Symbol> rotated(context.symbols().begin() + 1, context.symbols().end());
    rotated.push_back(context[0]);
    double x_next = periodic_point_value(Word(std::move(rotated)));
    // J = p(x) / (|f'(x)| p(f(x))) with p the Gauss density and |f'| = 1/x^2.
    return x * x * (1.0 + x_next) / (1.0 + x);
}

nlohmann::json GaussModel::describe() const {
    nlohmann::json j;
    j["model"] = "gauss";
    j["exact_depth"] = exact_depth_;
    j["truncation"] = truncation_;
    return j;
}

}  // namespace returnstat
