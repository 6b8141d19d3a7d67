#ifndef RETURNSTAT_WORDS_HPP
#define RETURNSTAT_WORDS_HPP

#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "returnstat/errors.hpp"

namespace returnstat {

using Symbol = std::int32_t;

// A finite nonempty word over the model's symbol alphabet.
class Word {
public:
    Word() = default;
    explicit Word(std::vector<Symbol> symbols) : symbols_(std::move(symbols)) {
        if (symbols_.empty()) throw ParameterError("word must be nonempty");
    }

    std::size_t size() const { return symbols_.size(); }
    Symbol operator[](std::size_t i) const { return symbols_[i]; }
    const std::vector<Symbol>& symbols() const { return symbols_; }

    bool operator==(const Word& other) const = default;

    std::string to_string() const;
    static Word parse(const std::string& comma_separated);

private:
    std::vector<Symbol> symbols_;
};

// Experiment parameters: the fixed t > 0 and return times d_1 < ... < d_ell.
struct ReturnSetup {
    double t = 1.0;
    std::vector<int> d = {1};  // strictly increasing, d[0] >= 1

    ReturnSetup() = default;
    ReturnSetup(double t_, std::vector<int> d_);

    int ell() const { return static_cast<int>(d.size()); }
    static ReturnSetup conventional(double t_) { return ReturnSetup(t_, {1}); }
};

// Exact fraction; cluster exponents are integers in disguise but we keep
// the reduced ratio anyway.
struct Rational {
    long long num = 0;
    long long den = 1;

    Rational(long long n, long long d);
    double value() const { return static_cast<double>(num) / static_cast<double>(den); }
    bool is_integer() const { return den == 1; }
};

// Length-n word repeating w cyclically (w^{n/r} with r = |w|).
Word periodic_extension(const Word& w, std::size_t n);

// Smallest j in 1..n with symbols[k+j] == symbols[k] for all k < n-j.
std::size_t period(const Word& w);

// True iff w is not a power of a strictly shorter word; equivalently the
// infinite periodic extension of w has minimal period |w|.
bool is_primitive(const Word& w);

// kappa(r) = lcm over j of r / gcd(r, d_j).
long long kappa(long long r, const ReturnSetup& setup);

// a = kappa(r)/r * sum(d); always a positive integer.
Rational cluster_exponent(long long r, const ReturnSetup& setup);

}  // namespace returnstat

#endif
