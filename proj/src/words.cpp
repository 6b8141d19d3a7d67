#include "returnstat/words.hpp"

#include <sstream>

namespace returnstat {

std::string Word::to_string() const {
    std::ostringstream out;
    for (std::size_t i = 0; i < symbols_.size(); ++i) {
        if (i) out << ',';
        out << symbols_[i];
    }
    return out.str();
}

Word Word::parse(const std::string& comma_separated) {
    std::vector<Symbol> symbols;
    std::stringstream in(comma_separated);
    std::string tok;
    while (std::getline(in, tok, ',')) {
        if (tok.empty()) continue;
        symbols.push_back(static_cast<Symbol>(std::stol(tok)));
    }
    if (symbols.empty()) throw ParameterError("cannot parse empty word: '" + comma_separated + "'");
    return Word(std::move(symbols));
}

ReturnSetup::ReturnSetup(double t_, std::vector<int> d_) : t(t_), d(std::move(d_)) {
    if (!(t > 0.0)) throw ParameterError("t must be > 0");
    if (d.empty()) throw ParameterError("need at least one return time d_1");
    if (d.front() < 1) throw ParameterError("d_1 must be >= 1");
    for (std::size_t j = 1; j < d.size(); ++j)
        if (d[j] <= d[j - 1]) throw ParameterError("d must be strictly increasing");
}

Rational::Rational(long long n, long long d) : num(n), den(d) {
    if (den == 0) throw ParameterError("zero denominator");
    if (den < 0) {
        num = -num;
        den = -den;
    }
    long long g = std::gcd(num < 0 ? -num : num, den);
    if (g > 1) {
        num /= g;
        den /= g;
    }
}

Word periodic_extension(const Word& w, std::size_t n) {
    if (n == 0) throw ParameterError("extension length must be >= 1");
    std::vector<Symbol> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = w[i % w.size()];
    return Word(std::move(out));
}

std::size_t period(const Word& w) {
    // j is an overlap period iff n-j is a border; the KMP failure function
    // of the word gives the longest border directly.
    const auto& s = w.symbols();
    const std::size_t n = s.size();
    std::vector<std::size_t> fail(n, 0);
    for (std::size_t i = 1; i < n; ++i) {
        std::size_t k = fail[i - 1];
        while (k > 0 && s[i] != s[k]) k = fail[k - 1];
        if (s[i] == s[k]) ++k;
        fail[i] = k;
    }
    return n - fail[n - 1];
}

bool is_primitive(const Word& w) {
    const std::size_t n = w.size();
    for (std::size_t d = 1; d < n; ++d) {
        if (n % d != 0) continue;
        bool power = true;
        for (std::size_t i = d; i < n && power; ++i) power = w[i] == w[i - d];
        if (power) return false;
    }
    return true;
}

long long kappa(long long r, const ReturnSetup& setup) {
    if (r < 1) throw ParameterError("r must be >= 1");
    long long k = 1;
    for (int dj : setup.d) k = std::lcm(k, r / std::gcd(r, static_cast<long long>(dj)));
    return k;
}

Rational cluster_exponent(long long r, const ReturnSetup& setup) {
    long long sum_d = 0;
    for (int dj : setup.d) sum_d += dj;
    return Rational(kappa(r, setup) * sum_d, r);
}

}  // namespace returnstat
