#include <doctest.h>

#include <cmath>
#include <complex>

#include "returnstat/distribution.hpp"

using namespace returnstat;

namespace {

// brute-force convolution power oracle: (nu*)^j on {0..cap}, independent
// of the library path
std::vector<double> conv_power_oracle(const std::vector<double>& nu, int j,
                                      std::size_t cap) {
    std::vector<double> acc(cap + 1, 0.0);
    acc[0] = 1.0;
    for (int rep = 0; rep < j; ++rep) {
        std::vector<double> next(cap + 1, 0.0);
        for (std::size_t a = 0; a <= cap; ++a)
            for (std::size_t b = 0; a + b <= cap && b < nu.size(); ++b)
                next[a + b] += acc[a] * nu[b];
        acc = std::move(next);
    }
    return acc;
}

}  // namespace

TEST_CASE("poisson pmf closed form") {
    CHECK(poisson_pmf(1.0, 0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-14));
    CHECK(poisson_pmf(1.0, 1) == doctest::Approx(std::exp(-1.0)).epsilon(1e-14));
    CHECK(poisson_pmf(2.0, 3) ==
          doctest::Approx(std::exp(-2.0) * 8.0 / 6.0).epsilon(1e-14));
    // log-space branch agrees with the direct recurrence
    double direct = std::exp(-3.0);
    for (int i = 1; i <= 45; ++i) direct *= 3.0 / i;
    CHECK(poisson_pmf(3.0, 45) == doctest::Approx(direct).epsilon(1e-12));
    CHECK_THROWS_AS(poisson_pmf(0.0, 1), ParameterError);
    CHECK_THROWS_AS(poisson_pmf(-1.0, 1), ParameterError);
}

TEST_CASE("geometric pmf has support on the positive integers") {
    CHECK(geometric_pmf(0.5, 1) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(geometric_pmf(0.3, 2) == doctest::Approx(0.21).epsilon(1e-15));
    CHECK(geometric_pmf(0.3, 0) == 0.0);
    CHECK(geometric_pmf(0.0, 1) == 1.0);
    CHECK(geometric_pmf(0.0, 2) == 0.0);
    CHECK_THROWS_AS(geometric_pmf(1.0, 1), ParameterError);
    CHECK_THROWS_AS(geometric_pmf(-0.1, 1), ParameterError);
}

TEST_CASE("convolution identities") {
    auto nu = DistributionOnN::geometric(0.4);
    auto delta0 = DistributionOnN::point_mass(0);
    auto conv = convolve(delta0, nu);
    for (std::size_t k = 0; k <= nu.k_max(); ++k)
        CHECK(conv.mass(k) == doctest::Approx(nu.mass(k)).epsilon(1e-14));

    auto geo0 = DistributionOnN::geometric(0.0);  // a point mass at 1
    auto twice = convolve(geo0, geo0);
    CHECK(twice.mass(2) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(twice.mass(1) == 0.0);

    auto coin = DistributionOnN({0.5, 0.5}, 0.0, DistKind::generic);
    auto pair = convolve(coin, coin);
    CHECK(pair.mass(0) == doctest::Approx(0.25));
    CHECK(pair.mass(1) == doctest::Approx(0.5));
    CHECK(pair.mass(2) == doctest::Approx(0.25));
}

TEST_CASE("compound poisson pmf") {
    auto delta1 = DistributionOnN::point_mass(1);
    CHECK(compound_poisson_pmf(1.0, delta1, 2, 1e-12) ==
          doctest::Approx(poisson_pmf(1.0, 2)).epsilon(1e-10));

    auto geo = DistributionOnN::geometric(0.5);
    CHECK(compound_poisson_pmf(2.0, geo, 0, 1e-13) ==
          doctest::Approx(std::exp(-2.0)).epsilon(1e-10));
    CHECK(compound_poisson_pmf(1.0, geo, 1, 1e-12) ==
          doctest::Approx(0.5 * std::exp(-1.0)).epsilon(1e-10));
    CHECK_THROWS_AS(compound_poisson_pmf(1.0, geo, 1, 0.0), ParameterError);

    // against the independent convolution-power oracle
    std::vector<double> nu_masses{0.0, 0.6, 0.3, 0.1};
    auto nu = DistributionOnN(nu_masses, 0.0, DistKind::generic);
    for (std::uint64_t k = 0; k <= 12; ++k) {
        double expected = 0.0;
        for (int j = 0; j <= 40; ++j) {
            auto pw = conv_power_oracle(nu_masses, j, 12);
            expected += poisson_pmf(1.3, j) * pw[k];
        }
        CHECK(compound_poisson_pmf(1.3, nu, k, 1e-14) ==
              doctest::Approx(expected).epsilon(1e-10));
    }
}

TEST_CASE("polya-aeppli pmf closed form") {
    CHECK(polya_aeppli_pmf(2.0, 0.5, 0) == doctest::Approx(std::exp(-2.0)).epsilon(1e-14));
    for (std::uint64_t k = 0; k <= 40; ++k)
        CHECK(polya_aeppli_pmf(1.0, 0.0, k) ==
              doctest::Approx(poisson_pmf(1.0, k)).epsilon(1e-14));
    CHECK(polya_aeppli_pmf(1.0, 0.5, 1) ==
          doctest::Approx(0.5 * std::exp(-1.0)).epsilon(1e-13));
    CHECK_THROWS_AS(polya_aeppli_pmf(1.0, 1.0, 1), ParameterError);
    CHECK_THROWS_AS(polya_aeppli_pmf(0.0, 0.5, 1), ParameterError);
}

TEST_CASE("PA equals CP(t, Geo(p)) on the parameter grid") {
    for (double t : {0.5, 1.0, 2.0}) {
        for (double p : {0.0, 0.3, 0.7}) {
            auto geo = DistributionOnN::geometric(p, 1e-16);
            for (std::uint64_t k = 0; k <= 50; ++k) {
                double pa = polya_aeppli_pmf(t, p, k);
                double cp = compound_poisson_pmf(t, geo, k, 1e-14);
                CHECK(std::fabs(pa - cp) <= 1e-10);
            }
        }
    }
}

TEST_CASE("characteristic function and the E9 identity") {
    auto delta1 = DistributionOnN::point_mass(1);
    for (double x : {0.3, 1.1}) {
        auto phi = characteristic_function(delta1, x);
        CHECK(std::abs(phi - std::exp(std::complex<double>(0, x))) < 1e-14);
    }
    auto some = DistributionOnN::poisson(1.7);
    CHECK(std::abs(characteristic_function(some, 0.0) - 1.0) < 1e-12);

    for (double t : {0.5, 1.0, 2.0}) {
        for (double p : {0.0, 0.3, 0.7}) {
            auto pa = DistributionOnN::polya_aeppli(t, p, 1e-13);
            auto geo = DistributionOnN::geometric(p, 1e-16);
            for (double x : {0.1, 0.7, 1.3, 2.9}) {
                auto lhs = characteristic_function(pa, x);
                auto rhs = std::exp(t * (characteristic_function(geo, x) - 1.0));
                CHECK(std::abs(lhs - rhs) <= 1e-10);
            }
        }
    }
}

TEST_CASE("total variation is the half-L1 metric") {
    auto mu = DistributionOnN::polya_aeppli(1.0, 0.3);
    CHECK(total_variation(mu, mu).value == 0.0);

    auto d0 = DistributionOnN::point_mass(0);
    auto d1 = DistributionOnN::point_mass(1);
    CHECK(total_variation(d0, d1).value == doctest::Approx(1.0));

    auto uniform01 = DistributionOnN({0.5, 0.5}, 0.0, DistKind::generic);
    CHECK(total_variation(d0, uniform01).value == doctest::Approx(0.5));

    // metric properties on a small corpus
    std::vector<DistributionOnN> corpus{
        DistributionOnN::poisson(1.0), DistributionOnN::polya_aeppli(1.0, 0.5),
        DistributionOnN::geometric(0.4), uniform01, d0};
    for (const auto& a : corpus)
        for (const auto& b : corpus) {
            double ab = total_variation(a, b).value;
            double ba = total_variation(b, a).value;
            CHECK(ab == ba);
            CHECK(ab >= 0.0);
            CHECK(ab <= 1.0 + 1e-12);
            for (const auto& c : corpus) {
                double ac = total_variation(a, c).value;
                double cb = total_variation(c, b).value;
                CHECK(ab <= ac + cb + 1e-12);
            }
        }
}

TEST_CASE("TV convergence tracks pointwise pmf convergence") {
    auto limit = DistributionOnN::polya_aeppli(1.0, 0.3);
    double prev_tv = 2.0;
    for (int j = 1; j <= 6; ++j) {
        auto approx = DistributionOnN::polya_aeppli(1.0, 0.3 + 0.3 / (1 << j));
        double tv = total_variation(approx, limit).value;
        CHECK(tv < prev_tv);
        prev_tv = tv;
        CHECK(std::fabs(approx.mass(1) - limit.mass(1)) <= 2.0 * tv);
    }
    CHECK(prev_tv < 0.01);
}

TEST_CASE("mass budget invariant on constructed families") {
    for (const auto& dist :
         {DistributionOnN::poisson(2.0), DistributionOnN::geometric(0.7),
          DistributionOnN::polya_aeppli(2.0, 0.7),
          DistributionOnN::compound_poisson(1.5, DistributionOnN::geometric(0.5),
                                            1e-12)}) {
        long double sum = dist.tail_mass();
        for (double m : dist.masses()) sum += m;
        CHECK(std::fabs(static_cast<double>(sum - 1.0L)) <= 1e-12);
    }
    CHECK_THROWS_AS(DistributionOnN({0.5, 0.4}, 0.0, DistKind::generic), ParameterError);
    CHECK_THROWS_AS(DistributionOnN({0.5, 0.6}, 0.0, DistKind::generic), ParameterError);
    CHECK_THROWS_AS(DistributionOnN({1.2, -0.2}, 0.0, DistKind::generic),
                    ParameterError);
}

TEST_CASE("polya-aeppli sampling matches the closed form") {
    // p = 0 degenerates to Poisson
    {
        std::vector<std::uint64_t> draws(200000);
        for (std::size_t i = 0; i < draws.size(); ++i) {
            RngStream rng = RngStream::derive(42, i);
            draws[i] = sample_polya_aeppli(1.0, 0.0, rng);
        }
        auto tv = total_variation(empirical_distribution(draws),
                                  DistributionOnN::poisson(1.0));
        CHECK(tv.value < 0.005);
    }
    {
        RngStream rng(12345);
        for (int rep = 0; rep < 50; ++rep) CHECK(sample_polya_aeppli(1e-9, 0.5, rng) == 0);
    }
    {
        std::vector<std::uint64_t> draws(1000000);
        for (std::size_t i = 0; i < draws.size(); ++i) {
            RngStream rng = RngStream::derive(7, i);
            draws[i] = sample_polya_aeppli(1.0, 0.5, rng);
        }
        auto tv = total_variation(empirical_distribution(draws),
                                  DistributionOnN::polya_aeppli(1.0, 0.5));
        CHECK(tv.value <= 0.002);
    }
}

TEST_CASE("empirical distributions") {
    std::vector<std::uint64_t> tiny{0, 0, 1, 1};
    auto law = empirical_distribution(tiny);
    CHECK(law.mass(0) == doctest::Approx(0.5));
    CHECK(law.mass(1) == doctest::Approx(0.5));
    CHECK(law.kind() == DistKind::empirical);

    std::vector<std::uint64_t> single{3};
    auto point = empirical_distribution(single);
    CHECK(point.mass(3) == 1.0);

    std::vector<std::uint64_t> empty;
    CHECK_THROWS_AS(empirical_distribution(empty), ParameterError);

    std::vector<std::uint64_t> draws(100000);
    for (std::size_t i = 0; i < draws.size(); ++i) {
        RngStream rng = RngStream::derive(11, i);
        draws[i] = sample_polya_aeppli(1.0, 0.3, rng);
    }
    auto tv = total_variation(empirical_distribution(draws),
                              DistributionOnN::polya_aeppli(1.0, 0.3));
    CHECK(tv.value <= 0.01);
}

TEST_CASE("json round trip validates invariants") {
    auto pa = DistributionOnN::polya_aeppli(1.5, 0.4);
    auto j = pa.to_json();
    auto back = DistributionOnN::from_json(j);
    CHECK(back.kind() == DistKind::polya_aeppli);
    CHECK(back.k_max() == pa.k_max());
    for (std::size_t k = 0; k <= pa.k_max(); ++k) CHECK(back.mass(k) == pa.mass(k));
    CHECK(back.tail_mass() == pa.tail_mass());

    j["tail_mass"] = 0.5;  // breaks the mass budget
    CHECK_THROWS_AS(DistributionOnN::from_json(j), ParameterError);
}
