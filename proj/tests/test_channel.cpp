#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "polarseq/channel.hpp"

using namespace polarseq;

TEST_CASE("eb_n0_to_sigma matches closed-form values") {
    CHECK(eb_n0_to_sigma(0.0, 1.0) == doctest::Approx(0.707106781186547).epsilon(1e-12));
    CHECK(eb_n0_to_sigma(2.0, 0.5) == doctest::Approx(0.794328234724281).epsilon(1e-12));
    CHECK(eb_n0_to_sigma(1.0, 0.5) == doctest::Approx(0.891250938133745).epsilon(1e-12));
    CHECK(eb_n0_to_sigma(200.0, 0.5) < 1e-5);  // high-SNR limit drives sigma to 0
    CHECK_THROWS_AS(eb_n0_to_sigma(0.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(eb_n0_to_sigma(0.0, 1.5), std::invalid_argument);
}

TEST_CASE("transmit at sigma=0 is exact BPSK") {
    std::mt19937_64 rng(1);
    const std::vector<std::uint8_t> c{0, 1, 1, 0};
    const std::vector<double> y = transmit(c, AwgnChannel{0.0}, rng);
    CHECK(y == std::vector<double>{1.0, -1.0, -1.0, 1.0});
}

TEST_CASE("transmit is deterministic per seed") {
    const std::vector<std::uint8_t> c(32, 0);
    std::mt19937_64 a(77), b(77), d(78);
    const std::vector<double> ya = transmit(c, AwgnChannel{0.8}, a);
    const std::vector<double> yb = transmit(c, AwgnChannel{0.8}, b);
    const std::vector<double> yd = transmit(c, AwgnChannel{0.8}, d);
    CHECK(ya == yb);
    CHECK(ya != yd);
}

TEST_CASE("transmit noise statistics match the channel model") {
    const double sigma = 0.8;
    const std::size_t trials = 100000;
    std::mt19937_64 rng(5);
    const std::vector<std::uint8_t> zeros(100, 0);
    double sum = 0.0, sumsq = 0.0;
    for (std::size_t t = 0; t < trials / zeros.size(); ++t) {
        const std::vector<double> y = transmit(zeros, AwgnChannel{sigma}, rng);
        for (double v : y) {
            sum += v;
            sumsq += (v - 1.0) * (v - 1.0);
        }
    }
    const double mean = sum / trials;
    const double var = sumsq / trials;
    CHECK(std::abs(mean - 1.0) < 3.0 * sigma / std::sqrt(double(trials)));
    CHECK(var == doctest::Approx(sigma * sigma).epsilon(0.05));
}

TEST_CASE("llr formula 2y/sigma^2") {
    const std::vector<double> y{0.0, 1.0, -0.5};
    const std::vector<double> s1 = llr(y, AwgnChannel{1.0});
    CHECK(s1[0] == 0.0);
    CHECK(s1[1] == doctest::Approx(2.0));
    const std::vector<double> s2 = llr(y, AwgnChannel{std::sqrt(0.5)});
    CHECK(s2[2] == doctest::Approx(-2.0));
    CHECK_THROWS_AS(llr(y, AwgnChannel{0.0}), std::invalid_argument);
}

TEST_CASE("llr sign recovers the bits as noise vanishes") {
    std::mt19937_64 rng(9);
    std::vector<std::uint8_t> c(64);
    for (auto& b : c) b = static_cast<std::uint8_t>(rng() & 1u);
    const AwgnChannel ch{1e-6};
    const std::vector<double> s = llr(transmit(c, ch, rng), ch);
    for (std::size_t i = 0; i < c.size(); ++i) CHECK((s[i] < 0) == (c[i] == 1));
}

TEST_CASE("splitmix64 matches published reference outputs") {
    CHECK(splitmix64(0) == 0xe220a8397b1dcdafULL);
    CHECK(splitmix64(1) == 0x910a2dec89025cc1ULL);
}

TEST_CASE("frame seeds give distinct reproducible substreams") {
    CHECK(frame_seed(42, 0) == frame_seed(42, 0));
    CHECK(frame_seed(42, 0) != frame_seed(42, 1));
    CHECK(frame_seed(42, 0) != frame_seed(43, 0));

    std::mt19937_64 r0 = frame_rng(42, 0);
    std::mt19937_64 r0b = frame_rng(42, 0);
    std::mt19937_64 r1 = frame_rng(42, 1);
    CHECK(r0() == r0b());
    CHECK(r0 != r1);
}
