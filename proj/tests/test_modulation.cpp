#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <bit>
#include <complex>
#include <set>

#include <amc/modulation.hpp>
#include <amc/rng.hpp>

using namespace amc;

namespace {

int hamming(std::size_t a, std::size_t b) { return std::popcount(a ^ b); }

}  // namespace

TEST_CASE("random_bits is deterministic per seed") {
    const auto a = random_bits(8, 42);
    const auto b = random_bits(8, 42);
    REQUIRE(a == b);
    REQUIRE(a.size() == 8);
    const auto c = random_bits(8, 43);
    REQUIRE(a != c);  // different seed, different stream (8 equal bits would be 1/256 luck)
}

TEST_CASE("random_bits ones fraction is near one half") {
    const auto bits = random_bits(1000000, 1);
    std::size_t ones = 0;
    for (auto b : bits) ones += b;
    const double frac = static_cast<double>(ones) / 1e6;
    REQUIRE(frac > 0.497);
    REQUIRE(frac < 0.503);
}

TEST_CASE("random_bits rejects empty request") {
    REQUIRE_THROWS_AS(random_bits(0, 7), std::invalid_argument);
}

TEST_CASE("BPSK and QPSK constellations are the forced ones") {
    const auto& bpsk = constellation(ModulationScheme::Bpsk);
    REQUIRE(bpsk.size() == 2);
    REQUIRE(bpsk[0] == cplx{1.0, 0.0});
    REQUIRE(bpsk[1] == cplx{-1.0, 0.0});

    const auto& qpsk = constellation(ModulationScheme::Qpsk);
    REQUIRE(qpsk.size() == 4);
    const double r = 0.7071067811865476;
    for (const auto& p : qpsk) {
        REQUIRE(std::abs(std::abs(p.real()) - r) < 1e-12);
        REQUIRE(std::abs(std::abs(p.imag()) - r) < 1e-12);
    }
    // label 00 sits at angle pi/4
    REQUIRE(std::abs(qpsk[0].real() - r) < 1e-12);
    REQUIRE(std::abs(qpsk[0].imag() - r) < 1e-12);
}

TEST_CASE("16QAM is the {±1,±3} grid scaled by 1/sqrt(10)") {
    const auto& q = constellation(ModulationScheme::Qam16);
    REQUIRE(q.size() == 16);
    const double s = 1.0 / std::sqrt(10.0);
    std::multiset<std::pair<int, int>> grid;
    for (const auto& p : q) {
        const double re = p.real() / s;
        const double im = p.imag() / s;
        REQUIRE(std::abs(re - std::round(re)) < 1e-9);
        REQUIRE(std::abs(im - std::round(im)) < 1e-9);
        grid.insert({static_cast<int>(std::round(re)), static_cast<int>(std::round(im))});
    }
    for (int a : {-3, -1, 1, 3})
        for (int b : {-3, -1, 1, 3}) REQUIRE(grid.count({a, b}) == 1);
}

TEST_CASE("all constellations: size, distinctness, unit power, zero mean") {
    for (auto m : kAllSchemes) {
        const auto& pts = constellation(m);
        REQUIRE(pts.size() == (std::size_t{1} << bits_per_symbol(m)));

        std::set<std::pair<double, double>> uniq;
        for (const auto& p : pts) uniq.insert({p.real(), p.imag()});
        REQUIRE(uniq.size() == pts.size());

        double power = 0.0;
        cplx mean{0.0, 0.0};
        for (const auto& p : pts) {
            power += std::norm(p);
            mean += p;
        }
        power /= static_cast<double>(pts.size());
        mean /= static_cast<double>(pts.size());
        REQUIRE(std::abs(power - 1.0) < 1e-12);
        REQUIRE(std::abs(mean) < 1e-12);
    }
}

TEST_CASE("labels are Gray-adjacent: nearest neighbours differ in one bit") {
    for (auto m : kAllSchemes) {
        const auto& pts = constellation(m);
        if (pts.size() < 4) continue;
        double dmin = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < pts.size(); ++i)
            for (std::size_t j = i + 1; j < pts.size(); ++j)
                dmin = std::min(dmin, std::abs(pts[i] - pts[j]));
        for (std::size_t i = 0; i < pts.size(); ++i)
            for (std::size_t j = i + 1; j < pts.size(); ++j)
                if (std::abs(pts[i] - pts[j]) < dmin * 1.0001) REQUIRE(hamming(i, j) == 1);
    }
}

TEST_CASE("modulate maps the documented examples") {
    const std::uint8_t b0[] = {0};
    const auto s1 = modulate(b0, ModulationScheme::Bpsk);
    REQUIRE(s1.symbols.size() == 1);
    REQUIRE(s1.symbols[0] == cplx{1.0, 0.0});

    const std::uint8_t b00[] = {0, 0};
    const auto s2 = modulate(b00, ModulationScheme::Qpsk);
    REQUIRE(s2.symbols.size() == 1);
    REQUIRE(std::abs(s2.symbols[0] - cplx{0.7071067811865476, 0.7071067811865476}) < 1e-12);
}

TEST_CASE("modulate rejects bit counts not divisible by bits per symbol") {
    const std::uint8_t bits[] = {0, 1, 0};
    REQUIRE_THROWS_AS(modulate(bits, ModulationScheme::Qpsk), std::invalid_argument);
}

TEST_CASE("random 64QAM stream has mean power near one") {
    const auto bits = random_bits(1024 * 6, 99);
    const auto s = modulate(bits, ModulationScheme::Qam64);
    REQUIRE(s.symbols.size() == 1024);
    double power = 0.0;
    for (const auto& v : s.symbols) power += std::norm(v);
    power /= 1024.0;
    REQUIRE(power > 0.9);
    REQUIRE(power < 1.1);
}

TEST_CASE("normalize_power forced arithmetic and errors") {
    const cplx in[] = {{2.0, 0.0}, {-2.0, 0.0}};
    const auto out = normalize_power(in);
    REQUIRE(std::abs(out[0] - cplx{1.0, 0.0}) < 1e-12);
    REQUIRE(std::abs(out[1] - cplx{-1.0, 0.0}) < 1e-12);

    const cplx one[] = {{1.0, 0.0}};
    const auto same = normalize_power(one);
    REQUIRE(same[0] == cplx{1.0, 0.0});

    const cplx zeros[] = {{0.0, 0.0}, {0.0, 0.0}};
    REQUIRE_THROWS_AS(normalize_power(zeros), std::invalid_argument);
    REQUIRE_THROWS_AS(normalize_power(std::span<const cplx>{}), std::invalid_argument);
}

TEST_CASE("normalize_power yields unit average power and is idempotent") {
    Rng rng(5);
    std::vector<cplx> v;
    for (int i = 0; i < 257; ++i) v.push_back({3.0 * rng.normal(), 0.5 + rng.normal()});
    const auto once = normalize_power(v);
    double power = 0.0;
    for (const auto& s : once) power += std::norm(s);
    power /= static_cast<double>(once.size());
    REQUIRE(std::abs(power - 1.0) < 1e-12);

    const auto twice = normalize_power(once);
    for (std::size_t i = 0; i < once.size(); ++i) REQUIRE(std::abs(twice[i] - once[i]) < 1e-12);
}

TEST_CASE("nearest-point demapping inverts modulate for every scheme") {
    for (auto m : kAllSchemes) {
        const auto bits = random_bits(240 * static_cast<std::size_t>(bits_per_symbol(m)),
                                      1000 + static_cast<std::uint64_t>(m));
        const auto s = modulate(bits, m);
        const auto back = demap_nearest(s.symbols, m);
        REQUIRE(back == bits);
    }
}

TEST_CASE("scheme names round-trip") {
    for (auto m : kAllSchemes) {
        const auto back = scheme_from_name(scheme_name(m));
        REQUIRE(back.has_value());
        REQUIRE(*back == m);
    }
    REQUIRE_FALSE(scheme_from_name("QAM128").has_value());
}
