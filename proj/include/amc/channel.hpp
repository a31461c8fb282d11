#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "modulation.hpp"
#include "rng.hpp"

namespace amc {

// Dense row-major complex matrix. Channel dimensions here are tiny (Nr x Ns,
// Ns x T), so no linear algebra library is warranted.
struct CMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<cplx> data;

    CMatrix() = default;
    CMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c) {}

    cplx& operator()(std::size_t r, std::size_t c) { return data[r * cols + c]; }
    const cplx& operator()(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
};

// One flat-fading draw: H entries i.i.d. CN(0,1), constant over the frame.
struct ChannelRealization {
    CMatrix h;
    std::size_t ns = 0;
    std::size_t nr = 0;
};

struct NoiseSpec {
    double snr_db = 0.0;
    double sigma2 = 0.0;  // complex noise variance per receive antenna
};

// Per-receive-antenna SNR convention: with unit-power symbols the signal power
// per receive antenna is Ns, so sigma2 = Ns * 10^(-snr_db/10).
inline NoiseSpec noise_for_snr(double snr_db, std::size_t ns) {
    if (ns == 0) throw std::invalid_argument("noise_for_snr: ns must be >= 1");
    return {snr_db, static_cast<double>(ns) * std::pow(10.0, -snr_db / 10.0)};
}

inline NoiseSpec noiseless() {
    return {std::numeric_limits<double>::infinity(), 0.0};
}

// Symbol t goes to antenna t mod Ns: element (i, t) = symbols[t*ns + i].
inline CMatrix spatial_multiplex(std::span<const cplx> symbols, std::size_t ns) {
    if (ns == 0) throw std::invalid_argument("spatial_multiplex: ns must be >= 1");
    if (symbols.size() % ns != 0)
        throw std::invalid_argument("spatial_multiplex: symbol count not divisible by ns");
    const std::size_t t_len = symbols.size() / ns;
    CMatrix x(ns, t_len);
    for (std::size_t t = 0; t < t_len; ++t)
        for (std::size_t i = 0; i < ns; ++i) x(i, t) = symbols[t * ns + i];
    return x;
}

inline CMatrix spatial_multiplex(const SymbolStream& s, std::size_t ns) {
    return spatial_multiplex(std::span<const cplx>(s.symbols), ns);
}

inline ChannelRealization sample_channel(std::size_t nr, std::size_t ns, std::uint64_t seed) {
    if (ns < 1 || nr < ns)
        throw std::invalid_argument("sample_channel: requires nr >= ns >= 1");
    Rng rng(seed);
    ChannelRealization ch;
    ch.ns = ns;
    ch.nr = nr;
    ch.h = CMatrix(nr, ns);
    for (auto& e : ch.h.data) e = rng.complex_normal(1.0);
    return ch;
}

// r(:,t) = H x(:,t) + g(t), g entries i.i.d. CN(0, sigma2).
inline CMatrix apply_channel(const ChannelRealization& ch, const CMatrix& x, const NoiseSpec& noise,
                             std::uint64_t seed) {
    if (x.rows != ch.ns) throw std::invalid_argument("apply_channel: input row count must equal ns");
    Rng rng(seed);
    CMatrix y(ch.nr, x.cols);
    for (std::size_t t = 0; t < x.cols; ++t) {
        for (std::size_t j = 0; j < ch.nr; ++j) {
            cplx acc{0.0, 0.0};
            for (std::size_t i = 0; i < ch.ns; ++i) acc += ch.h(j, i) * x(i, t);
            if (noise.sigma2 > 0.0) acc += rng.complex_normal(noise.sigma2);
            y(j, t) = acc;
        }
    }
    return y;
}

// One received frame; the unit of feature extraction and classification.
struct IqFrame {
    std::vector<cplx> samples;
    std::optional<ModulationScheme> label;
    std::optional<double> snr_db;

    std::size_t n() const { return samples.size(); }
};

// Column-major read-out, inverse of spatial_multiplex when Nr == Ns.
inline IqFrame vectorize(const CMatrix& y) {
    IqFrame f;
    f.samples.resize(y.rows * y.cols);
    for (std::size_t t = 0; t < y.cols; ++t)
        for (std::size_t j = 0; j < y.rows; ++j) f.samples[t * y.rows + j] = y(j, t);
    return f;
}

}  // namespace amc
