#pragma once

#include <cmath>
#include <complex>
#include <random>

namespace hs::testing {

inline double rel_err(std::complex<double> got, std::complex<double> want)
{
    return std::abs(got - want) / std::max(std::abs(want), 1e-300);
}

inline std::mt19937_64& rng()
{
    static std::mt19937_64 gen(20261015);
    return gen;
}

inline double uniform(double lo, double hi)
{
    return std::uniform_real_distribution<double>(lo, hi)(rng());
}

}  // namespace hs::testing
