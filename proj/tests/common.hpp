#pragma once

#include <gtest/gtest.h>

#include "rpf/rpf.hpp"

namespace rpf_test {

struct PrecisionEnv : ::testing::Environment {
    void SetUp() override { rpf::set_precision(256); }
};

inline ::testing::Environment* const precision_env = ::testing::AddGlobalTestEnvironment(new PrecisionEnv);

inline double d(const rpf::real& x) { return rpf::to_double(x); }

// |a - b| < 2^-bits
inline bool close_bits(const rpf::cx& a, const rpf::cx& b, long bits) { return rpf::abs(a - b) < rpf::pow2(-bits); }
inline bool close_bits(const rpf::real& a, const rpf::real& b, long bits) { return rpf::bmp::abs(a - b) < rpf::pow2(-bits); }

}  // namespace rpf_test
