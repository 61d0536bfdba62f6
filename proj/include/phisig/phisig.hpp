#pragma once

#include "arith.hpp"
#include "error.hpp"
#include "inverse.hpp"
#include "moments.hpp"
#include "numeric.hpp"
#include "parallel.hpp"
#include "prooflab.hpp"
#include "report.hpp"
#include "sieve.hpp"
#include "smooth.hpp"
#include "word.hpp"

namespace phisig {

inline constexpr std::string_view version = "0.1.0";

} // namespace phisig
