#pragma once

#include "lrineq/rational.hpp"
#include "lrineq/ffla.hpp"
#include "lrineq/subspace.hpp"
#include "lrineq/ineq.hpp"
#include "lrineq/matroid.hpp"
#include "lrineq/netcode.hpp"
#include "lrineq/lp.hpp"
#include "lrineq/json.hpp"

namespace lrineq {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace lrineq
