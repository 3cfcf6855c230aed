#include "viamdp/params.hpp"

#include <stdexcept>
#include <string>

namespace viamdp {

namespace {

void require(bool cond, const std::string& what) {
    if (!cond) throw std::invalid_argument("invalid params: " + what);
}

}  // namespace

void validate_params(const SystemParams& params) {
    require(params.p > 0.0 && params.p < 1.0, "p must be in (0,1)");
    require(params.q > 0.0 && params.q < 1.0, "q must be in (0,1)");
    require(params.beta > 0.0 && params.beta < 1.0, "beta must be in (0,1)");
    require(params.p_s >= 0.0 && params.p_s <= 1.0, "p_s must be in [0,1]");
    require(params.p_alpha >= 0.0 && params.p_alpha <= 1.0, "p_alpha must be in [0,1]");
    require(params.e_max >= 0, "e_max must be >= 0");
    require(params.delta_max >= 1, "delta_max must be >= 1");
}

}  // namespace viamdp
