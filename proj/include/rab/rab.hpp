#pragma once

#include "rab/bound_csir.hpp"
#include "rab/bound_nocsi.hpp"
#include "rab/bound_result.hpp"
#include "rab/mc_oracle.hpp"
#include "rab/numerics.hpp"
#include "rab/specfun.hpp"
#include "rab/sweep.hpp"
#include "rab/tdma.hpp"
