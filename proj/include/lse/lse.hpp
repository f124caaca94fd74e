#pragma once

#include "lse/conditioning.hpp"
#include "lse/core.hpp"
#include "lse/estimate.hpp"
#include "lse/gqr.hpp"
#include "lse/kronecker.hpp"
#include "lse/lab.hpp"
#include "lse/matrix_market.hpp"
#include "lse/norms.hpp"
#include "lse/problem.hpp"
#include "lse/pseudo_inverse.hpp"
#include "lse/qr.hpp"
#include "lse/reports.hpp"
#include "lse/solve.hpp"
