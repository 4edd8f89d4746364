#pragma once

#include "ncorlicz/errors.hpp"
#include "ncorlicz/numeric.hpp"
#include "ncorlicz/orlicz.hpp"
#include "ncorlicz/algebra.hpp"
#include "ncorlicz/quadrature.hpp"
#include "ncorlicz/rearrangement.hpp"
#include "ncorlicz/random.hpp"
#include "ncorlicz/norms.hpp"
#include "ncorlicz/morphisms.hpp"
#include "ncorlicz/positive_map.hpp"
#include "ncorlicz/io.hpp"
#include "ncorlicz/verification.hpp"
