#ifndef WITSOLVE_WITSOLVE_HPP
#define WITSOLVE_WITSOLVE_HPP

#include "baselines.hpp"
#include "errors.hpp"
#include "evaluation.hpp"
#include "io.hpp"
#include "model.hpp"
#include "quadrature.hpp"
#include "rng.hpp"
#include "solver.hpp"

#endif
