#ifndef EXODE_EXODE_HPP
#define EXODE_EXODE_HPP

#include "calculus.hpp"
#include "errors.hpp"
#include "eval.hpp"
#include "exactness.hpp"
#include "expr.hpp"
#include "mu_search.hpp"
#include "parse.hpp"
#include "sampler.hpp"
#include "simplify.hpp"

#endif
