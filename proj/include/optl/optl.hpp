#ifndef OPTL_OPTL_HPP
#define OPTL_OPTL_HPP

#include "optl/core.hpp"
#include "optl/opa.hpp"
#include "optl/formula.hpp"
#include "optl/parser.hpp"
#include "optl/logic.hpp"
#include "optl/text_io.hpp"
#include "optl/rewrite.hpp"
#include "optl/nwtl.hpp"
#include "optl/tableau.hpp"
#include "optl/check.hpp"

#endif  // OPTL_OPTL_HPP
