#pragma once

#include "rankkit/combinators.hpp"
#include "rankkit/constructions.hpp"
#include "rankkit/diagonal.hpp"
#include "rankkit/errors.hpp"
#include "rankkit/expr.hpp"
#include "rankkit/formula.hpp"
#include "rankkit/formula_count.hpp"
#include "rankkit/lexorder.hpp"
#include "rankkit/polynomial.hpp"
#include "rankkit/priority.hpp"
#include "rankkit/retarget.hpp"
#include "rankkit/serialize.hpp"
#include "rankkit/sets.hpp"
#include "rankkit/setmodel.hpp"
