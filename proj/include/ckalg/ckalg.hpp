#ifndef CKALG_CKALG_HPP
#define CKALG_CKALG_HPP

#include "ckalg/errors.hpp"
#include "ckalg/numbers.hpp"
#include "ckalg/matrix_graph.hpp"
#include "ckalg/cyclotomic.hpp"
#include "ckalg/element.hpp"
#include "ckalg/core.hpp"
#include "ckalg/quasifree.hpp"
#include "ckalg/shift.hpp"
#include "ckalg/cocycle.hpp"
#include "ckalg/rokhlin.hpp"
#include "ckalg/witness.hpp"
#include "ckalg/ktheory.hpp"
#include "ckalg/oracle.hpp"

#endif  // CKALG_CKALG_HPP
