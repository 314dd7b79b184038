#pragma once

#include "flatlimit/errors.hpp"
#include "flatlimit/rational.hpp"
#include "flatlimit/ring.hpp"
#include "flatlimit/monomial.hpp"
#include "flatlimit/polynomial.hpp"
#include "flatlimit/text.hpp"
#include "flatlimit/groebner.hpp"
#include "flatlimit/ideal.hpp"
#include "flatlimit/degeneration.hpp"
#include "flatlimit/node.hpp"
#include "flatlimit/chains.hpp"
