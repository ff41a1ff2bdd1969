#ifndef LDS4_LDS4_HPP
#define LDS4_LDS4_HPP

#include "lds4/ball.hpp"
#include "lds4/errata.hpp"
#include "lds4/error.hpp"
#include "lds4/factor.hpp"
#include "lds4/oeis.hpp"
#include "lds4/polyalg.hpp"
#include "lds4/salem.hpp"
#include "lds4/seqcore.hpp"

#endif  // LDS4_LDS4_HPP
