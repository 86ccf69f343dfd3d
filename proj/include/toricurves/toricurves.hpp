#pragma once

#include "toricurves/error.hpp"
#include "toricurves/laurent.hpp"
#include "toricurves/dim_series.hpp"
#include "toricurves/multi_series.hpp"
#include "toricurves/int_poly.hpp"
#include "toricurves/integer_matrix.hpp"
#include "toricurves/fan.hpp"
#include "toricurves/mobius.hpp"
#include "toricurves/euler_product.hpp"
#include "toricurves/moduli.hpp"
#include "toricurves/oracle.hpp"
#include "toricurves/serialize.hpp"
