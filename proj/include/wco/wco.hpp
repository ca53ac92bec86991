#pragma once

#include "wco/error.hpp"
#include "wco/scalar.hpp"
#include "wco/geopoly.hpp"
#include "wco/atom_function.hpp"
#include "wco/space.hpp"
#include "wco/calculus.hpp"
#include "wco/surd.hpp"
#include "wco/dense_matrix.hpp"
#include "wco/oracle_matrix.hpp"
#include "wco/classify.hpp"
#include "wco/oracle.hpp"
#include "wco/io.hpp"
