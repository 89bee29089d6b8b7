#pragma once

#include "cpsdrank/types.hpp"
#include "cpsdrank/linalg.hpp"
#include "cpsdrank/clifford.hpp"
#include "cpsdrank/elliptope.hpp"
#include "cpsdrank/factorization.hpp"
#include "cpsdrank/cpsd.hpp"
#include "cpsdrank/quantum.hpp"
#include "cpsdrank/io.hpp"
#include "cpsdrank/artifacts.hpp"
