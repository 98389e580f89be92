#pragma once

#include "buyk/rational.hpp"
#include "buyk/core.hpp"
#include "buyk/buyer.hpp"
#include "buyk/simplex.hpp"
#include "buyk/benchmarks.hpp"
#include "buyk/menugap.hpp"
#include "buyk/coverfree.hpp"
#include "buyk/constructions.hpp"
#include "buyk/io.hpp"
#include "buyk/report.hpp"
