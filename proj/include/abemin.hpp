#pragma once

#include <abemin/abe_cost.hpp>
#include <abemin/bench.hpp>
#include <abemin/circuit.hpp>
#include <abemin/cli.hpp>
#include <abemin/datagen.hpp>
#include <abemin/equivalence.hpp>
#include <abemin/error.hpp>
#include <abemin/formula.hpp>
#include <abemin/heuristics.hpp>
#include <abemin/parallel.hpp>
#include <abemin/parser.hpp>
#include <abemin/random.hpp>
#include <abemin/rewrite.hpp>
