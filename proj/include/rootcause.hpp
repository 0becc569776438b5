#pragma once

#include "rootcause/acyclicity.hpp"
#include "rootcause/bench.hpp"
#include "rootcause/dagma.hpp"
#include "rootcause/dataset.hpp"
#include "rootcause/errors.hpp"
#include "rootcause/expm.hpp"
#include "rootcause/graph.hpp"
#include "rootcause/io.hpp"
#include "rootcause/lbfgsb.hpp"
#include "rootcause/log.hpp"
#include "rootcause/loss.hpp"
#include "rootcause/metrics.hpp"
#include "rootcause/notears.hpp"
#include "rootcause/pc.hpp"
#include "rootcause/preprocess.hpp"
#include "rootcause/random.hpp"
#include "rootcause/simulate.hpp"
