#pragma once

// Umbrella header.
#include "dgmm/rational.hpp"
#include "dgmm/matrix.hpp"
#include "dgmm/linalg.hpp"
#include "dgmm/graded.hpp"
#include "dgmm/cdga.hpp"
#include "dgmm/expr.hpp"
#include "dgmm/dgmodule.hpp"
#include "dgmm/free_module.hpp"
#include "dgmm/minmodel.hpp"
#include "dgmm/circle.hpp"
#include "dgmm/fixtures.hpp"
#include "dgmm/io.hpp"
#include "dgmm/report.hpp"
