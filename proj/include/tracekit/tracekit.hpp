#pragma once

#include "tracekit/numeric.hpp"
#include "tracekit/arith.hpp"
#include "tracekit/matrix_forms.hpp"
#include "tracekit/class_numbers.hpp"
#include "tracekit/cyclo.hpp"
#include "tracekit/dirichlet.hpp"
#include "tracekit/p1.hpp"
#include "tracekit/local_counts.hpp"
#include "tracekit/cusp_terms.hpp"
#include "tracekit/trace_formulas.hpp"
#include "tracekit/hecke_operator.hpp"
#include "tracekit/linalg.hpp"
#include "tracekit/period_oracle.hpp"
#include "tracekit/acceptance.hpp"
