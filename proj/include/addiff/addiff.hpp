#pragma once

// Semantic comparison of activity diagrams: parse and validate diagram
// text, execute the token semantics, and compute shortest witness runs one
// diagram admits and another cannot follow, explicitly or symbolically.

#include "addiff/ad.hpp"
#include "addiff/bdd.hpp"
#include "addiff/benchgen.hpp"
#include "addiff/diagnostics.hpp"
#include "addiff/diff.hpp"
#include "addiff/domain.hpp"
#include "addiff/dot.hpp"
#include "addiff/encode.hpp"
#include "addiff/expr.hpp"
#include "addiff/parser.hpp"
#include "addiff/report.hpp"
#include "addiff/semantics.hpp"
#include "addiff/serialize.hpp"
#include "addiff/smv.hpp"
#include "addiff/validate.hpp"
