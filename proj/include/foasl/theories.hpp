#pragma once

#include <cstddef>
#include <set>

#include "foasl/syntax.hpp"
#include "foasl/theory_set.hpp"

namespace foasl {

// Builds the built-in theory for `id`, instantiated for every points-to
// arity in `arities`. Formulas are stored without the outer box; the box is
// added when they are attached to the root sequent.
//
//   Reynolds -> {1,2,3,4,5,6,10} per arity
//   VafeiadisParkinson -> Reynolds + {7}
//   Lee -> Reynolds + {8}
//   Thakur(d) -> Reynolds + {9} (binary points-to only, path unfolded d times)
//
// Throws std::invalid_argument for an empty arity set (unless id is None) or
// a Thakur depth below 1.
TheorySet theory_formulas(const TheoryId& id, const std::set<std::size_t>& arities);

// Individual numbered formulas (1..10) for a points-to arity k >= 2.
Formula theory_formula(int number, std::size_t arity);

// path_d(a, b) with path_1(a,b) = a |-> b and
// path_{d+1}(a,b) = a |-> b | E x. (a |-> x) * path_d(x, b).
Formula path_formula(int depth, const Term& a, const Term& b);

// Formula 9 at the given unfolding depth: A e1 e2. path_d(e1,e2) -> ~(e1 = e2).
Formula unfold_path(int depth);

}  // namespace foasl
