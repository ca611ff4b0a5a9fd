#pragma once

#include <iosfwd>
#include <string>

#include "foasl/calculus.hpp"

namespace foasl {

// Indented tree, root first: one "[rule] sequent" line per node.
void write_proof_text(std::ostream& out, const Derivation& d);

// One JSON record per node in preorder: id, rule, the rule instance fields,
// the node's sequent and child ids. Node 0 is the root.
std::string proof_to_json(const Derivation& d);
// Throws std::runtime_error on malformed input.
Derivation proof_from_json(const std::string& text);

// Writes `path` (text tree) and `path`.json.
void emit_proof(const Derivation& d, const std::string& path);

}  // namespace foasl
