#pragma once

#include <vector>

#include "polyclone/frontend.hpp"

namespace polyclone::detail {

/// Adapters backed by the bundled tree-sitter grammars.
const std::vector<const ParserAdapter*>& tree_sitter_adapters();

}  // namespace polyclone::detail
