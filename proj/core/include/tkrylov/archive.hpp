#pragma once

#include <string>

#include "tkrylov/krylov_state.hpp"
#include "tkrylov/tucker.hpp"

namespace tkrylov {

// JSON archives for recursion states and Tucker decompositions; values
// round-trip exactly. Used for resume and offline verification.

std::string to_json(const KrylovState& state);
KrylovState state_from_json(const std::string& text);

std::string to_json(const TuckerDecomp& decomp);
TuckerDecomp decomp_from_json(const std::string& text);

void save_state(const std::string& path, const KrylovState& state);
KrylovState load_state(const std::string& path);

void save_decomp(const std::string& path, const TuckerDecomp& decomp);
TuckerDecomp load_decomp(const std::string& path);

}  // namespace tkrylov
