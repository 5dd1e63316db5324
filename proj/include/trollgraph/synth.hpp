#pragma once

#include <cstdint>
#include <vector>

#include "trollgraph/io.hpp"

namespace trollgraph {

// Seeded generator of labeled snippets whose labels are deterministic
// functions of planted marker tokens (mki*, mkd*, mkr*, mkb*), so any sound
// learner can reach perfect accuracy. Used by the acceptance suite and the
// synth subcommand.
struct SynthConfig {
  std::size_t num_snippets = 200;
  std::uint64_t seed = 7;
  int max_responses = 3;
  // When set, the strategy label is a fixed function of the interpretation
  // label (no mkb marker is planted).
  bool strategy_from_interpretation = false;
};

std::vector<SnippetRecord> make_synthetic(const SynthConfig& config);

}  // namespace trollgraph
