#pragma once

#include <string>
#include <vector>

#include "rnd/exec.hpp"

namespace rnd {

// Known ids: fig2 fig4 fig5 fig7 fig8 fig9 fig10 fig11 fig12 fig13.
const std::vector<std::string>& figure_ids();

// Writes the datasets for one figure into out_dir and returns the file names.
// Throws ConfigError for an unknown id.
std::vector<std::string> figure_repro(const std::string& id, const std::string& out_dir,
                                      Exec exec = Exec::Parallel);

}  // namespace rnd
