#pragma once

#include <string>

namespace gca::cli {

// Human-readable summary of a groupoid interchange file or a band model
// file: counts, orbit decomposition, boundary groups and symbol spectra.
std::string inspect_file(const std::string& path);

}  // namespace gca::cli
