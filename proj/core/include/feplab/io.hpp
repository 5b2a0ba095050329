#ifndef FEPLAB_IO_HPP
#define FEPLAB_IO_HPP

#include <string>

namespace feplab {

// Writes via a sibling temporary file plus rename, so readers never observe
// a half-written file.
void atomic_write_text(const std::string& path, const std::string& content);

std::string read_text(const std::string& path);

// Deterministic shortest-ish formatting used for all CSV/JSON numbers.
std::string format_double(double x);

}  // namespace feplab

#endif
