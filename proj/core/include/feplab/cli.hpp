#ifndef FEPLAB_CLI_HPP
#define FEPLAB_CLI_HPP

namespace feplab {

// Entry point behind the feplab binary.  Subcommands:
//   enumerate | map | simulate | exact | tv-curve | merge-ub | statistic-lb |
//   transience | spectral-lb
// Returns 0 on success, nonzero with a diagnostic on config or guard errors.
int run_cli(int argc, const char* const* argv);

}  // namespace feplab

#endif
