#include "feplab/cli.hpp"

int main(int argc, char** argv) { return feplab::run_cli(argc, argv); }
