#include "gnd/cli.hpp"

int main(int argc, char** argv) { return gnd::cli::dispatch(argc, argv); }
