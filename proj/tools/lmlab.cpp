#include <lmlab/cli/commands.hpp>

int main(int argc, char** argv) { return lmlab::cli::dispatch(argc, argv); }
