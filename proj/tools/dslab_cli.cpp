#include "dslab/cli.hpp"

int main(int argc, char** argv) { return dslab::cli::main(argc, argv); }
