#include "cli.hpp"

int main(int argc, char** argv) { return latmove::cli::run(argc, argv); }
