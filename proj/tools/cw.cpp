#include "confw/cli.hpp"

int main(int argc, char** argv) { return confw::cli::main(argc, argv); }
