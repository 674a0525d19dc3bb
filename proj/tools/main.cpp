#include "bcdbench/cli.hpp"

int main(int argc, char** argv) { return bcd::cli_main(argc, argv); }
