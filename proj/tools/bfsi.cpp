#include "bfsi/cli.hpp"

int main(int argc, char** argv) { return bfsi::cli_main(argc, argv); }
