#include "fmarl/cli.hpp"

int main(int argc, char** argv) { return fmarl::cli_main(argc, argv); }
