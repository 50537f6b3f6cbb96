#include "kgpat/cli.hpp"

int main(int argc, char** argv) { return kgpat::run_cli(argc, argv); }
