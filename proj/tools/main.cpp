#include "lanczos/cli.hpp"

int main(int argc, char** argv) { return lanczos::cli_main(argc, argv); }
