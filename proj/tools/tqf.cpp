#include "tqf/cli.hpp"

int main(int argc, char** argv) { return tqf::cli_main(argc, argv); }
