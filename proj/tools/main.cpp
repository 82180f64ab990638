#include "slz/cli.hpp"

int main(int argc, char** argv) { return slz::cli::run_main(argc, argv); }
