#include "artfima/cli.hpp"

int main(int argc, char** argv) { return artfima::cli::run(argc, argv); }
