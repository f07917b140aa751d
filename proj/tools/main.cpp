#include "dylp/cli.hpp"

int main(int argc, char** argv) { return dylp::cli::run(argc, argv); }
