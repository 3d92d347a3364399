#include "stylebench/cli.hpp"

int main(int argc, char** argv) { return stylebench::cli::run(argc, argv); }
