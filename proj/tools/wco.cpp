#include "wco/cli.hpp"

int main(int argc, char** argv) { return wco::cli::main(argc, argv); }
