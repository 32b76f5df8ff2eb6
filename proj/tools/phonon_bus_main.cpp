#include "phononbus/cli/runner.hpp"

int main(int argc, char** argv) { return phononbus::cli::run(argc, argv); }
