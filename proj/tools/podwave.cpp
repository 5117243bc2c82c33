#include "podwave/cli.hpp"

int main(int argc, char** argv) { return podwave::run_cli(argc, argv); }
