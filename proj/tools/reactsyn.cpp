#include "reactsyn/cli.hpp"

int main(int argc, char** argv) { return reactsyn::run_cli(argc, argv); }
