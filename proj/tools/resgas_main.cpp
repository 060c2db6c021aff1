#include "resgas/cli.hpp"

int main(int argc, char** argv) { return resgas::run_cli(argc, argv); }
