#include "wdisc/cli.hpp"

int main(int argc, char** argv) { return wdisc::cli::run_cli(argc, argv); }
