#include "meanking/cli.hpp"

int main(int argc, char** argv) { return meanking::run_cli(argc, argv); }
