#include "nldf/cli.hpp"

int main(int argc, char** argv) { return nldf::cli_main(argc, argv); }
