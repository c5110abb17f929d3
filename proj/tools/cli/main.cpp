#include "cli.hpp"

int main(int argc, char** argv) { return distq::cli::run(argc, argv); }
