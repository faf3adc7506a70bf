#include "omep/cli.hpp"

int main(int argc, char** argv) { return omep::cli::run(argc, argv); }
