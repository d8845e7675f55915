#include "cograd/cli.hpp"

int main(int argc, char** argv) { return cograd::cli::run(argc, argv); }
