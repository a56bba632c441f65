#include "qcone/cli.hpp"

int main(int argc, char** argv) { return qcone::cli::run(argc, argv); }
