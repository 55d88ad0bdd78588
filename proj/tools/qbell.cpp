#include "qbell/cli.hpp"

int main(int argc, char** argv) { return qbell::cli::run(argc, argv); }
