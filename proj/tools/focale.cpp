#include "focale/cli.hpp"

int main(int argc, char** argv) { return focale::cli::run(argc, argv); }
