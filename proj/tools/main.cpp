#include "cli.hpp"

int main(int argc, char** argv) { return hlusin::cli::run(argc, argv); }
