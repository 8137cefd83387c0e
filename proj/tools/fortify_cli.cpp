#include "commands.hpp"

int main(int argc, char** argv) { return fortify::cli::run(argc, argv); }
