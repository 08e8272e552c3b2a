#include "cli_commands.hpp"

int main(int argc, char** argv) { return logictree::cli::run(argc, argv); }
