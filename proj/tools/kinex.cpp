#include "commands.hpp"

int main(int argc, char** argv) { return kinex::cli::run(argc, argv); }
