#include <iostream>

#include "aggseek/commands.hpp"

int main(int argc, char** argv) { return aggseek::cli::run(argc, argv, std::cout, std::cerr); }
