#include <iostream>

#include "rotphc/app.hpp"

int main(int argc, char** argv) { return rotphc::run_cli(argc, argv, std::cout, std::cerr); }
