#include <iostream>

#include "app.hpp"

int main(int argc, char** argv) { return lacelab::app::run(argc, argv, std::cout, std::cerr); }
