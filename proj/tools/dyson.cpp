#include "dyson/cli.hpp"

int main(int argc, char** argv) { return dyson::cli::run(std::vector<std::string>(argv, argv + argc)); }
