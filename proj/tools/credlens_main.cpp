#include <string>
#include <vector>

#include "credlens/cli.hpp"

int main(int argc, char** argv) {
    return credlens::cli::run(std::vector<std::string>(argv, argv + argc));
}
