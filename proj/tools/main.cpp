#include <vector>

#include "clinikit/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return clinikit::cli::dispatch(args);
}
