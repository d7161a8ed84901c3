#include "bern/cli.hpp"

int main(int argc, char** argv) {
    return bern::run(argc, argv);
}
