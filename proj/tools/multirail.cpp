#include "multirail/cli.hpp"

int main(int argc, char** argv) {
    return multirail::run_cli(argc, argv);
}
