#include "waybound/cli.hpp"

int main(int argc, char** argv) {
    return waybound::run_cli(argc, argv);
}
