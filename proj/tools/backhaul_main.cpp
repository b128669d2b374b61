#include "backhaul/cli.hpp"

int main(int argc, char** argv) {
    return backhaul::cli_main(argc, const_cast<const char* const*>(argv));
}
