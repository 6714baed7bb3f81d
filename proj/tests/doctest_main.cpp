#define DOCTEST_CONFIG_IMPLEMENT
#include "doctest.h"

#include "fsbench/log.hpp"

int main(int argc, char** argv) {
    // keep selector chatter out of the assertion output
    fsbench::log::set_level(fsbench::log::Level::Error);
    return doctest::Context(argc, argv).run();
}
