/**
 * @file main.cpp
 * @brief cubeline executable.
 */

#include <csignal>
#include <iostream>

#include "cli.hpp"

namespace {

extern "C" void on_interrupt(int) { cubeline::cli::detail::interrupted().store(true); }

}  // namespace

int main(int argc, char** argv) {
    std::signal(SIGINT, on_interrupt);
    std::signal(SIGTERM, on_interrupt);
    std::vector<std::string> args(argv + 1, argv + argc);
    return cubeline::cli::run(std::move(args), std::cout, std::cerr);
}
