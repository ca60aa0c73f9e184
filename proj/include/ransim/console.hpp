#pragma once

#include <chrono>
#include <iosfwd>

#include "ransim/simulation.hpp"

namespace ransim {

struct ConsoleOptions {
    bool show_menu = false;  // numbered menu before each prompt (TTY sessions)
    bool prompt = false;
    // Without a runner, advance one tick after each mutation so its outcome
    // can be reported immediately.
    bool auto_step = true;
    std::chrono::milliseconds ack_timeout{5000};
};

/// Line-oriented operator console. Reads commands from `in` until EOF or
/// "quit" and writes results to `out`. Returns the number of commands that
/// were rejected.
int run_console(Simulation& sim, std::istream& in, std::ostream& out, ConsoleOptions options = {});

}  // namespace ransim
