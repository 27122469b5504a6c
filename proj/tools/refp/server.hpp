#pragma once

#include <string>

namespace refp::cli {

// Blocks serving POST endpoints on 127.0.0.1; returns false when the port cannot be bound.
auto serve(int port) -> bool;

}
