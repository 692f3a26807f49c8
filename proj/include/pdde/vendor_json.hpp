#pragma once

// single include point for the vendored JSON library
#include "json.hpp"

namespace pdde {
using json = nlohmann::ordered_json;
}
