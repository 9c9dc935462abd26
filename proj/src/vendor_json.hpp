#pragma once

// Single include point for the vendored nlohmann/json header so the large
// header is compiled into one translation unit of the library only.
#include "json.hpp"
