#pragma once

#include "nabla/exactla.hpp"
#include "nabla/generators.hpp"
#include "nabla/geometry.hpp"
#include "nabla/poly.hpp"
#include "nabla/poly_io.hpp"
#include "nabla/random_connection.hpp"
#include "nabla/rational.hpp"
#include "nabla/tensor.hpp"
#include "nabla/tensor_json.hpp"
#include "nabla/verify.hpp"

namespace nabla {
inline constexpr const char* kVersion = "0.1.0";
}
