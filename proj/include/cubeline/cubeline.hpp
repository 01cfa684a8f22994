#pragma once

/**
 * @file cubeline.hpp
 * @brief Umbrella header.
 */

#include "cubeline/box.hpp"
#include "cubeline/error.hpp"
#include "cubeline/io.hpp"
#include "cubeline/mvectors.hpp"
#include "cubeline/semigroup.hpp"
#include "cubeline/sweep3.hpp"
#include "cubeline/torus.hpp"
