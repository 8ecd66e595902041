#pragma once

// Umbrella header: the complete public surface of the library.

#include "ensvol/common.hpp"
#include "ensvol/spectral.hpp"
#include "ensvol/calculus.hpp"
#include "ensvol/ensemble.hpp"
#include "ensvol/volumes.hpp"
#include "ensvol/geometry.hpp"
#include "ensvol/explorer.hpp"
#include "ensvol/verify.hpp"
#include "ensvol/io.hpp"
#include "ensvol/cli.hpp"
