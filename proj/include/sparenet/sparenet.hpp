// Umbrella for the library proper. The command-line front end lives in
// cli.hpp and is not pulled in here; it needs CLI11 on the include path.
#pragma once

#include "codec.hpp"
#include "curves.hpp"
#include "enhance.hpp"
#include "experiments.hpp"
#include "generators.hpp"
#include "matching.hpp"
#include "network.hpp"
#include "policy.hpp"
#include "repair.hpp"
#include "rng.hpp"
