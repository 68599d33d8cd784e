#pragma once

#include "linrel/errors.hpp"
#include "linrel/kernel.hpp"
#include "linrel/subspace.hpp"
#include "linrel/relation.hpp"
#include "linrel/nonneg.hpp"
#include "linrel/block.hpp"
#include "linrel/random.hpp"
#include "linrel/generator.hpp"
#include "linrel/schur.hpp"
#include "linrel/verify.hpp"
#include "linrel/json_io.hpp"
