#pragma once

#include "mfgcanon/bounds.hpp"
#include "mfgcanon/builtin.hpp"
#include "mfgcanon/catalog.hpp"
#include "mfgcanon/certificates.hpp"
#include "mfgcanon/errors.hpp"
#include "mfgcanon/finite_difference.hpp"
#include "mfgcanon/linalg.hpp"
#include "mfgcanon/measures.hpp"
#include "mfgcanon/models.hpp"
#include "mfgcanon/monotonicity.hpp"
#include "mfgcanon/sampling.hpp"
#include "mfgcanon/solver.hpp"
#include "mfgcanon/transform.hpp"
