#pragma once

/// \file
/// Umbrella header.

#include "exactla.hpp"
#include "freealg.hpp"
#include "jets.hpp"
#include "json_io.hpp"
#include "metriclab.hpp"
#include "multiset.hpp"
#include "poly_end.hpp"
#include "rational.hpp"
#include "series.hpp"
#include "tensor.hpp"
#include "verify.hpp"
