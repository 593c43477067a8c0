#pragma once

#include "spectra/error.hpp"
#include "spectra/graph.hpp"
#include "spectra/builders.hpp"
#include "spectra/random_regular.hpp"
#include "spectra/dense_matrix.hpp"
#include "spectra/operator.hpp"
#include "spectra/eigensolve.hpp"
#include "spectra/spectrum.hpp"
#include "spectra/canonical.hpp"
#include "spectra/rlimits.hpp"
#include "spectra/jacobi.hpp"
#include "spectra/herglotz.hpp"
#include "spectra/localization.hpp"
#include "spectra/graph_json.hpp"
#include "spectra/experiments.hpp"
