#ifndef MAXSPEC_MAXSPEC_HPP
#define MAXSPEC_MAXSPEC_HPP

#include "maxspec/autoselect.hpp"
#include "maxspec/csv.hpp"
#include "maxspec/distributions.hpp"
#include "maxspec/errors.hpp"
#include "maxspec/estimator.hpp"
#include "maxspec/experiments.hpp"
#include "maxspec/generators.hpp"
#include "maxspec/hill.hpp"
#include "maxspec/regression.hpp"
#include "maxspec/rng.hpp"
#include "maxspec/sigma1.hpp"
#include "maxspec/sigma1_default.hpp"
#include "maxspec/spectrum.hpp"
#include "maxspec/stats.hpp"

#endif
