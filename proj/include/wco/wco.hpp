#pragma once

#include "wco/discfunction.hpp"
#include "wco/errors.hpp"
#include "wco/estimators.hpp"
#include "wco/exponent.hpp"
#include "wco/funcspace.hpp"
#include "wco/kernels.hpp"
#include "wco/measures.hpp"
#include "wco/report.hpp"
#include "wco/scenario.hpp"
#include "wco/smoothing.hpp"
#include "wco/truncation.hpp"
#include "wco/version.hpp"
