#pragma once

#include "deblur/blur.hpp"
#include "deblur/errors.hpp"
#include "deblur/io.hpp"
#include "deblur/kernels.hpp"
#include "deblur/lcurve.hpp"
#include "deblur/linalg.hpp"
#include "deblur/matrix.hpp"
#include "deblur/noise.hpp"
#include "deblur/regularize.hpp"
#include "deblur/svd_analysis.hpp"
#include "deblur/upc.hpp"
