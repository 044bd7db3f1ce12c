#pragma once

#include "gxwt/analysis.hpp"
#include "gxwt/contrib.hpp"
#include "gxwt/cross_transform.hpp"
#include "gxwt/cwt.hpp"
#include "gxwt/error.hpp"
#include "gxwt/gridfile.hpp"
#include "gxwt/series.hpp"
#include "gxwt/simgen.hpp"
#include "gxwt/svg.hpp"
