#pragma once

#include "fracdyn/numkit/eigen.hpp"
#include "fracdyn/numkit/gamma.hpp"
#include "fracdyn/numkit/matrix.hpp"
#include "fracdyn/numkit/mittag_leffler.hpp"
#include "fracdyn/numkit/polynomial.hpp"
