#pragma once

#include "fracdyn/abm.hpp"
#include "fracdyn/error.hpp"
#include "fracdyn/format.hpp"
#include "fracdyn/io/config.hpp"
#include "fracdyn/io/csv.hpp"
#include "fracdyn/io/svg.hpp"
#include "fracdyn/maxwell_bloch.hpp"
#include "fracdyn/numkit.hpp"
#include "fracdyn/registry.hpp"
#include "fracdyn/stability.hpp"
#include "fracdyn/system.hpp"
