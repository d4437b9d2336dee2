#pragma once

#include "floqopt/bessel.hpp"
#include "floqopt/drive.hpp"
#include "floqopt/errors.hpp"
#include "floqopt/floquet.hpp"
#include "floqopt/io.hpp"
#include "floqopt/modes.hpp"
#include "floqopt/optimizer.hpp"
#include "floqopt/oracle.hpp"
#include "floqopt/parallel.hpp"
#include "floqopt/propagator.hpp"
#include "floqopt/scan.hpp"
#include "floqopt/system.hpp"
#include "floqopt/version.hpp"
