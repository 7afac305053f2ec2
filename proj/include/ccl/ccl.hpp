#pragma once

#include "ccl/barriers.hpp"
#include "ccl/comparison.hpp"
#include "ccl/config.hpp"
#include "ccl/disk_oracle.hpp"
#include "ccl/elliptic.hpp"
#include "ccl/errors.hpp"
#include "ccl/experiment.hpp"
#include "ccl/export_io.hpp"
#include "ccl/grid.hpp"
#include "ccl/hypotheses.hpp"
#include "ccl/iteration.hpp"
#include "ccl/model.hpp"
#include "ccl/verification.hpp"
