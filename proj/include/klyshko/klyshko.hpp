#pragma once

#include "klyshko/rational.hpp"
#include "klyshko/random.hpp"
#include "klyshko/parallel.hpp"
#include "klyshko/qstate.hpp"
#include "klyshko/symstate.hpp"
#include "klyshko/bellop.hpp"
#include "klyshko/criteria.hpp"
#include "klyshko/optimize.hpp"
#include "klyshko/certify.hpp"
#include "klyshko/io.hpp"
