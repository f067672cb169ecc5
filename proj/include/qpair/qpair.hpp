#pragma once

#include "qpair/channel.hpp"
#include "qpair/errors.hpp"
#include "qpair/information.hpp"
#include "qpair/matrix_core.hpp"
#include "qpair/pure_state.hpp"
#include "qpair/purification.hpp"
#include "qpair/state.hpp"
