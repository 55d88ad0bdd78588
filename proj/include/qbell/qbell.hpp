#pragma once

#include "qbell/appendix.hpp"
#include "qbell/bell.hpp"
#include "qbell/block_partition.hpp"
#include "qbell/channels.hpp"
#include "qbell/density.hpp"
#include "qbell/entropy.hpp"
#include "qbell/errors.hpp"
#include "qbell/linalg.hpp"
#include "qbell/optimize.hpp"
#include "qbell/random.hpp"
#include "qbell/tomography.hpp"
