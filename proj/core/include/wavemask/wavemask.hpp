#pragma once

#include "wavemask/error.hpp"
#include "wavemask/lp.hpp"
#include "wavemask/mask.hpp"
#include "wavemask/microdata.hpp"
#include "wavemask/signal.hpp"
#include "wavemask/wavelet.hpp"
#include "wavemask/wrm.hpp"
