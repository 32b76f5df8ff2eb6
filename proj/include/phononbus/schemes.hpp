#pragma once

#include "phononbus/schemes/crot.hpp"
#include "phononbus/schemes/dhm.hpp"
#include "phononbus/schemes/heating.hpp"
#include "phononbus/schemes/kick.hpp"
#include "phononbus/schemes/ms.hpp"
#include "phononbus/schemes/spectator.hpp"
#include "phononbus/schemes/stirap.hpp"
#include "phononbus/schemes/types.hpp"
