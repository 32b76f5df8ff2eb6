#pragma once

#include "phononbus/chain.hpp"
#include "phononbus/dynamics.hpp"
#include "phononbus/effham.hpp"
#include "phononbus/hilbert.hpp"
#include "phononbus/schemes.hpp"
#include "phononbus/version.hpp"
