#pragma once

#include "anisovoro/config.hpp"
#include "anisovoro/core.hpp"
#include "anisovoro/diagram.hpp"
#include "anisovoro/distance.hpp"
#include "anisovoro/grid.hpp"
#include "anisovoro/io.hpp"
#include "anisovoro/metric.hpp"
#include "anisovoro/net.hpp"
#include "anisovoro/parallel.hpp"
#include "anisovoro/sigma.hpp"
#include "anisovoro/spd.hpp"
#include "anisovoro/verify.hpp"
