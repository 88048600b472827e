#pragma once

#include "transfinite/bss_value.hpp"
#include "transfinite/cycle_detector.hpp"
#include "transfinite/delta_lab.hpp"
#include "transfinite/enumerate.hpp"
#include "transfinite/error.hpp"
#include "transfinite/ibssm.hpp"
#include "transfinite/ittm.hpp"
#include "transfinite/limit_engine.hpp"
#include "transfinite/machines.hpp"
#include "transfinite/ordinal.hpp"
#include "transfinite/otm.hpp"
#include "transfinite/program.hpp"
#include "transfinite/rational.hpp"
#include "transfinite/snapshot.hpp"
#include "transfinite/tape.hpp"
#include "transfinite/torus.hpp"
#include "transfinite/trace.hpp"
#include "transfinite/translate.hpp"
