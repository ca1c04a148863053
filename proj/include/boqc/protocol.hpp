#pragma once

#include "boqc/protocol/engine.hpp"
#include "boqc/protocol/runs.hpp"
#include "boqc/protocol/setup.hpp"
