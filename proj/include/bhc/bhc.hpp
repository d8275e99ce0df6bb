#pragma once

#include "bhc/codebook.hpp"
#include "bhc/fringe.hpp"
#include "bhc/io.hpp"
#include "bhc/linspace.hpp"
#include "bhc/model.hpp"
#include "bhc/oracle.hpp"
#include "bhc/packmerge.hpp"
#include "bhc/rational.hpp"
#include "bhc/solver.hpp"
