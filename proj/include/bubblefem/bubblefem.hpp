#pragma once

#include "bubblefem/bench.hpp"
#include "bubblefem/config.hpp"
#include "bubblefem/galerkin.hpp"
#include "bubblefem/hp_dofmap.hpp"
#include "bubblefem/hpfem.hpp"
#include "bubblefem/mesh.hpp"
#include "bubblefem/polybasis.hpp"
#include "bubblefem/problems.hpp"
#include "bubblefem/rfb_local.hpp"
#include "bubblefem/solution.hpp"
#include "bubblefem/solver.hpp"
#include "bubblefem/sparse.hpp"
