#pragma once

#include "abelianization.hpp"
#include "biset.hpp"
#include "borel_smith.hpp"
#include "burnside.hpp"
#include "complex.hpp"
#include "errors.hpp"
#include "fp_matrix.hpp"
#include "int_matrix.hpp"
#include "integer.hpp"
#include "perm_group.hpp"
#include "subgroup_lattice.hpp"
#include "superclass.hpp"
#include "surjectivity.hpp"
