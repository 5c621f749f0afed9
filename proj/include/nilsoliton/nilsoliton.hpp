#pragma once

#include "nilsoliton/algebra.hpp"
#include "nilsoliton/catalog.hpp"
#include "nilsoliton/cohomology.hpp"
#include "nilsoliton/curvature.hpp"
#include "nilsoliton/derivations.hpp"
#include "nilsoliton/nice_basis.hpp"
#include "nilsoliton/pre_einstein.hpp"
#include "nilsoliton/radical.hpp"
#include "nilsoliton/report.hpp"
#include "nilsoliton/soliton_search.hpp"
