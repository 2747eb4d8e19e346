/**
 * Everything in one include.
 */
#pragma once

#include "diffcech/bundles.hpp"
#include "diffcech/cohomology.hpp"
#include "diffcech/fixtures.hpp"
#include "diffcech/phi_psi.hpp"
#include "diffcech/star_cover.hpp"
