#pragma once

#include "vfwalk/errors.hpp"
#include "vfwalk/matkit.hpp"
#include "vfwalk/embedding.hpp"
#include "vfwalk/incidence.hpp"
#include "vfwalk/walk.hpp"
#include "vfwalk/spectra.hpp"
#include "vfwalk/hamiltonian.hpp"
#include "vfwalk/covers.hpp"
#include "vfwalk/dynamics.hpp"
