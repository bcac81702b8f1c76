#pragma once

#include "abphase/core/errors.hpp"
#include "abphase/core/vec3.hpp"
#include "abphase/numerics/elliptic.hpp"
#include "abphase/numerics/quad_options.hpp"
#include "abphase/numerics/quadrature.hpp"
#include "abphase/numerics/vector_calculus.hpp"
#include "abphase/em/solenoid.hpp"
#include "abphase/em/repair_flags.hpp"
#include "abphase/em/gauge.hpp"
#include "abphase/em/potential.hpp"
#include "abphase/em/charge_fields.hpp"
#include "abphase/phase/path.hpp"
#include "abphase/phase/phase.hpp"
#include "abphase/energies/energies.hpp"
