#ifndef HMODQUAD_HMODQUAD_HPP_
#define HMODQUAD_HMODQUAD_HPP_

#include "hmodquad/control.hpp"
#include "hmodquad/dynamics.hpp"
#include "hmodquad/errors.hpp"
#include "hmodquad/linalg.hpp"
#include "hmodquad/module_design.hpp"
#include "hmodquad/simulation.hpp"
#include "hmodquad/so3.hpp"
#include "hmodquad/structure.hpp"
#include "hmodquad/trajectory.hpp"

#endif  // HMODQUAD_HMODQUAD_HPP_
