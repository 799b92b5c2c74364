#pragma once

#include "errors.hpp"
#include "finite_field.hpp"
#include "finite_ring.hpp"
#include "trunc_ring.hpp"
#include "extension.hpp"
#include "quad_pair.hpp"
#include "matrix.hpp"
#include "cyclic_algebra.hpp"
#include "local_groups.hpp"
#include "local_tree.hpp"
#include "proximity.hpp"
#include "io.hpp"
#include "verify.hpp"
