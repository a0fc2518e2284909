#pragma once

#include <borel/decomposition.hpp>
#include <borel/envelope.hpp>
#include <borel/errors.hpp>
#include <borel/field.hpp>
#include <borel/flag.hpp>
#include <borel/linalg.hpp>
#include <borel/matrix.hpp>
#include <borel/permutation.hpp>
#include <borel/random.hpp>
#include <borel/subspace.hpp>
