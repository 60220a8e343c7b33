#pragma once

// Stability analysis of matrix-valued Markovian switching systems with a
// constant transition sign matrix: admissible-word combinatorics, the
// {0,1}-matrix lift, constrained joint spectral radius bounds, and Monte
// Carlo Lyapunov-exponent estimation.

#include "cjsr/eigen.hpp"
#include "cjsr/error.hpp"
#include "cjsr/io.hpp"
#include "cjsr/jsr.hpp"
#include "cjsr/lift.hpp"
#include "cjsr/markov.hpp"
#include "cjsr/matrix.hpp"
#include "cjsr/report.hpp"
#include "cjsr/rng.hpp"
#include "cjsr/subshift.hpp"
#include "cjsr/version.hpp"
