#pragma once

// Straightforward serial implementations of the exact Ising quantities and
// the greedy packing. They share no code with the optimized paths and serve
// as their test oracle and benchmark baseline.

#include <vector>

#include "mml/ising.hpp"
#include "mml/packing.hpp"

namespace mml::reference {

double hamiltonian(const IsingModel& model, const std::vector<int>& x);
double log_partition(const IsingModel& model);
std::vector<double> pmf(const IsingModel& model);
double tv_exact(const IsingModel& p, const IsingModel& q);
double kl_exact(const IsingModel& p, const IsingModel& q);
double quadratic_form_moment(const Matrix& w, int k);
double exp_moment(const Matrix& w, double t);

// Candidate-by-candidate greedy over all 2^m integers with a coverage bitmap.
// m <= 30.
SignPacking greedy_packing(int m);

}  // namespace mml::reference
