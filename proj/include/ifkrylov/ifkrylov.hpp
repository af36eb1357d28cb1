#pragma once

#include <ifkrylov/analysis.hpp>
#include <ifkrylov/dense_eig.hpp>
#include <ifkrylov/driver.hpp>
#include <ifkrylov/experiment.hpp>
#include <ifkrylov/matrix_market.hpp>
#include <ifkrylov/momentum.hpp>
#include <ifkrylov/pencil.hpp>
#include <ifkrylov/problems.hpp>
#include <ifkrylov/sparse_sym.hpp>
#include <ifkrylov/subspace.hpp>
