#pragma once

#include "catreg/association.hpp"
#include "catreg/bootstrap.hpp"
#include "catreg/error.hpp"
#include "catreg/estimators.hpp"
#include "catreg/hypothesis.hpp"
#include "catreg/io.hpp"
#include "catreg/mutual_information.hpp"
#include "catreg/normal.hpp"
#include "catreg/rng.hpp"
#include "catreg/table.hpp"
