#pragma once

#include "smallset/bound.hpp"
#include "smallset/calculus.hpp"
#include "smallset/counterexample.hpp"
#include "smallset/decompose.hpp"
#include "smallset/dyadic.hpp"
#include "smallset/error.hpp"
#include "smallset/hitting.hpp"
#include "smallset/nullrep.hpp"
#include "smallset/oracle.hpp"
#include "smallset/parallel.hpp"
#include "smallset/rep.hpp"
#include "smallset/splitmix.hpp"
#include "smallset/word.hpp"
