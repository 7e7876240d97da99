#pragma once

#include "evolflow/curves.hpp"
#include "evolflow/error.hpp"
#include "evolflow/evoalg.hpp"
#include "evolflow/flows.hpp"
#include "evolflow/generator.hpp"
#include "evolflow/lie.hpp"
#include "evolflow/markov.hpp"
#include "evolflow/matcore.hpp"
#include "evolflow/ode.hpp"
