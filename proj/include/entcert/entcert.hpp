#pragma once

#include "entcert/linalg.hpp"
#include "entcert/rng.hpp"
#include "entcert/types.hpp"
#include "entcert/states.hpp"
#include "entcert/measurements.hpp"
#include "entcert/correlation.hpp"
#include "entcert/bell.hpp"
#include "entcert/seesaw.hpp"
#include "entcert/fidelity.hpp"
#include "entcert/purity.hpp"
#include "entcert/entanglement.hpp"
#include "entcert/io.hpp"
#include "entcert/catalog.hpp"
#include "entcert/pipeline.hpp"
