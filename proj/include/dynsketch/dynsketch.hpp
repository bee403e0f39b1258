#pragma once

// Dynamic graph sketching: compress a static graph with k terminals into a
// compact summary that answers matching, cut, connectivity, spanning-tree and
// shortest-path queries for any set of edges later inserted between the
// terminals.

#include "dynsketch/container.hpp"
#include "dynsketch/cut.hpp"
#include "dynsketch/errors.hpp"
#include "dynsketch/field.hpp"
#include "dynsketch/fixtures.hpp"
#include "dynsketch/graph.hpp"
#include "dynsketch/matching.hpp"
#include "dynsketch/matrix.hpp"
#include "dynsketch/mst.hpp"
#include "dynsketch/oracles.hpp"
#include "dynsketch/path.hpp"
#include "dynsketch/random_graphs.hpp"
#include "dynsketch/stconn.hpp"
