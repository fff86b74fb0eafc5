#pragma once

#include "halin/closed_form.hpp"
#include "halin/conflict.hpp"
#include "halin/dp_cubic.hpp"
#include "halin/dp_general.hpp"
#include "halin/errors.hpp"
#include "halin/generators.hpp"
#include "halin/graph.hpp"
#include "halin/halin_graph.hpp"
#include "halin/io.hpp"
#include "halin/oracle.hpp"
#include "halin/pattern.hpp"
#include "halin/recolor.hpp"
#include "halin/rooted.hpp"
#include "halin/sei.hpp"
