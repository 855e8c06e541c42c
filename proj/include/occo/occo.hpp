#pragma once

#include "occo/error.hpp"
#include "occo/date.hpp"
#include "occo/ids.hpp"
#include "occo/schema.hpp"
#include "occo/graph.hpp"
#include "occo/graph_io.hpp"
#include "occo/validity.hpp"
#include "occo/ctdl.hpp"
#include "occo/matcher.hpp"
#include "occo/json_codec.hpp"
#include "occo/registry_store.hpp"
#include "occo/service.hpp"
#include "occo/cli.hpp"
