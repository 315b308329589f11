#pragma once

#include "tagforge/address.hpp"
#include "tagforge/arc_label.hpp"
#include "tagforge/dependency.hpp"
#include "tagforge/derivation.hpp"
#include "tagforge/error.hpp"
#include "tagforge/export.hpp"
#include "tagforge/grammar.hpp"
#include "tagforge/grammar_io.hpp"
#include "tagforge/parser.hpp"
#include "tagforge/script_io.hpp"
#include "tagforge/syntagm.hpp"
#include "tagforge/tree.hpp"
