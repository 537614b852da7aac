#pragma once

#include "ltd/discovery.hpp"
#include "ltd/error.hpp"
#include "ltd/matcher.hpp"
#include "ltd/ontology.hpp"
#include "ltd/rdf.hpp"
#include "ltd/table.hpp"
#include "ltd/text.hpp"
#include "ltd/version.hpp"
