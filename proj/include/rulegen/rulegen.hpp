#pragma once

#include <rulegen/catalogue.hpp>
#include <rulegen/chr.hpp>
#include <rulegen/combinations.hpp>
#include <rulegen/error.hpp>
#include <rulegen/inclusion.hpp>
#include <rulegen/io.hpp>
#include <rulegen/native_format.hpp>
#include <rulegen/oracle.hpp>
#include <rulegen/problem.hpp>
#include <rulegen/propagation.hpp>
#include <rulegen/relation.hpp>
#include <rulegen/rules.hpp>
#include <rulegen/search.hpp>
#include <rulegen/verify.hpp>
