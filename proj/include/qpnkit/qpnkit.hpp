#pragma once

#include "errors.hpp"
#include "fields.hpp"
#include "functor.hpp"
#include "graded.hpp"
#include "hompoly.hpp"
#include "koszul.hpp"
#include "monomial.hpp"
#include "script.hpp"
#include "target.hpp"
#include "upoly.hpp"
