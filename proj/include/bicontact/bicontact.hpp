#pragma once

/// @file bicontact.hpp
/// Everything except the command-line layer.

#include "bicontact/errors.hpp"
#include "bicontact/dual.hpp"
#include "bicontact/chart.hpp"
#include "bicontact/field.hpp"
#include "bicontact/forms.hpp"
#include "bicontact/expression.hpp"
#include "bicontact/chart_map.hpp"
#include "bicontact/profile.hpp"
#include "bicontact/grid.hpp"
#include "bicontact/flow.hpp"
#include "bicontact/contact.hpp"
#include "bicontact/models.hpp"
#include "bicontact/surgery.hpp"
#include "bicontact/fh_surgery.hpp"
#include "bicontact/slope.hpp"
#include "bicontact/goodman.hpp"
#include "bicontact/report.hpp"
