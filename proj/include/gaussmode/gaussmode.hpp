#pragma once

/// Umbrella header: exact gaussian-state toolkit for two harmonic modes
/// coupled by an angular-momentum term, plus the brute-force number-basis
/// cross-check.

#define GAUSSMODE_VERSION_MAJOR 1
#define GAUSSMODE_VERSION_MINOR 0
#define GAUSSMODE_VERSION_PATCH 0
#define GAUSSMODE_VERSION "1.0.0"

#include "gaussmode/errors.hpp"
#include "gaussmode/model.hpp"
#include "gaussmode/spectral.hpp"
#include "gaussmode/covariance.hpp"
#include "gaussmode/measures.hpp"
#include "gaussmode/discord.hpp"
#include "gaussmode/thermo.hpp"
#include "gaussmode/fock.hpp"
#include "gaussmode/io.hpp"
