#pragma once

#include "gieseker/correspondence.hpp"
#include "gieseker/invariance.hpp"
#include "gieseker/jobs.hpp"
#include "gieseker/json_io.hpp"
#include "gieseker/random.hpp"
#include "gieseker/version.hpp"
