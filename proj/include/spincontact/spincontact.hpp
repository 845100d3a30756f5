#pragma once

#include "spincontact/errors.hpp"
#include "spincontact/random.hpp"
#include "spincontact/tensor_algebra.hpp"
#include "spincontact/models.hpp"
#include "spincontact/yang_baxter.hpp"
#include "spincontact/bethe.hpp"
#include "spincontact/spectra.hpp"
