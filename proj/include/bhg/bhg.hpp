#pragma once

#include "bhg/analysis.hpp"
#include "bhg/digitsets.hpp"
#include "bhg/errors.hpp"
#include "bhg/explicit.hpp"
#include "bhg/natural.hpp"
#include "bhg/packing.hpp"
#include "bhg/randmodel.hpp"
#include "bhg/repcount.hpp"
#include "bhg/report_json.hpp"
#include "bhg/sequence.hpp"
#include "bhg/varbase.hpp"
