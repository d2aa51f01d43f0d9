#pragma once

#include "factorlab/data_ingest.hpp"
#include "factorlab/date.hpp"
#include "factorlab/distributions.hpp"
#include "factorlab/error.hpp"
#include "factorlab/factor_models.hpp"
#include "factorlab/lstm.hpp"
#include "factorlab/matrix.hpp"
#include "factorlab/preprocess.hpp"
#include "factorlab/regression.hpp"
#include "factorlab/report.hpp"
