#pragma once

#include "fairqa/analysis.hpp"
#include "fairqa/driver.hpp"
#include "fairqa/error.hpp"
#include "fairqa/fixtures.hpp"
#include "fairqa/groundset.hpp"
#include "fairqa/io.hpp"
#include "fairqa/metrics.hpp"
#include "fairqa/model.hpp"
#include "fairqa/nqueens.hpp"
#include "fairqa/oracle.hpp"
#include "fairqa/perturb.hpp"
#include "fairqa/spin.hpp"
#include "fairqa/sqa.hpp"
#include "fairqa/transforms.hpp"
