#pragma once

#include "discodep/edu_align.hpp"
#include "discodep/error.hpp"
#include "discodep/export_io.hpp"
#include "discodep/metrics.hpp"
#include "discodep/model.hpp"
#include "discodep/parallel.hpp"
#include "discodep/pdtb2dep.hpp"
#include "discodep/pdtb_reader.hpp"
#include "discodep/rst2dep.hpp"
#include "discodep/rst_reader.hpp"
#include "discodep/text.hpp"
