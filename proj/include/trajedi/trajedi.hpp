#ifndef TRAJEDI_TRAJEDI_HPP
#define TRAJEDI_TRAJEDI_HPP

#include "trajedi/calibration.hpp"
#include "trajedi/csv.hpp"
#include "trajedi/distance_matrix.hpp"
#include "trajedi/dtw.hpp"
#include "trajedi/dtw_oracle.hpp"
#include "trajedi/errors.hpp"
#include "trajedi/evaluation.hpp"
#include "trajedi/experiment.hpp"
#include "trajedi/grid.hpp"
#include "trajedi/parallel.hpp"
#include "trajedi/rng.hpp"
#include "trajedi/scheme.hpp"
#include "trajedi/synthetic.hpp"
#include "trajedi/trajectory.hpp"

#endif // TRAJEDI_TRAJEDI_HPP
