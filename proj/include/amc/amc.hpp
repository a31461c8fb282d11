#pragma once

// Umbrella header for the AMC pipeline: modulation, MIMO channel, histogram
// mutual-information features, classifiers, experiments and capture I/O.

#include "capture.hpp"
#include "channel.hpp"
#include "classifier.hpp"
#include "csv.hpp"
#include "dataset.hpp"
#include "experiment.hpp"
#include "histogram.hpp"
#include "information.hpp"
#include "knn.hpp"
#include "modulation.hpp"
#include "rng.hpp"
#include "standardize.hpp"
#include "svm.hpp"
