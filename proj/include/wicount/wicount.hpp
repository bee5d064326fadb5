// Convenience umbrella header.

#ifndef WICOUNT_WICOUNT_HPP
#define WICOUNT_WICOUNT_HPP

#include "wicount/fingerprint.hpp"
#include "wicount/frame.hpp"
#include "wicount/parse.hpp"
#include "wicount/pcap.hpp"
#include "wicount/radiotap.hpp"
#include "wicount/report.hpp"
#include "wicount/scenario.hpp"
#include "wicount/simulate.hpp"
#include "wicount/synth.hpp"
#include "wicount/truesight.hpp"
#include "wicount/vision.hpp"

#endif  // WICOUNT_WICOUNT_HPP
