// Exact evaluation of PTL formulas on ultimately periodic words.
#pragma once

#include "tdlite/ptl/formula.hpp"
#include "tdlite/ptl/upword.hpp"

namespace tdlite::ptl {

// Truth of f at instant n of w (exact, fixpoint-based on the loops).
bool eval_up(const F& f, const UPWord& w, long n = 0);

// Reference evaluator that looks ahead/behind a fixed bounded distance,
// treating 'until'/'since' as false past the horizon. Used to cross-check
// eval_up; sound only when the horizon covers the relevant fulfilments.
bool eval_bounded(const F& f, const UPWord& w, long n, long horizon);

}  // namespace tdlite::ptl
