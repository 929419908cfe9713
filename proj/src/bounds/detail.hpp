#pragma once

#include <initializer_list>
#include <string>

#include "gibbscert/bounds.hpp"

namespace gibbscert::detail {

std::string num(double v);

// Eigenfunctions of each summary followed by opts.trials random functions.
Mat battery(std::initializer_list<const Summary*> summaries, const Dist& w, const CheckOptions& opts);

// Solves (I - K + 1 w^T) g = f for every column at once; columns must be centered.
Vec asymptotic_variances(const Pair& rev, const Summary& summary, const Mat& centered);

Vec norms_sq(const Dist& w, const Mat& functions);

// Worst column of lhs <= rhs. With `relative`, the tolerance scales by max(1, |rhs|) and
// the worst column is the one with the smallest scaled slack.
BoundReport worst_of(const std::string& name, const Vec& lhs, const Vec& rhs, double tol,
                     bool relative = false);

std::string t_suffix(int t);

}  // namespace gibbscert::detail
