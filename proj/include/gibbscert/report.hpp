#pragma once

#include <string>

namespace gibbscert {

enum class Status { pass, fail, hypothesis_unmet };

inline const char* to_string(Status s) {
  switch (s) {
    case Status::pass: return "pass";
    case Status::fail: return "fail";
    case Status::hypothesis_unmet: return "hypothesis_unmet";
  }
  return "fail";
}

// One certified inequality lhs <= rhs. pass <=> slack >= -tol.
struct BoundReport {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;
  bool pass = false;
  Status status = Status::fail;
  double tol = 1e-9;
  std::string witness;
  std::string fingerprint;
};

inline BoundReport certify_leq(std::string name, double lhs, double rhs, double tol,
                               std::string witness = {}) {
  BoundReport r;
  r.name = std::move(name);
  r.lhs = lhs;
  r.rhs = rhs;
  r.slack = rhs - lhs;
  r.tol = tol;
  r.pass = r.slack >= -tol;
  r.status = r.pass ? Status::pass : Status::fail;
  r.witness = std::move(witness);
  return r;
}

// A theorem whose hypothesis lhs <= rhs does not hold: never a failure of the bound.
inline BoundReport hypothesis_unmet(std::string name, double lhs, double rhs, double tol,
                                    std::string why) {
  BoundReport r = certify_leq(std::move(name), lhs, rhs, tol, std::move(why));
  r.status = Status::hypothesis_unmet;
  return r;
}

}  // namespace gibbscert
