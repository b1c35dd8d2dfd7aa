// Copyright 2026 The foodframe Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef FOODFRAME_DISTRIBUTIONS_H_
#define FOODFRAME_DISTRIBUTIONS_H_

namespace foodframe {

// Regularized incomplete beta I_x(a, b) by Lentz's continued fraction.
// Requires a > 0, b > 0 and x in [0, 1]; throws ContractViolation otherwise
// and NumericError if the fraction fails to converge.
double RegularizedIncompleteBeta(double a, double b, double x);

// P(|T| >= |t|) for Student's t with dof degrees of freedom (dof > 0).
double StudentTTwoSidedP(double t, double dof);

// Value q > 0 with StudentTTwoSidedP(q, dof) == alpha, by bisection.
double StudentTQuantileTwoSided(double alpha, double dof);

// P(|Z| >= |z|) for a standard normal.
double NormalTwoSidedP(double z);

}  // namespace foodframe

#endif  // FOODFRAME_DISTRIBUTIONS_H_
