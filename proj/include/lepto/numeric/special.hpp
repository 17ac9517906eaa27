// Copyright 2026 The lepto authors
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

#ifndef LEPTO_NUMERIC_SPECIAL_HPP
#define LEPTO_NUMERIC_SPECIAL_HPP

namespace lepto {

double norm_pdf(double x);
double norm_cdf(double x);
// Inverse of norm_cdf, accurate to full double precision (rational initial
// guess plus one Halley correction).
double norm_quantile(double u);

// Regularized lower/upper incomplete gamma P(a, x), Q(a, x).
double gamma_p(double a, double x);
double gamma_q(double a, double x);

// Chi-square survival function with df degrees of freedom.
double chisq_sf(double x, double df);

double log_factorial(int n);
double log_choose(int n, int k);
double choose(int n, int k);

}  // namespace lepto

#endif  // LEPTO_NUMERIC_SPECIAL_HPP
