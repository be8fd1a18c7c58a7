//
// Copyright 2026 The Synthpriv Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#ifndef SYNTHPRIV_STATISTICS_H_
#define SYNTHPRIV_STATISTICS_H_

#include <span>
#include <vector>

namespace synthpriv {

double Mean(std::span<const double> values);

// Sample standard deviation (n - 1 denominator); 0 for fewer than 2 values.
double StdDev(std::span<const double> values);

// Linear interpolation between order statistics at position q * (n - 1).
double Quantile(std::span<const double> values, double q);
double QuantileSorted(std::span<const double> sorted, double q);

// Ranks 1..n, ties receive the average of the ranks they span.
std::vector<double> MidRanks(std::span<const double> values);

double NormalCdf(double x);
double NormalQuantile(double p);

// Pearson correlation; 0 when either input has zero variance.
double PearsonCorrelation(std::span<const double> x,
                          std::span<const double> y);

// Two-sample Kolmogorov-Smirnov statistic: exact supremum of the ECDF
// difference over all merged sample points.
double KsStatistic(std::span<const double> a, std::span<const double> b);

// Relative frequency of each code in [0, num_categories).
std::vector<double> CategoryFrequencies(std::span<const int> codes,
                                        int num_categories);

// Half the L1 distance between two distributions of equal length.
double TotalVariation(std::span<const double> p, std::span<const double> q);

// Area under the ROC curve for "positive scores higher", by the
// Mann-Whitney rank-sum with midranks for ties.
double RocAuc(std::span<const double> positive_scores,
              std::span<const double> negative_scores);

}  // namespace synthpriv

#endif  // SYNTHPRIV_STATISTICS_H_
