#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <istream>
#include <string>
#include <vector>

#include "cloudprice/model.hpp"

namespace cloudprice {

/// One task's usage in one time interval.
struct TaskRecord {
  std::int64_t time = 0;
  std::string job_id;
  std::string task_id;
  double cpu = 0.0;
  double mem = 0.0;
};

/// CSV with header `time,job_id,task_id,cpu,mem`. Errors carry "<source>:<line>: ...".
std::vector<TaskRecord> parse_trace(std::istream& in, const std::string& source = "trace");
std::vector<TaskRecord> parse_trace_file(const std::filesystem::path& path);

/// Resource totals of one job over all its tasks and intervals.
struct JobUsage {
  std::string job_id;
  double cpu = 0.0;
  double mem = 0.0;
};

/// Per-job totals, ordered by job id so the result does not depend on row order.
std::vector<JobUsage> aggregate(const std::vector<TaskRecord>& records);

struct UsageStats {
  std::size_t jobs = 0;
  double mean_cpu = 0.0;
  double mean_mem = 0.0;
  double std_cpu = 0.0;  // population standard deviation
  double std_mem = 0.0;
};

UsageStats usage_stats(const std::vector<JobUsage>& jobs);

/// Keeps jobs whose cpu and mem totals both lie within k_std deviations of the mean.
std::vector<JobUsage> filter_outliers(const std::vector<JobUsage>& jobs, const UsageStats& stats,
                                      double k_std);

/// aggregate, then filter_outliers against statistics of the unfiltered totals.
std::vector<JobUsage> aggregate_and_filter(const std::vector<TaskRecord>& records,
                                           double k_std = 1.0);

using Point = std::vector<double>;

struct ClusterModel {
  std::vector<Point> centroids;
  std::vector<std::size_t> counts;
  std::vector<std::size_t> assignment;  // cluster of each input point
  double inertia = 0.0;                 // sum of squared distances to assigned centroids
  std::vector<double> history;          // inertia after each assignment step of the best run
  std::vector<double> restart_inertia;  // final inertia of every restart
  std::size_t best_restart = 0;
  std::uint64_t seed = 0;
};

struct KMeansOptions {
  std::size_t k = 3;
  std::size_t restarts = 30;
  std::uint64_t seed = 1;
  std::size_t max_iterations = 300;
};

/// Lloyd's algorithm from k-means++ seeds, best of `restarts` runs (ties keep the lowest
/// restart index). An emptied cluster keeps its previous centroid. Throws InputError
/// when there are fewer distinct points than k.
ClusterModel kmeans(const std::vector<Point>& points, const KMeansOptions& options);

std::vector<Point> job_points(const std::vector<JobUsage>& jobs);

/// Centroids become the requirement vectors of the user types.
Instance build_instance(const ClusterModel& model, const std::vector<double>& capacities,
                        double gamma, const std::vector<double>& alphas,
                        const std::vector<double>& cs, const std::vector<int>& counts,
                        const std::vector<std::string>& resource_names = {"cpu", "mem"});

/// `cluster_id,centroid_cpu,centroid_mem,count` rows, clusters numbered from 1.
std::string cluster_report_csv(const ClusterModel& model);

}  // namespace cloudprice
