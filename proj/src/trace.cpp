#include "cloudprice/trace.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <tuple>

#include "cloudprice/error.hpp"

namespace cloudprice {

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    out.push_back(trim(std::string_view(line).substr(start, comma - start)));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

template <typename T>
bool parse_number(const std::string& s, T& value) {
  const char* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, value);
  return ec == std::errc() && ptr == end;
}

// Uniform double in [0, 1) from the raw engine output, identical on every platform.
double unit(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

double squared_distance(const Point& a, const Point& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d += (a[i] - b[i]) * (a[i] - b[i]);
  return d;
}

struct Run {
  std::vector<Point> centroids;
  std::vector<std::size_t> assignment;
  std::vector<double> history;
  double inertia = 0.0;
};

std::vector<Point> seed_centroids(const std::vector<Point>& points, std::size_t k,
                                  std::mt19937_64& rng) {
  std::vector<Point> centroids;
  centroids.push_back(points[static_cast<std::size_t>(unit(rng) * points.size())]);
  std::vector<double> d2(points.size());
  while (centroids.size() < k) {
    double total = 0.0;
    for (std::size_t p = 0; p < points.size(); ++p) {
      double best = std::numeric_limits<double>::infinity();
      for (const auto& c : centroids) best = std::min(best, squared_distance(points[p], c));
      d2[p] = best;
      total += best;
    }
    // total > 0 because at least k distinct points exist.
    double target = unit(rng) * total;
    std::size_t pick = points.size() - 1;
    for (std::size_t p = 0; p < points.size(); ++p) {
      if (d2[p] <= 0.0) continue;
      if (target < d2[p]) {
        pick = p;
        break;
      }
      target -= d2[p];
    }
    while (d2[pick] <= 0.0) --pick;  // rounding fell off the end
    centroids.push_back(points[pick]);
  }
  return centroids;
}

Run lloyd(const std::vector<Point>& points, std::vector<Point> centroids,
          std::size_t max_iterations) {
  const std::size_t k = centroids.size();
  const std::size_t dim = points.front().size();
  Run run;
  run.assignment.assign(points.size(), k);
  for (std::size_t iter = 0; iter < max_iterations; ++iter) {
    bool changed = false;
    double inertia = 0.0;
    for (std::size_t p = 0; p < points.size(); ++p) {
      std::size_t best = 0;
      double best_d = squared_distance(points[p], centroids[0]);
      for (std::size_t c = 1; c < k; ++c) {
        const double d = squared_distance(points[p], centroids[c]);
        if (d < best_d) {
          best_d = d;
          best = c;
        }
      }
      changed = changed || run.assignment[p] != best;
      run.assignment[p] = best;
      inertia += best_d;
    }
    run.history.push_back(inertia);
    run.inertia = inertia;
    if (!changed) break;

    std::vector<Point> sums(k, Point(dim, 0.0));
    std::vector<std::size_t> sizes(k, 0);
    for (std::size_t p = 0; p < points.size(); ++p) {
      const std::size_t c = run.assignment[p];
      ++sizes[c];
      for (std::size_t i = 0; i < dim; ++i) sums[c][i] += points[p][i];
    }
    for (std::size_t c = 0; c < k; ++c) {
      if (sizes[c] == 0) continue;
      for (std::size_t i = 0; i < dim; ++i) centroids[c][i] = sums[c][i] / sizes[c];
    }
  }
  run.centroids = std::move(centroids);
  return run;
}

}  // namespace

std::vector<TaskRecord> parse_trace(std::istream& in, const std::string& source) {
  std::string line;
  std::size_t line_no = 0;
  auto fail = [&](const std::string& msg) {
    throw InputError(source + ":" + std::to_string(line_no) + ": " + msg);
  };

  bool header = false;
  while (!header && std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto cols = split(line);
    if (cols != std::vector<std::string>{"time", "job_id", "task_id", "cpu", "mem"}) {
      fail("expected header 'time,job_id,task_id,cpu,mem'");
    }
    header = true;
  }
  if (!header) {
    line_no = 0;
    fail("missing header 'time,job_id,task_id,cpu,mem'");
  }

  std::vector<TaskRecord> records;
  std::set<std::tuple<std::string, std::string, std::int64_t>> seen;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto cols = split(line);
    if (cols.size() != 5) fail("expected 5 fields, got " + std::to_string(cols.size()));
    TaskRecord r;
    if (!parse_number(cols[0], r.time)) fail("time '" + cols[0] + "' is not an integer");
    r.job_id = cols[1];
    r.task_id = cols[2];
    if (r.job_id.empty() || r.task_id.empty()) fail("job_id and task_id must be non-empty");
    if (!parse_number(cols[3], r.cpu) || !std::isfinite(r.cpu)) {
      fail("cpu '" + cols[3] + "' is not a number");
    }
    if (!parse_number(cols[4], r.mem) || !std::isfinite(r.mem)) {
      fail("mem '" + cols[4] + "' is not a number");
    }
    if (r.cpu < 0.0) fail("cpu must be >= 0");
    if (r.mem < 0.0) fail("mem must be >= 0");
    if (!seen.emplace(r.job_id, r.task_id, r.time).second) {
      fail("duplicate record for job " + r.job_id + ", task " + r.task_id + ", time " +
           std::to_string(r.time));
    }
    records.push_back(std::move(r));
  }
  return records;
}

std::vector<TaskRecord> parse_trace_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open trace '" + path.string() + "'");
  return parse_trace(in, path.filename().string());
}

std::vector<JobUsage> aggregate(const std::vector<TaskRecord>& records) {
  std::map<std::string, JobUsage> jobs;
  for (const auto& r : records) {
    auto& j = jobs[r.job_id];
    j.job_id = r.job_id;
    j.cpu += r.cpu;
    j.mem += r.mem;
  }
  std::vector<JobUsage> out;
  out.reserve(jobs.size());
  for (auto& [id, usage] : jobs) out.push_back(usage);
  return out;
}

UsageStats usage_stats(const std::vector<JobUsage>& jobs) {
  UsageStats s;
  s.jobs = jobs.size();
  if (jobs.empty()) return s;
  for (const auto& j : jobs) {
    s.mean_cpu += j.cpu;
    s.mean_mem += j.mem;
  }
  s.mean_cpu /= jobs.size();
  s.mean_mem /= jobs.size();
  for (const auto& j : jobs) {
    s.std_cpu += (j.cpu - s.mean_cpu) * (j.cpu - s.mean_cpu);
    s.std_mem += (j.mem - s.mean_mem) * (j.mem - s.mean_mem);
  }
  s.std_cpu = std::sqrt(s.std_cpu / jobs.size());
  s.std_mem = std::sqrt(s.std_mem / jobs.size());
  return s;
}

std::vector<JobUsage> filter_outliers(const std::vector<JobUsage>& jobs, const UsageStats& stats,
                                      double k_std) {
  if (!(k_std >= 0.0)) throw InputError("k_std must be >= 0");
  std::vector<JobUsage> kept;
  for (const auto& j : jobs) {
    if (std::abs(j.cpu - stats.mean_cpu) <= k_std * stats.std_cpu &&
        std::abs(j.mem - stats.mean_mem) <= k_std * stats.std_mem) {
      kept.push_back(j);
    }
  }
  return kept;
}

std::vector<JobUsage> aggregate_and_filter(const std::vector<TaskRecord>& records, double k_std) {
  const auto jobs = aggregate(records);
  return filter_outliers(jobs, usage_stats(jobs), k_std);
}

ClusterModel kmeans(const std::vector<Point>& points, const KMeansOptions& options) {
  if (options.k < 1) throw InputError("k must be >= 1");
  if (options.restarts < 1) throw InputError("restarts must be >= 1");
  if (options.max_iterations < 1) throw InputError("max_iterations must be >= 1");
  if (points.empty()) throw InputError("no points to cluster");
  const std::size_t dim = points.front().size();
  for (const auto& p : points) {
    if (p.size() != dim) throw InputError("points differ in dimension");
    for (double v : p) {
      if (!std::isfinite(v)) throw InputError("points must be finite");
    }
  }
  const std::set<Point> distinct(points.begin(), points.end());
  if (distinct.size() < options.k) {
    throw InputError("k = " + std::to_string(options.k) + " exceeds the " +
                     std::to_string(distinct.size()) + " distinct points");
  }

  ClusterModel model;
  model.seed = options.seed;
  Run best;
  for (std::size_t r = 0; r < options.restarts; ++r) {
    std::seed_seq seq{static_cast<std::uint32_t>(options.seed),
                      static_cast<std::uint32_t>(options.seed >> 32),
                      static_cast<std::uint32_t>(r)};
    std::mt19937_64 rng(seq);
    Run run = lloyd(points, seed_centroids(points, options.k, rng), options.max_iterations);
    model.restart_inertia.push_back(run.inertia);
    if (r == 0 || run.inertia < best.inertia) {
      best = std::move(run);
      model.best_restart = r;
    }
  }
  model.centroids = std::move(best.centroids);
  model.assignment = std::move(best.assignment);
  model.history = std::move(best.history);
  model.inertia = best.inertia;
  model.counts.assign(options.k, 0);
  for (std::size_t c : model.assignment) ++model.counts[c];
  return model;
}

std::vector<Point> job_points(const std::vector<JobUsage>& jobs) {
  std::vector<Point> points;
  points.reserve(jobs.size());
  for (const auto& j : jobs) points.push_back({j.cpu, j.mem});
  return points;
}

Instance build_instance(const ClusterModel& model, const std::vector<double>& capacities,
                        double gamma, const std::vector<double>& alphas,
                        const std::vector<double>& cs, const std::vector<int>& counts,
                        const std::vector<std::string>& resource_names) {
  const std::size_t k = model.centroids.size();
  if (alphas.size() != k || cs.size() != k || counts.size() != k) {
    throw InputError("alphas, cs and counts need one entry per cluster (" + std::to_string(k) + ")");
  }
  if (resource_names.size() != capacities.size()) {
    throw InputError("one resource name per capacity expected");
  }
  Instance inst;
  inst.resources.names = resource_names;
  inst.resources.capacities = capacities;
  inst.gamma = gamma;
  for (std::size_t c = 0; c < k; ++c) {
    if (model.centroids[c].size() != capacities.size()) {
      throw InputError("centroid dimension does not match the capacities");
    }
    inst.user_types.push_back(
        {"type" + std::to_string(c + 1), counts[c], model.centroids[c], {alphas[c], cs[c]}});
  }
  validate(inst);
  return inst;
}

std::string cluster_report_csv(const ClusterModel& model) {
  std::ostringstream os;
  os.precision(17);
  os << "cluster_id,centroid_cpu,centroid_mem,count\n";
  for (std::size_t c = 0; c < model.centroids.size(); ++c) {
    os << c + 1 << ',' << model.centroids[c].at(0) << ',' << model.centroids[c].at(1) << ','
       << model.counts[c] << '\n';
  }
  return os.str();
}

}  // namespace cloudprice
