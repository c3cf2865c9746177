#include "cloudprice/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <sstream>
#include <thread>

#include "cloudprice/error.hpp"
#include "cloudprice/fairness.hpp"

namespace cloudprice {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::size_t resource_index(const Instance& inst, const std::string& name) {
  for (std::size_t i = 0; i < inst.num_resources(); ++i) {
    if (inst.resources.names[i] == name) return i;
  }
  throw InputError("sweep target: no resource named '" + name + "'");
}

std::size_t type_index(const Instance& inst, const std::string& label) {
  for (std::size_t j = 0; j < inst.num_types(); ++j) {
    if (inst.user_types[j].label == label) return j;
  }
  throw InputError("sweep target: no user type labelled '" + label + "'");
}

std::vector<double> theta(const PricingPlan& plan) {
  if (const auto* b = std::get_if<BundledPlan>(&plan)) return {b->price};
  if (const auto* r = std::get_if<ResourcePlan>(&plan)) return r->prices;
  return std::get<DifferentiatedPlan>(plan).prices;
}

SweepRow solve_point(const Instance& base, const SweepSpec& spec, double value, double nu,
                     PlanKind plan) {
  SweepRow row;
  row.value = value;
  row.nu = nu;
  row.plan = plan;
  row.gamma = spec.parameter == SweepParameter::kGamma ? value : base.gamma;
  try {
    const Instance inst = sweep_instance(base, spec, value);
    const SolveResult res = barrier_optimize(inst, plan, {nu, spec.beta}, spec.solver);
    const auto utilities = expand_by_count(inst, res.outcome.net_utility);
    const auto split =
        equitability_efficiency_split(utilities, {spec.beta, matching_lambda(spec.beta)});
    row.revenue = res.revenue;
    row.fairness = res.fairness;
    row.equitability = split.equitability;
    row.efficiency = split.efficiency;
    row.utilities = res.outcome.net_utility;
    row.leftover = res.outcome.leftover;
    row.prices = theta(res.plan);
    row.converged = res.converged;
    if (!res.converged) row.error = res.diagnostics;
  } catch (const std::exception& e) {
    row.revenue = row.fairness = row.equitability = row.efficiency = kNaN;
    row.utilities.assign(base.num_types(), kNaN);
    row.leftover.assign(base.num_resources(), kNaN);
    row.converged = false;
    row.error = e.what();
  }
  return row;
}

}  // namespace

SweepSpec SweepSpec::for_parameter(const std::string& parameter) {
  SweepSpec spec;
  const auto colon = parameter.find(':');
  const std::string head = parameter.substr(0, colon);
  const std::string tail = colon == std::string::npos ? "" : parameter.substr(colon + 1);
  if (head == "capacity") {
    spec.parameter = SweepParameter::kCapacity;
  } else if (head == "mix") {
    spec.parameter = SweepParameter::kMix;
  } else if (head == "gamma" && tail.empty()) {
    spec.parameter = SweepParameter::kGamma;
  } else {
    throw InputError("sweep parameter '" + parameter +
                     "': expected capacity:<resource>, mix:<type> or gamma");
  }
  if (spec.parameter != SweepParameter::kGamma && tail.empty()) {
    throw InputError("sweep parameter '" + parameter + "' needs a target after ':'");
  }
  spec.target = tail;
  return spec;
}

std::vector<double> SweepSpec::grid() const {
  std::vector<double> values;
  for (std::size_t k = 0; k < steps; ++k) {
    values.push_back(k + 1 == steps ? stop : start + (stop - start) * k / (steps - 1));
  }
  return values;
}

void validate(const SweepSpec& spec, const Instance& instance) {
  if (!(spec.start < spec.stop)) throw InputError("sweep range: start must be < stop");
  if (spec.steps < 2) throw InputError("sweep range: steps must be >= 2");
  if (spec.nus.empty() || spec.plans.empty()) throw InputError("sweep needs nu values and plans");
  for (double nu : spec.nus) validate(ObjectiveSpec{nu, spec.beta});
  switch (spec.parameter) {
    case SweepParameter::kCapacity:
      resource_index(instance, spec.target);
      if (spec.start < 0.0) throw InputError("capacity sweep must stay >= 0");
      break;
    case SweepParameter::kMix: {
      const std::size_t j = type_index(instance, spec.target);
      if (instance.num_types() < 2 || j + 1 == instance.num_types()) {
        throw InputError("mix sweep: the last type holds the fixed fraction; pick another type");
      }
      if (spec.population < 1) throw InputError("mix sweep: population must be >= 1");
      if (spec.start < 0.0 || spec.stop > 1.0 - spec.fixed_fraction) {
        throw InputError("mix sweep: fractions must lie in [0, 1 - fixed fraction]");
      }
      break;
    }
    case SweepParameter::kGamma:
      if (spec.start <= 0.0 || spec.stop > 1.0) throw InputError("gamma sweep must lie in (0, 1]");
      break;
  }
}

Instance sweep_instance(const Instance& base, const SweepSpec& spec, double value) {
  Instance inst = base;
  switch (spec.parameter) {
    case SweepParameter::kCapacity:
      inst.resources.capacities[resource_index(base, spec.target)] = value;
      break;
    case SweepParameter::kMix: {
      const std::size_t n = base.num_types();
      const std::size_t j = type_index(base, spec.target);
      const double rest = (1.0 - value - spec.fixed_fraction) / static_cast<double>(n - 2);
      for (std::size_t k = 0; k < n; ++k) {
        double fraction = rest;
        if (k == j) fraction = value;
        if (k + 1 == n) fraction = spec.fixed_fraction;
        const double count = std::round(fraction * spec.population);
        inst.user_types[k].count = std::max(1, static_cast<int>(count));
      }
      break;
    }
    case SweepParameter::kGamma:
      inst.gamma = value;
      break;
  }
  validate(inst);
  return inst;
}

std::vector<SweepRow> run_sweep(const Instance& base, const SweepSpec& spec) {
  validate(base);
  validate(spec, base);
  struct Task {
    double value, nu;
    PlanKind plan;
  };
  std::vector<Task> tasks;
  for (double value : spec.grid()) {
    for (double nu : spec.nus) {
      for (PlanKind plan : spec.plans) tasks.push_back({value, nu, plan});
    }
  }
  std::vector<SweepRow> rows(tasks.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next++; k < tasks.size(); k = next++) {
      rows[k] = solve_point(base, spec, tasks[k].value, tasks[k].nu, tasks[k].plan);
    }
  };
  std::size_t threads = spec.threads ? spec.threads : std::thread::hardware_concurrency();
  threads = std::clamp<std::size_t>(threads, 1, tasks.size());
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return rows;
}

std::string sweep_csv(const Instance& base, const std::vector<SweepRow>& rows) {
  std::ostringstream os;
  os << "value,nu,gamma,plan,revenue,fairness,equitability,efficiency";
  for (const auto& u : base.user_types) os << ",utility_" << u.label;
  for (const auto& name : base.resources.names) os << ",leftover_" << name;
  os << ",prices,converged\n";
  for (const auto& r : rows) {
    os << fmt(r.value) << ',' << fmt(r.nu) << ',' << fmt(r.gamma) << ',' << to_string(r.plan)
       << ',' << fmt(r.revenue) << ',' << fmt(r.fairness) << ',' << fmt(r.equitability) << ','
       << fmt(r.efficiency);
    for (double u : r.utilities) os << ',' << fmt(u);
    for (double l : r.leftover) os << ',' << fmt(l);
    os << ',';
    for (std::size_t k = 0; k < r.prices.size(); ++k) os << (k ? ";" : "") << fmt(r.prices[k]);
    os << ',' << (r.converged ? "true" : "false") << '\n';
  }
  return os.str();
}

std::string sweep_svg(const std::vector<SweepRow>& rows, const std::string& title) {
  constexpr double kWidth = 720, kHeight = 480, kLeft = 80, kRight = 200, kTop = 40,
                   kBottom = 60;
  std::map<std::pair<int, double>, std::vector<std::pair<double, double>>> series;
  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin, ymin = xmin, ymax = -xmin;
  for (const auto& r : rows) {
    if (!std::isfinite(r.revenue) || !std::isfinite(r.fairness)) continue;
    series[{static_cast<int>(r.plan), r.nu}].push_back({r.revenue, r.fairness});
    xmin = std::min(xmin, r.revenue);
    xmax = std::max(xmax, r.revenue);
    ymin = std::min(ymin, r.fairness);
    ymax = std::max(ymax, r.fairness);
  }
  if (series.empty()) xmin = ymin = 0.0, xmax = ymax = 1.0;
  if (xmax - xmin < 1e-12) xmin -= 0.5, xmax += 0.5;
  if (ymax - ymin < 1e-12) ymin -= 0.5, ymax += 0.5;
  const double pw = kWidth - kLeft - kRight, ph = kHeight - kTop - kBottom;
  auto sx = [&](double x) { return kLeft + (x - xmin) / (xmax - xmin) * pw; };
  auto sy = [&](double y) { return kTop + (ymax - y) / (ymax - ymin) * ph; };

  auto escape = [](const std::string& s) {
    std::string out;
    for (char c : s) {
      if (c == '<') out += "&lt;";
      else if (c == '>') out += "&gt;";
      else if (c == '&') out += "&amp;";
      else out += c;
    }
    return out;
  };

  static const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                  "#ff7f0e", "#8c564b", "#e377c2", "#17becf"};
  std::ostringstream os;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
     << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
     << kHeight << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\">\n"
     << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
     << "<text x=\"" << kWidth / 2 << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" "
        "font-size=\"16\">"
     << escape(title) << "</text>\n"
     << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << pw << "\" height=\"" << ph
     << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int k = 0; k <= 4; ++k) {
    const double xv = xmin + (xmax - xmin) * k / 4.0, yv = ymin + (ymax - ymin) * k / 4.0;
    os << "<text x=\"" << fmt(sx(xv)) << "\" y=\"" << kTop + ph + 18
       << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" << fmt(xv)
       << "</text>\n"
       << "<text x=\"" << kLeft - 6 << "\" y=\"" << fmt(sy(yv) + 4)
       << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" << fmt(yv)
       << "</text>\n";
  }
  os << "<text x=\"" << kLeft + pw / 2 << "\" y=\"" << kHeight - 16
     << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">revenue</text>\n"
     << "<text x=\"18\" y=\"" << kTop + ph / 2 << "\" text-anchor=\"middle\" "
        "font-family=\"sans-serif\" font-size=\"13\" transform=\"rotate(-90 18 "
     << kTop + ph / 2 << ")\">fairness</text>\n";

  std::size_t color = 0;
  double legend_y = kTop + 10;
  for (const auto& [key, points] : series) {
    const char* stroke = kColors[color++ % (sizeof kColors / sizeof *kColors)];
    os << "<polyline fill=\"none\" stroke=\"" << stroke << "\" stroke-width=\"2\" points=\"";
    for (std::size_t k = 0; k < points.size(); ++k) {
      os << (k ? " " : "") << fmt(sx(points[k].first)) << ',' << fmt(sy(points[k].second));
    }
    os << "\"/>\n";
    for (const auto& [x, y] : points) {
      os << "<circle cx=\"" << fmt(sx(x)) << "\" cy=\"" << fmt(sy(y)) << "\" r=\"2.5\" fill=\""
         << stroke << "\"/>\n";
    }
    const std::string label =
        std::string(to_string(static_cast<PlanKind>(key.first))) + ", nu=" + fmt(key.second);
    os << "<line x1=\"" << kLeft + pw + 12 << "\" y1=\"" << legend_y << "\" x2=\""
       << kLeft + pw + 32 << "\" y2=\"" << legend_y << "\" stroke=\"" << stroke
       << "\" stroke-width=\"2\"/>\n"
       << "<text x=\"" << kLeft + pw + 38 << "\" y=\"" << legend_y + 4
       << "\" font-family=\"sans-serif\" font-size=\"11\">" << escape(label) << "</text>\n";
    legend_y += 18;
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace cloudprice
