#include "anchorstream/report.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include <json.hpp>

#include "anchorstream/version.hpp"

namespace anchorstream {

namespace {

using nlohmann::json;

json interval_to_json(const IntervalResult& iv) {
  return json{{"lower", iv.lower},
              {"upper", iv.upper},
              {"method", std::string(to_string(iv.method))},
              {"floored", iv.floored},
              {"draws_used", iv.draws_used}};
}

std::string fixed(double v, int digits = 4) {
  if (std::isnan(v)) return "";
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string full(double v) {
  if (std::isnan(v)) return "";
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

} // namespace

std::string render_count_report(std::span<const CountReportRow> rows,
                                const ReportMeta& meta, OutputFormat format) {
  switch (format) {
    case OutputFormat::Json: {
      json out;
      out["version"] = kVersion;
      out["seed"] = meta.seed;
      out["posterior_draws"] = meta.posterior_draws;
      out["floor_enabled"] = meta.floor_enabled;
      out["estimates"] = json::array();
      for (const auto& row : rows) {
        json entry{{"estimator", std::string(to_string(row.estimate.method))},
                   {"n_hat", row.estimate.n_hat},
                   {"se", row.estimate.se},
                   {"variance", row.estimate.variance},
                   {"prevalence_hat", row.estimate.prevalence_hat}};
        if (row.interval) entry["interval"] = interval_to_json(*row.interval);
        out["estimates"].push_back(std::move(entry));
      }
      return out.dump(2) + "\n";
    }
    case OutputFormat::Csv: {
      std::string out =
          "estimator,n_hat,se,prevalence_hat,interval_method,lower,upper,floored\n";
      for (const auto& row : rows) {
        out += std::string(to_string(row.estimate.method)) + ',' +
               full(row.estimate.n_hat) + ',' + full(row.estimate.se) + ',' +
               full(row.estimate.prevalence_hat) + ',';
        if (row.interval) {
          out += std::string(to_string(row.interval->method)) + ',' +
                 full(row.interval->lower) + ',' + full(row.interval->upper) + ',' +
                 (row.interval->floored ? "1" : "0");
        } else {
          out += ",,,";
        }
        out += '\n';
      }
      return out;
    }
    case OutputFormat::Table: {
      std::ostringstream out;
      char line[160];
      std::snprintf(line, sizeof line, "%-14s %10s %8s  %-21s %10s %10s\n",
                    "estimator", "n_hat", "se", "interval", "lower", "upper");
      out << line;
      for (const auto& row : rows) {
        std::string method = row.interval
                                 ? std::string(to_string(row.interval->method))
                                 : std::string("-");
        if (row.interval && row.interval->floored) method += " (floored)";
        std::snprintf(line, sizeof line, "%-14s %10s %8s  %-21s %10s %10s\n",
                      std::string(to_string(row.estimate.method)).c_str(),
                      fixed(row.estimate.n_hat, 1).c_str(),
                      fixed(row.estimate.se, 1).c_str(), method.c_str(),
                      row.interval ? fixed(row.interval->lower, 1).c_str() : "",
                      row.interval ? fixed(row.interval->upper, 1).c_str() : "");
        out << line;
      }
      return out.str();
    }
  }
  return {};
}

std::string render_mean_report(std::span<const MeanReportRow> rows, std::uint64_t seed,
                               OutputFormat format) {
  switch (format) {
    case OutputFormat::Json: {
      json out;
      out["version"] = kVersion;
      out["seed"] = seed;
      out["estimates"] = json::array();
      for (const auto& row : rows) {
        const auto& e = row.estimate;
        json entry{{"target", std::string(to_string(e.target))},
                   {"mu_hat", e.mu_hat},
                   {"se", e.se},
                   {"interval", json{{"lower", e.lower}, {"upper", e.upper}}},
                   {"b_used", e.b_used},
                   {"b_requested", e.b_requested}};
        if (!e.warnings.empty()) entry["warnings"] = e.warnings;
        out["estimates"].push_back(std::move(entry));
      }
      return out.dump(2) + "\n";
    }
    case OutputFormat::Csv: {
      std::string out = "target,mu_hat,se,lower,upper,b_used,b_requested\n";
      for (const auto& row : rows) {
        const auto& e = row.estimate;
        out += std::string(to_string(e.target)) + ',' + full(e.mu_hat) + ',' +
               full(e.se) + ',' + full(e.lower) + ',' + full(e.upper) + ',' +
               std::to_string(e.b_used) + ',' + std::to_string(e.b_requested) + '\n';
      }
      return out;
    }
    case OutputFormat::Table: {
      std::ostringstream out;
      char line[160];
      std::snprintf(line, sizeof line, "%-11s %10s %8s %10s %10s %8s\n", "target",
                    "mu_hat", "se", "lower", "upper", "b_used");
      out << line;
      for (const auto& row : rows) {
        const auto& e = row.estimate;
        std::snprintf(line, sizeof line, "%-11s %10s %8s %10s %10s %8d\n",
                      std::string(to_string(e.target)).c_str(),
                      fixed(e.mu_hat).c_str(), fixed(e.se).c_str(),
                      fixed(e.lower).c_str(), fixed(e.upper).c_str(), e.b_used);
        out << line;
        for (const auto& w : e.warnings) out << "  warning: " << w << '\n';
      }
      return out.str();
    }
  }
  return {};
}

std::string summary_json(std::span<const SimSummaryRow> rows) {
  json arr = json::array();
  for (const auto& r : rows) {
    json row{{"estimator", r.estimator},
             {"interval", r.interval},
             {"reps_used", r.reps_used},
             {"ci_reps", r.ci_reps},
             {"excluded", r.excluded},
             {"seed", r.seed}};
    const auto set_num = [&row](const char* key, double v) {
      if (std::isnan(v))
        row[key] = nullptr;
      else
        row[key] = v;
    };
    set_num("mc_mean", r.mc_mean);
    set_num("mc_sd", r.mc_sd);
    set_num("avg_se", r.avg_se);
    set_num("coverage", r.coverage);
    set_num("avg_width", r.avg_width);
    arr.push_back(std::move(row));
  }
  return arr.dump(2) + "\n";
}

std::string render_manifest(const RunManifest& m) {
  json out{{"version", kVersion},
           {"command", m.command},
           {"seed", m.seed},
           {"threads", m.threads},
           {"wall_seconds", m.wall_seconds},
           {"outputs", m.outputs}};
  return out.dump(2) + "\n";
}

} // namespace anchorstream
