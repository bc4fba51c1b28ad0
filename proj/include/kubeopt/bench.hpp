// Copyright 2026 The kubeopt Authors
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

// Benchmark loop: baseline scheduler first, optimizer only when the baseline
// leaves pods pending, then outcome classification and reporting.
//
// Report layout (all under one output directory):
//   outcomes.csv   one row per (instance, timeout); wall-clock free, so two
//                  runs with the same inputs and a deterministic solver are
//                  byte-identical
//   timings.csv    solver durations for the same rows
//   summary.json   per-configuration category shares and metric means
//   plots/*.svg    stacked category bars per cluster size and timeout

#ifndef KUBEOPT_BENCH_HPP_
#define KUBEOPT_BENCH_HPP_

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>
#include <tuple>
#include <vector>

#include "kubeopt/baseline.hpp"
#include "kubeopt/cluster.hpp"
#include "kubeopt/io.hpp"
#include "kubeopt/optimizer.hpp"

namespace kubeopt {

enum class Category {
  kBetterAndOptimal,
  kBetter,
  kKwokOptimal,
  kNoCalls,
  kFailure,
  kUnimproved,  // only with six-category reporting
};

inline constexpr std::array<Category, 5> kReportedCategories = {
    Category::kBetterAndOptimal, Category::kBetter, Category::kKwokOptimal,
    Category::kNoCalls, Category::kFailure};

inline const char* category_name(Category c) {
  switch (c) {
    case Category::kBetterAndOptimal:
      return "BETTER_AND_OPTIMAL";
    case Category::kBetter:
      return "BETTER";
    case Category::kKwokOptimal:
      return "KWOK_OPTIMAL";
    case Category::kNoCalls:
      return "NO_CALLS";
    case Category::kFailure:
      return "FAILURE";
    case Category::kUnimproved:
      return "UNIMPROVED";
  }
  return "?";
}

inline std::optional<Category> category_from_name(std::string_view name) {
  for (Category c :
       {Category::kBetterAndOptimal, Category::kBetter, Category::kKwokOptimal,
        Category::kNoCalls, Category::kFailure, Category::kUnimproved}) {
    if (name == category_name(c)) return c;
  }
  return std::nullopt;
}

// Quality rank for comparing runs of the same instance: FAILURE (and
// UNIMPROVED) < BETTER < BETTER_AND_OPTIMAL, KWOK_OPTIMAL. NO_CALLS sits apart
// and ranks highest; it never mixes with the others for a given instance.
inline int category_rank(Category c) {
  switch (c) {
    case Category::kFailure:
    case Category::kUnimproved:
      return 0;
    case Category::kBetter:
      return 1;
    case Category::kBetterAndOptimal:
    case Category::kKwokOptimal:
      return 2;
    case Category::kNoCalls:
      return 3;
  }
  return 0;
}

// `plan` is empty when the optimizer was not run or crashed.
inline Category classify_outcome(const Instance& instance,
                                 const Allocation& baseline, const Plan* plan,
                                 bool six_category = false) {
  check_allocation_shape(instance, baseline);
  if (baseline.num_placed() == instance.num_pods()) return Category::kNoCalls;
  if (plan == nullptr || plan->failed) return Category::kFailure;
  const auto order =
      compare_lex(placement_vector(instance, plan->final_allocation),
                  placement_vector(instance, baseline));
  if (order < 0) {
    throw std::logic_error("optimizer placement is worse than the baseline");
  }
  if (order > 0) {
    return plan->proven_optimal ? Category::kBetterAndOptimal
                                : Category::kBetter;
  }
  if (plan->proven_optimal) return Category::kKwokOptimal;
  return six_category ? Category::kUnimproved : Category::kFailure;
}

struct OutcomeRecord {
  std::string dataset;
  std::string instance_id;
  int num_nodes = 0;
  int num_pods = 0;
  double timeout = 0.0;  // seconds
  Category category = Category::kFailure;
  PlacementVector baseline_vector;
  std::optional<PlacementVector> optimizer_vector;
  bool proven_optimal = false;
  int moves = 0;
  int evictions = 0;
  int newly_placed = 0;
  double delta_cpu_util = 0.0;  // percentage points
  double delta_mem_util = 0.0;
  std::vector<TierReport> tiers;
  std::string error;  // non-empty when the instance could not be evaluated

  double solver_duration = 0.0;  // seconds; timings.csv only
  int64_t nodes_explored = 0;    // timings.csv only
};

struct DatasetEntry {
  std::string dataset;
  std::string instance_id;
  std::optional<Instance> instance;  // empty when loading failed
  std::string load_error;
};

struct ExperimentParams {
  std::vector<double> timeouts{1.0, 10.0, 20.0};
  double alpha = 0.8;
  int workers = 1;
  uint64_t seed = 0;
  bool six_category = false;
  bool line18_literal = false;
  std::optional<int64_t> node_limit;
  // Invoked after each record is complete, e.g. to append it to disk.
  std::function<void(const OutcomeRecord&)> on_record;
};

// Evaluates every entry under every timeout. Per-instance failures become
// records with `error` set; the loop carries on.
inline std::vector<OutcomeRecord> run_experiment(
    const std::vector<DatasetEntry>& entries, const ExperimentParams& params) {
  using Clock = std::chrono::steady_clock;
  std::vector<OutcomeRecord> records;
  for (const DatasetEntry& entry : entries) {
    std::optional<ScheduleResult> baseline;
    std::string baseline_error = entry.load_error;
    if (entry.instance && baseline_error.empty()) {
      try {
        baseline = schedule_trace(*entry.instance);
      } catch (const std::exception& e) {
        baseline_error = e.what();
      }
    } else if (baseline_error.empty()) {
      baseline_error = "instance missing";
    }

    for (double timeout : params.timeouts) {
      OutcomeRecord rec;
      rec.dataset = entry.dataset;
      rec.instance_id = entry.instance_id;
      rec.timeout = timeout;
      if (!baseline) {
        rec.error = baseline_error;
      } else {
        const Instance& inst = *entry.instance;
        rec.num_nodes = inst.num_nodes();
        rec.num_pods = inst.num_pods();
        const Allocation& base = baseline->allocation;
        rec.baseline_vector = placement_vector(inst, base);
        try {
          if (baseline->num_pending() == 0) {
            rec.category = classify_outcome(inst, base, nullptr);
          } else {
            OptimizeParams op;
            op.t_total = Seconds(timeout);
            op.alpha = params.alpha;
            op.seed = params.seed;
            op.workers = params.workers;
            op.line18_literal = params.line18_literal;
            op.node_limit = params.node_limit;
            const Clock::time_point start = Clock::now();
            const Plan plan = optimize(inst, base, op);
            rec.solver_duration = Seconds(Clock::now() - start).count();
            rec.category =
                classify_outcome(inst, base, &plan, params.six_category);
            rec.tiers = plan.tiers;
            rec.proven_optimal = plan.proven_optimal;
            for (const TierReport& t : plan.tiers) {
              rec.nodes_explored += t.phase1.nodes + t.phase2.nodes;
            }
            if (!plan.failed) {
              rec.optimizer_vector =
                  placement_vector(inst, plan.final_allocation);
              rec.moves = static_cast<int>(plan.moves.size());
              rec.evictions = static_cast<int>(plan.evictions.size());
              rec.newly_placed = static_cast<int>(plan.newly_placed.size());
              const Utilization before = utilization(inst, base);
              const Utilization after =
                  utilization(inst, plan.final_allocation);
              rec.delta_cpu_util = after.cpu_pct - before.cpu_pct;
              rec.delta_mem_util = after.ram_pct - before.ram_pct;
            }
          }
        } catch (const std::exception& e) {
          rec.category = Category::kFailure;
          rec.error = e.what();
        }
      }
      if (params.on_record) params.on_record(rec);
      records.push_back(std::move(rec));
    }
  }
  return records;
}

// ---------------------------------------------------------------------------
// CSV

namespace bench_internal {

inline std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

inline double parse_double(std::string_view s) {
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw FormatError("bad number '" + std::string(s) + "'");
  }
  return v;
}

template <typename Int>
Int parse_int(std::string_view s) {
  Int v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw FormatError("bad integer '" + std::string(s) + "'");
  }
  return v;
}

inline std::string escape(std::string_view field) {
  if (field.find_first_of(",\"\n\r") == std::string_view::npos) {
    return std::string(field);
  }
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

// Splits CSV text into rows of fields. Quoted fields may hold commas,
// doubled quotes and line breaks.
inline std::vector<std::vector<std::string>> split_csv(std::string_view text) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool quoted = false;
  bool pending = false;  // something has been read for the current row
  for (size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
      continue;
    }
    switch (c) {
      case '"':
        quoted = true;
        pending = true;
        break;
      case ',':
        row.push_back(std::move(field));
        field.clear();
        pending = true;
        break;
      case '\r':
        break;
      case '\n':
        row.push_back(std::move(field));
        field.clear();
        rows.push_back(std::move(row));
        row.clear();
        pending = false;
        break;
      default:
        field += c;
        pending = true;
    }
  }
  if (quoted) throw FormatError("unterminated quoted CSV field");
  if (pending) {
    row.push_back(std::move(field));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline std::string format_vector(const PlacementVector& v) {
  std::string out;
  for (size_t t = 0; t < v.counts.size(); ++t) {
    if (t > 0) out += '|';
    out += std::to_string(v.counts[t]);
  }
  return out;
}

inline PlacementVector parse_vector(std::string_view s) {
  PlacementVector v;
  if (s.empty()) return v;
  size_t begin = 0;
  while (true) {
    const size_t bar = s.find('|', begin);
    v.counts.push_back(parse_int<int>(s.substr(begin, bar - begin)));
    if (bar == std::string_view::npos) break;
    begin = bar + 1;
  }
  return v;
}

inline char status_letter(SolveStatus s) { return status_name(s)[0]; }

inline SolveStatus status_from_letter(char c) {
  switch (c) {
    case 'O':
      return SolveStatus::kOptimal;
    case 'F':
      return SolveStatus::kFeasible;
    case 'U':
      return SolveStatus::kUnknown;
  }
  throw FormatError(std::string("bad status letter '") + c + "'");
}

// Per tier: "-" when skipped, else "<S1><v1>/<S2><v2>" with S one of O, F, U.
inline std::string format_tiers(const std::vector<TierReport>& tiers) {
  std::string out;
  for (size_t k = 0; k < tiers.size(); ++k) {
    if (k > 0) out += ';';
    const TierReport& t = tiers[k];
    if (t.skipped) {
      out += '-';
      continue;
    }
    out += status_letter(t.phase1.status);
    out += std::to_string(t.phase1.value);
    out += '/';
    out += status_letter(t.phase2.status);
    out += std::to_string(t.phase2.value);
  }
  return out;
}

inline std::vector<TierReport> parse_tiers(std::string_view s) {
  std::vector<TierReport> tiers;
  if (s.empty()) return tiers;
  size_t begin = 0;
  while (true) {
    const size_t semi = s.find(';', begin);
    const std::string_view tok = s.substr(begin, semi - begin);
    TierReport t;
    t.tier = static_cast<int>(tiers.size());
    if (tok == "-") {
      t.skipped = true;
    } else {
      const size_t slash = tok.find('/');
      if (slash == std::string_view::npos || slash < 2 ||
          slash + 1 >= tok.size()) {
        throw FormatError("bad tier report '" + std::string(tok) + "'");
      }
      t.phase1.status = status_from_letter(tok[0]);
      t.phase1.value = parse_int<int64_t>(tok.substr(1, slash - 1));
      t.phase2.status = status_from_letter(tok[slash + 1]);
      t.phase2.value = parse_int<int64_t>(tok.substr(slash + 2));
    }
    tiers.push_back(t);
    if (semi == std::string_view::npos) break;
    begin = semi + 1;
  }
  return tiers;
}

}  // namespace bench_internal

inline constexpr std::string_view kOutcomesHeader =
    "dataset,instance_id,num_nodes,num_pods,timeout,category,baseline_vector,"
    "optimizer_vector,proven_optimal,moves,evictions,newly_placed,"
    "delta_cpu_util,delta_mem_util,tiers,error";

inline constexpr std::string_view kTimingsHeader =
    "dataset,instance_id,timeout,solver_duration,nodes_explored";

inline std::string outcome_csv_row(const OutcomeRecord& r) {
  using namespace bench_internal;
  std::string row;
  auto put = [&row](std::string_view field) {
    if (!row.empty()) row += ',';
    row += escape(field);
  };
  // Empty first field must still produce a leading separator.
  row = escape(r.dataset);
  if (row.empty()) row = "\"\"";
  put(r.instance_id);
  put(std::to_string(r.num_nodes));
  put(std::to_string(r.num_pods));
  put(format_double(r.timeout));
  put(category_name(r.category));
  put(format_vector(r.baseline_vector));
  put(r.optimizer_vector ? format_vector(*r.optimizer_vector) : "");
  put(r.proven_optimal ? "1" : "0");
  put(std::to_string(r.moves));
  put(std::to_string(r.evictions));
  put(std::to_string(r.newly_placed));
  put(format_double(r.delta_cpu_util));
  put(format_double(r.delta_mem_util));
  put(format_tiers(r.tiers));
  put(r.error);
  return row + "\n";
}

inline std::string timing_csv_row(const OutcomeRecord& r) {
  using namespace bench_internal;
  std::string dataset = escape(r.dataset);
  if (dataset.empty()) dataset = "\"\"";
  return dataset + "," + escape(r.instance_id) + "," +
         format_double(r.timeout) + "," + format_double(r.solver_duration) +
         "," + std::to_string(r.nodes_explored) + "\n";
}

inline std::string outcomes_to_csv(const std::vector<OutcomeRecord>& records) {
  std::string out(kOutcomesHeader);
  out += '\n';
  for (const OutcomeRecord& r : records) out += outcome_csv_row(r);
  return out;
}

inline std::string timings_to_csv(const std::vector<OutcomeRecord>& records) {
  std::string out(kTimingsHeader);
  out += '\n';
  for (const OutcomeRecord& r : records) out += timing_csv_row(r);
  return out;
}

// Inverse of outcomes_to_csv for every serialized field. Fields kept out of
// the file (durations, node counts, per-phase timing) come back zeroed.
inline std::vector<OutcomeRecord> outcomes_from_csv(std::string_view text) {
  using namespace bench_internal;
  const auto rows = split_csv(text);
  if (rows.empty()) throw FormatError("outcomes CSV is empty");
  std::string header;
  for (size_t k = 0; k < rows[0].size(); ++k) {
    header += (k ? "," : "") + rows[0][k];
  }
  if (header != kOutcomesHeader) throw FormatError("unexpected CSV header");
  std::vector<OutcomeRecord> records;
  for (size_t i = 1; i < rows.size(); ++i) {
    const auto& f = rows[i];
    if (f.size() != 16) {
      throw FormatError("CSV row " + std::to_string(i) + " has " +
                        std::to_string(f.size()) + " fields");
    }
    OutcomeRecord r;
    r.dataset = f[0];
    r.instance_id = f[1];
    r.num_nodes = parse_int<int>(f[2]);
    r.num_pods = parse_int<int>(f[3]);
    r.timeout = parse_double(f[4]);
    const auto category = category_from_name(f[5]);
    if (!category) throw FormatError("unknown category '" + f[5] + "'");
    r.category = *category;
    r.baseline_vector = parse_vector(f[6]);
    if (!f[7].empty()) r.optimizer_vector = parse_vector(f[7]);
    r.proven_optimal = f[8] == "1";
    r.moves = parse_int<int>(f[9]);
    r.evictions = parse_int<int>(f[10]);
    r.newly_placed = parse_int<int>(f[11]);
    r.delta_cpu_util = parse_double(f[12]);
    r.delta_mem_util = parse_double(f[13]);
    r.tiers = parse_tiers(f[14]);
    r.error = f[15];
    records.push_back(std::move(r));
  }
  return records;
}

// ---------------------------------------------------------------------------
// Summary and plots

// A configuration is one dataset evaluated under one timeout.
struct ConfigKey {
  int num_nodes = 0;
  std::string dataset;
  double timeout = 0.0;
  auto operator<=>(const ConfigKey&) const = default;
};

inline std::map<ConfigKey, std::vector<const OutcomeRecord*>> group_records(
    const std::vector<OutcomeRecord>& records) {
  std::map<ConfigKey, std::vector<const OutcomeRecord*>> groups;
  for (const OutcomeRecord& r : records) {
    groups[{r.num_nodes, r.dataset, r.timeout}].push_back(&r);
  }
  return groups;
}

struct SummaryOptions {
  bool six_category = false;
  int workers = 1;
  int concurrent_instances = 1;
};

// Shares are percentages of the configuration's records. Solver duration is
// averaged over records where the optimizer ran; utilization deltas over those
// that produced an allocation.
inline nlohmann::ordered_json summarize(
    const std::vector<OutcomeRecord>& records,
    const SummaryOptions& options = {}) {
  using OJson = nlohmann::ordered_json;
  std::vector<Category> shown(kReportedCategories.begin(),
                              kReportedCategories.end());
  if (options.six_category) shown.push_back(Category::kUnimproved);

  OJson configs = OJson::array();
  for (const auto& [key, group] : group_records(records)) {
    std::map<Category, int> counts;
    int invoked = 0, produced = 0, errors = 0;
    double duration = 0.0, dcpu = 0.0, dmem = 0.0;
    for (const OutcomeRecord* r : group) {
      ++counts[r->category];
      if (!r->error.empty()) ++errors;
      if (r->category == Category::kNoCalls || !r->error.empty()) continue;
      ++invoked;
      duration += r->solver_duration;
      if (r->optimizer_vector) {
        ++produced;
        dcpu += r->delta_cpu_util;
        dmem += r->delta_mem_util;
      }
    }
    const double n = static_cast<double>(group.size());
    OJson pct = OJson::object();
    OJson cnt = OJson::object();
    for (Category c : shown) {
      pct[category_name(c)] = n > 0 ? 100.0 * counts[c] / n : 0.0;
      cnt[category_name(c)] = counts[c];
    }
    OJson entry;
    entry["dataset"] = key.dataset;
    entry["num_nodes"] = key.num_nodes;
    entry["timeout"] = key.timeout;
    entry["instances"] = group.size();
    entry["percentages"] = pct;
    entry["counts"] = cnt;
    entry["solver_invocations"] = invoked;
    entry["mean_solver_duration"] = invoked ? duration / invoked : 0.0;
    entry["mean_delta_cpu_util"] = produced ? dcpu / produced : 0.0;
    entry["mean_delta_mem_util"] = produced ? dmem / produced : 0.0;
    entry["errors"] = errors;
    configs.push_back(entry);
  }
  OJson out;
  out["workers"] = options.workers;
  out["concurrent_instances"] = options.concurrent_instances;
  out["configurations"] = configs;
  return out;
}

inline const char* category_color(Category c) {
  switch (c) {
    case Category::kBetterAndOptimal:
      return "#2e9e44";
    case Category::kBetter:
      return "#7fc97f";
    case Category::kKwokOptimal:
      return "#386cb0";
    case Category::kNoCalls:
      return "#fdc086";
    case Category::kFailure:
      return "#999999";
    case Category::kUnimproved:
      return "#beaed4";
  }
  return "#000000";
}

// Stacked 100% bars, one per configuration, grouped by cluster size.
inline std::string category_chart_svg(const nlohmann::ordered_json& summary,
                                      std::string_view title) {
  const auto& configs = summary.at("configurations");
  constexpr int kBar = 36, kGap = 14, kGroupGap = 30, kHeight = 240;
  constexpr int kLeft = 50, kTop = 40, kLegend = 170;
  int width = kLeft;
  int previous_nodes = -1;
  for (const auto& c : configs) {
    if (previous_nodes != -1 && c.at("num_nodes") != previous_nodes) {
      width += kGroupGap;
    }
    previous_nodes = c.at("num_nodes");
    width += kBar + kGap;
  }
  width += kLegend;

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
      << "\" height=\"" << kTop + kHeight + 60
      << "\" font-family=\"sans-serif\""
      << " font-size=\"11\">\n";
  svg << "<text x=\"" << kLeft << "\" y=\"20\" font-size=\"14\">" << title
      << "</text>\n";
  for (int p = 0; p <= 100; p += 25) {
    const int y = kTop + kHeight - kHeight * p / 100;
    svg << "<text x=\"" << kLeft - 6 << "\" y=\"" << y + 4
        << "\" text-anchor=\"end\">" << p << "%</text>\n";
  }

  std::vector<std::string> legend;
  int x = kLeft;
  previous_nodes = -1;
  for (const auto& c : configs) {
    const int nodes = c.at("num_nodes");
    if (previous_nodes != -1 && nodes != previous_nodes) x += kGroupGap;
    previous_nodes = nodes;
    double y = kTop + kHeight;
    for (const auto& [name, share] : c.at("percentages").items()) {
      const double h = kHeight * share.get<double>() / 100.0;
      const Category cat = *category_from_name(name);
      if (std::find(legend.begin(), legend.end(), name) == legend.end()) {
        legend.push_back(name);
      }
      if (h <= 0) continue;
      y -= h;
      char rect[256];
      std::snprintf(rect, sizeof(rect),
                    "<rect x=\"%d\" y=\"%.2f\" width=\"%d\" height=\"%.2f\" "
                    "fill=\"%s\"><title>%s %.1f%%</title></rect>\n",
                    x, y, kBar, h, category_color(cat), name.c_str(),
                    share.get<double>());
      svg << rect;
    }
    svg << "<text x=\"" << x + kBar / 2 << "\" y=\"" << kTop + kHeight + 14
        << "\" text-anchor=\"middle\">" << c.at("timeout").get<double>()
        << "s</text>\n";
    svg << "<text x=\"" << x + kBar / 2 << "\" y=\"" << kTop + kHeight + 28
        << "\" text-anchor=\"middle\">n=" << nodes << "</text>\n";
    x += kBar + kGap;
  }
  for (size_t k = 0; k < legend.size(); ++k) {
    const int ly = kTop + 16 * static_cast<int>(k);
    svg << "<rect x=\"" << x + 10 << "\" y=\"" << ly << "\" width=\"10\""
        << " height=\"10\" fill=\""
        << category_color(*category_from_name(legend[k])) << "\"/>\n<text x=\""
        << x + 26 << "\" y=\"" << ly + 9 << "\">" << legend[k] << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

// Writes outcomes.csv, timings.csv, summary.json and plots/ under `out_dir`.
inline void emit_report(const std::vector<OutcomeRecord>& records,
                        const std::filesystem::path& out_dir,
                        const SummaryOptions& options = {},
                        bool with_plots = true) {
  if (records.empty()) throw std::invalid_argument("no records to report");
  std::filesystem::create_directories(out_dir);
  write_text_file(out_dir / "outcomes.csv", outcomes_to_csv(records));
  write_text_file(out_dir / "timings.csv", timings_to_csv(records));
  const nlohmann::ordered_json summary = summarize(records, options);
  write_text_file(out_dir / "summary.json", summary.dump(2) + "\n");
  if (!with_plots) return;
  std::filesystem::create_directories(out_dir / "plots");
  write_text_file(out_dir / "plots" / "categories.svg",
                  category_chart_svg(summary, "Outcome categories"));
  // One chart per dataset as well.
  std::map<std::string, std::vector<OutcomeRecord>> by_dataset;
  for (const OutcomeRecord& r : records) by_dataset[r.dataset].push_back(r);
  if (by_dataset.size() < 2) return;
  for (const auto& [name, subset] : by_dataset) {
    std::string file;
    for (char c : name)
      file += std::isalnum(static_cast<unsigned char>(c)) ? c : '_';
    write_text_file(out_dir / "plots" / ("categories_" + file + ".svg"),
                    category_chart_svg(summarize(subset, options), name));
  }
}

// ---------------------------------------------------------------------------
// Datasets on disk

// Label used to group instances: the generation parameters when recorded,
// otherwise `fallback`.
inline std::string dataset_label(const Instance& instance,
                                 const std::string& fallback) {
  const auto& g = instance.generation();
  if (!g) return fallback;
  return "n" + std::to_string(g->num_nodes) + "_ppn" +
         std::to_string(g->pods_per_node) + "_t" +
         std::to_string(g->priority_tiers) + "_u" +
         std::to_string(g->usage_target);
}

// Every *.json in `dir` except manifest.json, by file name. Unreadable files
// become entries carrying the error.
inline std::vector<DatasetEntry> load_dataset(
    const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) {
    throw std::runtime_error(dir.string() + " is not a directory");
  }
  std::vector<std::filesystem::path> files;
  for (const auto& e : std::filesystem::directory_iterator(dir)) {
    if (e.path().extension() == ".json" &&
        e.path().filename() != "manifest.json") {
      files.push_back(e.path());
    }
  }
  std::sort(files.begin(), files.end());
  const std::string fallback = dir.filename().empty()
                                   ? dir.parent_path().filename().string()
                                   : dir.filename().string();
  std::vector<DatasetEntry> entries;
  for (const auto& f : files) {
    DatasetEntry entry;
    entry.instance_id = f.stem().string();
    entry.dataset = fallback;
    try {
      entry.instance = load_instance(f);
      entry.dataset = dataset_label(*entry.instance, fallback);
    } catch (const std::exception& e) {
      entry.load_error = e.what();
    }
    entries.push_back(std::move(entry));
  }
  return entries;
}

}  // namespace kubeopt

#endif  // KUBEOPT_BENCH_HPP_
