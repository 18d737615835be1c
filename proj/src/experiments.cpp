#include "pvmpc/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <exception>
#include <mutex>
#include <thread>

#include "pvmpc/error.hpp"

namespace pvmpc {

void parallel_for(std::size_t n, std::size_t jobs,
                  const std::function<void(std::size_t)>& fn) {
  jobs = std::clamp<std::size_t>(jobs, 1, std::max<std::size_t>(n, 1));
  std::atomic<std::size_t> next{0};
  std::exception_ptr first;
  std::mutex mu;
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < n;) {
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(mu);
        if (!first) first = std::current_exception();
      }
    }
  };
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t j = 0; j < jobs; ++j) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (first) std::rethrow_exception(first);
}

ControllerRun run_and_score(ControllerKind controller, const Scenario& scenario,
                            const SystemConfig& config,
                            const RunOptions& options) {
  const auto t0 = std::chrono::steady_clock::now();
  ControllerRun run;
  run.trace = run_closed_loop(controller, scenario, config, options);
  run.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  run.metrics = compute_metrics(run.trace, config.fridge.t_min_c,
                                config.fridge.t_max_c, config.violation_tol_c);
  return run;
}

Comparison compare_controllers(const Scenario& scenario,
                               const SystemConfig& config,
                               const RunOptions& options, std::size_t jobs) {
  Comparison c;
  parallel_for(2, jobs, [&](std::size_t i) {
    if (i == 0) {
      c.baseline = run_and_score(ControllerKind::kBaseline, scenario, config, options);
    } else {
      c.proposed = run_and_score(ControllerKind::kProposed, scenario, config, options);
    }
  });
  return c;
}

std::string comparison_table(const Comparison& c) {
  char buf[512];
  std::snprintf(buf, sizeof buf,
                "%-34s %12s %12s\n"
                "%-34s %12.4f %12.4f\n"
                "%-34s %12.2f %12.2f\n"
                "%-34s %12.4f %12.4f\n",
                "metric", "baseline", "proposed",
                "fridge temp violation (h/day)",
                c.baseline.metrics.temp_violation_hours_per_day,
                c.proposed.metrics.temp_violation_hours_per_day,
                "secondary load unserved (%)",
                c.baseline.metrics.secondary_unserved_pct,
                c.proposed.metrics.secondary_unserved_pct,
                "primary load unserved (h/day)",
                c.baseline.metrics.primary_unserved_hours_per_day,
                c.proposed.metrics.primary_unserved_hours_per_day);
  return buf;
}

std::vector<SweepRow> sweep_sizes(const Scenario& scenario,
                                  const SystemConfig& config,
                                  const RunOptions& options, std::size_t jobs) {
  const auto ladder = size_ladder();
  std::vector<SweepRow> rows(ladder.size() + 1);
  parallel_for(rows.size(), jobs, [&](std::size_t i) {
    const bool proposed = i == ladder.size();
    const SystemSize& size = proposed ? ladder.front() : ladder[i];
    const ControllerKind kind =
        proposed ? ControllerKind::kProposed : ControllerKind::kBaseline;
    SweepRow row;
    row.size_label = size.label;
    row.controller = kind;
    row.cost = size.total_cost;
    row.metrics =
        run_and_score(kind, scenario, apply_size(config, size), options).metrics;
    rows[i] = std::move(row);
  });
  return rows;
}

CostEquivalence cost_equivalence(const std::vector<SweepRow>& rows) {
  const auto proposed =
      std::find_if(rows.begin(), rows.end(), [](const SweepRow& r) {
        return r.controller == ControllerKind::kProposed;
      });
  if (proposed == rows.end()) throw ContractError("sweep has no proposed row");
  CostEquivalence out;
  out.proposed_unserved = proposed->metrics.primary_unserved_hours_per_day;
  double max_cost = 0.0;
  for (const auto& r : rows) {
    if (r.controller != ControllerKind::kBaseline) continue;
    max_cost = std::max(max_cost, r.cost);
    if (!out.label &&
        r.metrics.primary_unserved_hours_per_day <= out.proposed_unserved) {
      out.label = r.size_label;
      out.ratio = r.cost / proposed->cost;
    }
  }
  if (!out.label) out.ratio = max_cost / proposed->cost;
  return out;
}

std::string sweep_table(const std::vector<SweepRow>& rows) {
  std::string out = "size,controller,cost,primary_unserved_h_per_day,"
                    "temp_violation_h_per_day,secondary_unserved_pct\n";
  char buf[256];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%s,%s,%.0f,%.4f,%.4f,%.2f\n",
                  r.size_label.c_str(), to_string(r.controller), r.cost,
                  r.metrics.primary_unserved_hours_per_day,
                  r.metrics.temp_violation_hours_per_day,
                  r.metrics.secondary_unserved_pct);
    out += buf;
  }
  return out;
}

}  // namespace pvmpc
