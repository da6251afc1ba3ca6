#include "admmnet/history.hpp"

#include <cstdio>

namespace admmnet {

const char* const kHistoryCsvHeader =
    "epoch,train_ce,train_acc,test_ce,test_acc,secs_per_minibatch";

namespace {

std::string format_fields(const EpochStats& row, const std::string& tag) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), "%s,%.10g,%.10g,%.10g,%.10g,%.6f",
                tag.c_str(), row.train_ce, row.train_acc, row.test_ce,
                row.test_acc, row.secs_per_minibatch);
  return buf;
}

}  // namespace

std::string format_history_row(const EpochStats& row) {
  return format_fields(row, std::to_string(row.epoch));
}

void write_history_csv(std::ostream& out,
                       const std::vector<EpochStats>& rows) {
  out << kHistoryCsvHeader << "\n";
  double secs_total = 0.0;
  for (const EpochStats& row : rows) {
    out << format_history_row(row) << "\n";
    secs_total += row.secs_per_minibatch;
  }
  if (!rows.empty()) {
    EpochStats summary = rows.back();
    summary.secs_per_minibatch = secs_total / static_cast<double>(rows.size());
    out << format_fields(summary, "summary") << "\n";
  }
}

}  // namespace admmnet
