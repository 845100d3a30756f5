#pragma once

// Ordered key/value report with PASS/FAIL verdicts.

#include <cstdio>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "spincontact/tensor_algebra.hpp"

namespace spincontact::cli {

enum class ReportFormat { Text, KeyValue };

struct Verdict {
  std::string name;  ///< relation being checked, e.g. "YBE", "ABCD-2", "jump"
  bool pass = false;
  double value = 0.0;
  double threshold = 0.0;
  std::string relation;  ///< "<" or ">"
};

class Report {
 public:
  explicit Report(std::string command) : command_(std::move(command)) {}

  void set_digest(std::string digest) { digest_ = std::move(digest); }

  void add(std::string key, std::string value) {
    rows_.push_back({std::move(key), std::move(value), -1});
  }
  void add(std::string key, double value) { add(std::move(key), format(value)); }
  void add(std::string key, long long value) { add(std::move(key), std::to_string(value)); }
  void add(std::string key, int value) { add(std::move(key), std::to_string(value)); }
  void add(std::string key, std::size_t value) { add(std::move(key), std::to_string(value)); }
  void add(std::string key, Complex value) { add(std::move(key), format(value)); }

  /// value < threshold passes.
  bool below(const std::string& name, double value, double threshold) {
    return push_verdict({name, value < threshold, value, threshold, "<"});
  }
  /// value > threshold passes.
  bool above(const std::string& name, double value, double threshold) {
    return push_verdict({name, value > threshold, value, threshold, ">"});
  }
  /// Boolean verdict with no residual.
  bool check(const std::string& name, bool pass) {
    return push_verdict({name, pass, pass ? 1.0 : 0.0, 1.0, "=="});
  }

  void warn(std::string message) { warnings_.push_back(std::move(message)); }

  bool all_pass() const {
    for (const auto& v : verdicts_)
      if (!v.pass) return false;
    return true;
  }
  int exit_code() const { return all_pass() ? 0 : 1; }
  const std::vector<Verdict>& verdicts() const noexcept { return verdicts_; }
  const std::string& command() const noexcept { return command_; }

  /// Value of the first row with this key, or "" if absent.
  std::string value(const std::string& key) const {
    for (const auto& r : rows_)
      if (r.key == key) return r.value;
    return {};
  }

  void write(std::ostream& os, ReportFormat fmt) const {
    auto line = [&](const std::string& k, const std::string& v) {
      if (fmt == ReportFormat::KeyValue)
        os << k << '=' << v << '\n';
      else
        os << k << ": " << v << '\n';
    };
    line("command", command_);
    if (!digest_.empty()) line("input_digest", "fnv1a64:" + digest_);
    for (const auto& r : rows_) {
      if (r.verdict >= 0) {
        const Verdict& v = verdicts_[static_cast<std::size_t>(r.verdict)];
        if (fmt == ReportFormat::KeyValue) {
          os << "verdict." << v.name << '=' << (v.pass ? "PASS" : "FAIL") << '\n';
          if (v.relation != "==") {
            os << "verdict." << v.name << ".value=" << format(v.value) << '\n';
            os << "verdict." << v.name << ".threshold=" << v.relation << format(v.threshold) << '\n';
          }
        } else {
          os << (v.pass ? "PASS " : "FAIL ") << v.name;
          if (v.relation != "==")
            os << ": " << format(v.value) << ' ' << v.relation << ' ' << format(v.threshold)
               << (v.pass ? "" : " violated");
          os << '\n';
        }
        continue;
      }
      line(r.key, r.value);
    }
    for (const auto& w : warnings_) line("warning", w);
    line("result", all_pass() ? "PASS" : "FAIL");
  }

  std::string str(ReportFormat fmt) const {
    std::ostringstream os;
    write(os, fmt);
    return os.str();
  }

  static std::string format(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6e", v);
    return buf;
  }
  static std::string format(Complex z) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g%+.12gi", z.real() + 0.0, z.imag() + 0.0);
    return buf;
  }

 private:
  struct Row {
    std::string key;
    std::string value;
    int verdict;
  };

  bool push_verdict(Verdict v) {
    verdicts_.push_back(std::move(v));
    rows_.push_back({{}, {}, static_cast<int>(verdicts_.size() - 1)});
    return verdicts_.back().pass;
  }

  std::string command_;
  std::string digest_;
  std::vector<Row> rows_;
  std::vector<Verdict> verdicts_;
  std::vector<std::string> warnings_;
};

}  // namespace spincontact::cli
