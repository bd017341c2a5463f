#include "colt/sample_log.hpp"

#include <fmt/format.h>
#include <fmt/ostream.h>

#include <charconv>
#include <istream>
#include <ostream>
#include <string>

#include "colt/error.hpp"

namespace colt {

namespace {

constexpr std::string_view kHeader =
    "index\ttrial\tkind\tdepth\tnode\tparent\tacting_model\tmutators\tnext_model\tchild_cost\t"
    "child_speedup\tterminal_trace\tterminal_speedup\trollout_reward\tregression\timproved\terrors\t"
    "backpropagated\tbest_so_far";
constexpr std::size_t kColumns = 19;

std::string join(const std::vector<std::string>& items) {
  if (items.empty()) return "-";
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i != 0) out += ',';
    out += items[i];
  }
  return out;
}

std::vector<std::string> split(std::string_view text, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t pos = text.find(sep, start);
    out.emplace_back(text.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::string node_text(NodeId id) { return id == kNoNode ? "-" : std::to_string(id); }

template <typename T>
T parse_number(const std::string& text, std::size_t line) {
  T value{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw Error(fmt::format("samples.log line {}: bad number '{}'", line, text));
  }
  return value;
}

bool parse_flag(const std::string& text, std::size_t line) {
  if (text == "1") return true;
  if (text == "0") return false;
  throw Error(fmt::format("samples.log line {}: bad flag '{}'", line, text));
}

}  // namespace

void write_sample_log_header(std::ostream& out, const Metadata& metadata) {
  out << "# colt samples.log v1\n";
  for (const auto& [key, value] : metadata) out << "# " << key << '=' << value << '\n';
  out << kHeader << '\n';
}

void write_sample_row(std::ostream& out, const SampleRecord& r) {
  fmt::print(out, "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\n",
             r.index, r.trial, to_string(r.kind), r.depth, node_text(r.node), node_text(r.parent),
             r.acting_model, join(r.mutators), r.next_model.empty() ? "-" : r.next_model,
             r.child_cost, r.child_speedup, join(r.terminal_trace), r.terminal_speedup,
             r.rollout_reward, r.regression ? 1 : 0, r.improved ? 1 : 0, r.errors,
             r.backpropagated ? 1 : 0, r.best_so_far);
}

void write_sample_log(std::ostream& out, const Metadata& metadata,
                      std::span<const SampleRecord> samples) {
  write_sample_log_header(out, metadata);
  for (const auto& s : samples) write_sample_row(out, s);
}

SampleLog read_sample_log(std::istream& in) {
  SampleLog log;
  std::string line;
  std::size_t lineno = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    if (line.starts_with("# ")) {
      const auto eq = line.find('=');
      if (eq != std::string::npos) log.metadata.emplace_back(line.substr(2, eq - 2), line.substr(eq + 1));
      continue;
    }
    if (!header_seen) {
      if (line != kHeader) throw Error("samples.log: unexpected header row");
      header_seen = true;
      continue;
    }
    const auto f = split(line, '\t');
    if (f.size() != kColumns) {
      throw Error(fmt::format("samples.log line {}: expected {} columns, got {}", lineno, kColumns,
                              f.size()));
    }
    const auto list = [](const std::string& s) {
      return s == "-" ? std::vector<std::string>{} : split(s, ',');
    };
    const auto node = [&](const std::string& s) {
      return s == "-" ? kNoNode : parse_number<NodeId>(s, lineno);
    };
    SampleRecord r;
    r.index = parse_number<std::uint64_t>(f[0], lineno);
    r.trial = parse_number<std::uint64_t>(f[1], lineno);
    const auto kind = parse_sample_kind(f[2]);
    if (!kind) throw Error(fmt::format("samples.log line {}: bad kind '{}'", lineno, f[2]));
    r.kind = *kind;
    r.depth = parse_number<int>(f[3], lineno);
    r.node = node(f[4]);
    r.parent = node(f[5]);
    r.acting_model = f[6];
    r.mutators = list(f[7]);
    r.next_model = f[8] == "-" ? std::string{} : f[8];
    r.child_cost = parse_number<double>(f[9], lineno);
    r.child_speedup = parse_number<double>(f[10], lineno);
    r.terminal_trace = list(f[11]);
    r.terminal_speedup = parse_number<double>(f[12], lineno);
    r.rollout_reward = parse_number<double>(f[13], lineno);
    r.regression = parse_flag(f[14], lineno);
    r.improved = parse_flag(f[15], lineno);
    r.errors = parse_number<int>(f[16], lineno);
    r.backpropagated = parse_flag(f[17], lineno);
    r.best_so_far = parse_number<double>(f[18], lineno);
    log.samples.push_back(std::move(r));
  }
  if (!header_seen) throw Error("samples.log: missing header row");
  return log;
}

}  // namespace colt
