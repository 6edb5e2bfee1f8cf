#include "fusion/io.hpp"

#include <cctype>
#include <charconv>
#include <sstream>

#include "common/util.hpp"

namespace evifuse::fusion {
namespace {

std::vector<std::string_view> split_csv_line(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    out.push_back(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  for (auto& f : out) {
    while (!f.empty() && std::isspace(static_cast<unsigned char>(f.front()))) f.remove_prefix(1);
    while (!f.empty() && std::isspace(static_cast<unsigned char>(f.back()))) f.remove_suffix(1);
  }
  return out;
}

[[noreturn]] void parse_fail(std::size_t line, const std::string& what) {
  fail(ErrorCode::ParseError, "line " + std::to_string(line) + ": " + what);
}

}  // namespace

ScoreMatrix parse_score_csv(std::string_view text, std::string classifier_id,
                            const std::vector<std::string>& expected_labels) {
  std::vector<std::string> labels;
  std::vector<std::string> ids;
  std::vector<double> values;
  std::size_t line_no = 0;
  bool have_header = false;

  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    auto line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty() || line.front() == '#') {
      if (end == text.size()) break;
      continue;
    }
    const auto fields = split_csv_line(line);
    if (!have_header) {
      if (fields.size() < 2 || fields[0] != "sample_id") parse_fail(line_no, "expected header 'sample_id,<classes...>'");
      for (std::size_t i = 1; i < fields.size(); ++i) labels.emplace_back(fields[i]);
      if (!expected_labels.empty() && labels != expected_labels)
        fail(ErrorCode::ClassMismatch, "line " + std::to_string(line_no) + ": class columns do not match the frame");
      have_header = true;
    } else {
      if (fields.size() != labels.size() + 1)
        parse_fail(line_no, "expected " + std::to_string(labels.size() + 1) + " fields, got " +
                                std::to_string(fields.size()));
      ids.emplace_back(fields[0]);
      double sum = 0.0;
      for (std::size_t i = 1; i < fields.size(); ++i) {
        double v = 0.0;
        const auto f = fields[i];
        auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
        if (ec != std::errc() || ptr != f.data() + f.size()) parse_fail(line_no, "bad number '" + std::string(f) + "'");
        if (!(v >= 0.0 && v <= 1.0)) parse_fail(line_no, "score outside [0,1]");
        values.push_back(v);
        sum += v;
      }
      if (sum > 1.0 + ScoreMatrix::kRowSumTolerance)
        fail(ErrorCode::RowSumExceedsOne, "line " + std::to_string(line_no) + ": scores sum to " + std::to_string(sum));
    }
    if (end == text.size()) break;
  }
  if (!have_header) parse_fail(line_no, "missing header");
  if (ids.empty()) parse_fail(line_no, "no score rows");

  const auto n_s = static_cast<Eigen::Index>(ids.size());
  const auto n_c = static_cast<Eigen::Index>(labels.size());
  Eigen::MatrixXd m(n_s, n_c);
  for (Eigen::Index s = 0; s < n_s; ++s)
    for (Eigen::Index k = 0; k < n_c; ++k) m(s, k) = values[static_cast<std::size_t>(s * n_c + k)];
  return ScoreMatrix(std::move(classifier_id), std::move(labels), std::move(m), std::move(ids));
}

std::string format_score_csv(const ScoreMatrix& scores) {
  std::string out = "sample_id";
  for (const auto& l : scores.class_labels()) out += "," + l;
  out += '\n';
  for (Eigen::Index s = 0; s < scores.samples(); ++s) {
    out += scores.sample_ids()[static_cast<std::size_t>(s)];
    for (Eigen::Index k = 0; k < scores.classes(); ++k) out += "," + format_double(scores.scores()(s, k));
    out += '\n';
  }
  return out;
}

std::string snake_case(std::string_view camel) {
  std::string out;
  for (char c : camel) {
    if (std::isupper(static_cast<unsigned char>(c))) {
      if (!out.empty()) out += '_';
      out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    } else {
      out += c;
    }
  }
  return out;
}

std::string format_fused_csv(const BatchFusion& batch) {
  const auto& scores = batch.fused;
  std::vector<std::string> status(static_cast<std::size_t>(scores.samples()), "ok");
  for (const auto& f : batch.failures) status[static_cast<std::size_t>(f.row)] = snake_case(to_string(f.code));

  std::string out = "sample_id";
  for (const auto& l : scores.class_labels()) out += "," + l;
  out += ",ignorance,status\n";
  for (Eigen::Index s = 0; s < scores.samples(); ++s) {
    const auto i = static_cast<std::size_t>(s);
    out += scores.sample_ids()[i];
    for (Eigen::Index k = 0; k < scores.classes(); ++k) out += "," + format_double(scores.scores()(s, k));
    out += "," + format_double(batch.ignorance[i]) + "," + status[i] + '\n';
  }
  return out;
}

nlohmann::json bba_to_json(const Bba& m) {
  auto arr = nlohmann::json::array();
  for (const auto& fm : m.focal()) arr.push_back({{"set", fm.set.members()}, {"mass", fm.mass}});
  return arr;
}

nlohmann::json trace_to_json(const FusionTrace& t) {
  nlohmann::json j;
  j["abjs"] = t.abjs;
  j["disagreement"] = t.disagreement;
  j["sd_hat"] = t.sd_hat;
  j["cd_hat"] = t.cd_hat;
  j["sd_chief_hat"] = t.sd_chief_hat;
  j["chief_index"] = t.chief_index();
  j["chief_set"] = t.chief.members();
  j["w_hat"] = t.w_hat;
  j["wae"] = bba_to_json(t.wae);
  j["fused"] = bba_to_json(t.fused);
  return j;
}

std::string format_trace_jsonl(const BatchFusion& batch) {
  std::vector<const RowFailure*> failure_of(batch.traces.size(), nullptr);
  for (const auto& f : batch.failures) failure_of[static_cast<std::size_t>(f.row)] = &f;
  std::string out;
  for (std::size_t s = 0; s < batch.traces.size(); ++s) {
    nlohmann::json j;
    if (batch.traces[s]) {
      j = trace_to_json(*batch.traces[s]);
    } else if (failure_of[s]) {
      j["error"] = snake_case(to_string(failure_of[s]->code));
    }
    j["sample_id"] = batch.fused.sample_ids()[s];
    out += j.dump() + '\n';
  }
  return out;
}

}  // namespace evifuse::fusion
