#include "pipeline/sampling.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <map>

#include "common/error.hpp"
#include "common/rng.hpp"
#include "common/util.hpp"

namespace evifuse::pipeline {
namespace {

std::vector<std::vector<std::size_t>> rows_by_class(const SpectrumDataset& ds) {
  std::vector<std::vector<std::size_t>> out(static_cast<std::size_t>(std::max(ds.labels.cardinality(), 0)));
  for (std::size_t i = 0; i < ds.labels.size(); ++i) out[static_cast<std::size_t>(ds.labels[i])].push_back(i);
  return out;
}

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(sep, start);
    out.push_back(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

template <typename T>
T parse_number(std::string_view field, std::size_t line) {
  field = trim(field);
  T v{};
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (ec != std::errc() || ptr != field.data() + field.size())
    fail(ErrorCode::ParseError, "line " + std::to_string(line) + ": bad number '" + std::string(field) + "'");
  return v;
}

}  // namespace

Split split_train_validation(const SpectrumDataset& dataset, double fraction, std::uint64_t seed) {
  require(fraction > 0.0 && fraction < 1.0, ErrorCode::InvalidArgument, "train fraction must be in (0,1)");
  Rng rng(seed);
  std::vector<std::size_t> train, val;
  for (auto& rows : rows_by_class(dataset)) {
    if (rows.empty()) continue;
    require(rows.size() >= 2, ErrorCode::ClassTooSmall, "every class needs at least two samples");
    rng.shuffle(rows);
    const auto n = rows.size();
    const auto n_train = std::clamp<std::size_t>(static_cast<std::size_t>(std::floor(static_cast<double>(n) * fraction)), 1, n - 1);
    train.insert(train.end(), rows.begin(), rows.begin() + static_cast<std::ptrdiff_t>(n_train));
    val.insert(val.end(), rows.begin() + static_cast<std::ptrdiff_t>(n_train), rows.end());
  }
  std::sort(train.begin(), train.end());
  std::sort(val.begin(), val.end());
  return {dataset.subset(train), dataset.subset(val)};
}

SpectrumDataset oversample_minority(const SpectrumDataset& train, std::uint64_t seed) {
  const auto groups = rows_by_class(train);
  std::size_t largest = 0;
  for (const auto& g : groups) largest = std::max(largest, g.size());
  Rng rng(seed);
  std::vector<std::size_t> rows(train.samples());
  for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = i;
  for (const auto& g : groups) {
    if (g.empty()) continue;
    for (std::size_t extra = g.size(); extra < largest; ++extra) rows.push_back(g[rng.below(g.size())]);
  }
  if (rows.size() == train.samples()) return train;
  return train.subset(rows);
}

double snr_db_from_nsr(double nsr_percent) {
  if (nsr_percent <= 0.0) return std::numeric_limits<double>::infinity();
  return -20.0 * std::log10(nsr_percent / 100.0);
}

namespace {

// Scale s for unit-RMS noise n so that RMS(max(x + s n, 0) - x) equals the
// target. The floor only ever shrinks the realized noise, and the realized RMS
// grows monotonically with s, so bisect upwards from the target itself.
double floored_scale(const Eigen::RowVectorXd& x, const Eigen::RowVectorXd& n, double target) {
  const double count = static_cast<double>(x.size());
  auto realized = [&](double scale) { return ((x + scale * n).cwiseMax(0.0) - x).norm() / std::sqrt(count); };
  double lo = target, hi = target;
  if (realized(lo) >= target) return lo;
  for (int i = 0; i < 64 && realized(hi) < target; ++i) hi *= 2.0;
  for (int i = 0; i < 100 && hi - lo > 1e-13 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    (realized(mid) < target ? lo : hi) = mid;
  }
  return hi;
}

}  // namespace

NoisyDataset add_noise(const SpectrumDataset& dataset, double nsr_percent, std::uint64_t seed) {
  require(nsr_percent >= 0.0 && std::isfinite(nsr_percent), ErrorCode::InvalidArgument, "noise level must be >= 0");
  NoisyDataset out{dataset, nsr_percent, snr_db_from_nsr(nsr_percent)};
  if (nsr_percent == 0.0) return out;
  const double ratio = nsr_percent / 100.0;
  std::uint64_t channel_no = 0;
  for (auto& [name, m] : out.dataset.channels) {
    ++channel_no;
    for (Eigen::Index s = 0; s < m.rows(); ++s) {
      Rng rng(derive_seed(derive_seed(seed, channel_no), static_cast<std::uint64_t>(s)));
      const double signal_rms = m.row(s).norm() / std::sqrt(static_cast<double>(m.cols()));
      Eigen::RowVectorXd noise(m.cols());
      for (Eigen::Index i = 0; i < m.cols(); ++i) noise(i) = rng.normal();
      const double noise_rms = noise.norm() / std::sqrt(static_cast<double>(m.cols()));
      if (noise_rms > 0.0 && signal_rms > 0.0) {
        noise /= noise_rms;
        noise *= floored_scale(m.row(s), noise, ratio * signal_rms);
      }
      m.row(s) = (m.row(s) + noise).cwiseMax(0.0);
    }
  }
  return out;
}

std::vector<BandSection> bandwidth_split(const SpectrumDataset& dataset, std::size_t n_sections) {
  const std::size_t n_f = dataset.frequency_count();
  require(n_sections >= 1 && n_sections <= n_f, ErrorCode::TooManySections,
          "cannot split " + std::to_string(n_f) + " lines into " + std::to_string(n_sections) + " sections");
  std::vector<BandSection> out;
  const std::size_t base = n_f / n_sections;
  const std::size_t extra = n_f % n_sections;
  std::size_t at = 0;
  for (std::size_t i = 0; i < n_sections; ++i) {
    const std::size_t len = base + (i < extra ? 1 : 0);
    BandSection sec;
    sec.index = i;
    sec.begin = at;
    sec.end = at + len;
    sec.start_hz = dataset.frequencies[at];
    sec.dataset = n_sections == 1 ? dataset : dataset.frequency_slice(at, at + len);
    out.push_back(std::move(sec));
    at += len;
  }
  return out;
}

std::string format_dataset_csv(const SpectrumDataset& dataset) {
  std::string out = "# frequencies_hz: ";
  for (std::size_t i = 0; i < dataset.frequencies.size(); ++i)
    out += (i ? "," : "") + format_double(dataset.frequencies[i]);
  out += "\n# classes: ";
  for (std::size_t i = 0; i < dataset.class_names.size(); ++i) out += (i ? "," : "") + dataset.class_names[i];
  out += "\nsample_id,label,ch";
  for (std::size_t i = 0; i < dataset.frequencies.size(); ++i) out += ",f_" + std::to_string(i);
  out += '\n';
  for (std::size_t s = 0; s < dataset.samples(); ++s) {
    for (const auto& [name, m] : dataset.channels) {
      out += dataset.sample_ids[s] + "," + std::to_string(dataset.labels[s]) + "," + name;
      for (Eigen::Index i = 0; i < m.cols(); ++i) out += "," + format_double(m(static_cast<Eigen::Index>(s), i));
      out += '\n';
    }
  }
  return out;
}

SpectrumDataset parse_dataset_csv(std::string_view text) {
  SpectrumDataset ds;
  ds.class_names.clear();
  bool have_freq = false, have_header = false;
  std::vector<std::string> order;
  std::map<std::string, std::size_t> sample_index;
  std::vector<int> labels;
  std::map<std::string, std::vector<std::vector<double>>> rows;  // channel -> per-sample values

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    auto line = trim(text.substr(pos, end - pos));
    pos = end + 1;
    ++line_no;
    if (line.empty()) continue;
    if (line.front() == '#') {
      auto body = trim(line.substr(1));
      if (body.starts_with("frequencies_hz:")) {
        for (auto f : split(trim(body.substr(15)), ',')) ds.frequencies.push_back(parse_number<double>(f, line_no));
        have_freq = true;
      } else if (body.starts_with("classes:")) {
        for (auto c : split(trim(body.substr(8)), ',')) ds.class_names.emplace_back(trim(c));
      }
      continue;
    }
    const auto fields = split(line, ',');
    if (!have_header) {
      if (fields.size() < 4 || trim(fields[0]) != "sample_id" || trim(fields[1]) != "label" || trim(fields[2]) != "ch")
        fail(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": expected header 'sample_id,label,ch,...'");
      if (!have_freq) fail(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": missing '# frequencies_hz:' line");
      if (fields.size() - 3 != ds.frequencies.size())
        fail(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": header width differs from frequency list");
      have_header = true;
      continue;
    }
    if (fields.size() != ds.frequencies.size() + 3)
      fail(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": expected " +
                                      std::to_string(ds.frequencies.size() + 3) + " fields, got " +
                                      std::to_string(fields.size()));
    const std::string id(trim(fields[0]));
    const int label = parse_number<int>(fields[1], line_no);
    if (label < 0) fail(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": negative label");
    const std::string ch(trim(fields[2]));
    auto [it, inserted] = sample_index.try_emplace(id, order.size());
    if (inserted) {
      order.push_back(id);
      labels.push_back(label);
    } else if (labels[it->second] != label) {
      fail(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": conflicting label for '" + id + "'");
    }
    auto& per_sample = rows[ch];
    if (per_sample.size() <= it->second) per_sample.resize(it->second + 1);
    if (!per_sample[it->second].empty())
      fail(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": duplicate row for '" + id + "' channel " + ch);
    auto& values = per_sample[it->second];
    values.reserve(ds.frequencies.size());
    for (std::size_t i = 3; i < fields.size(); ++i) values.push_back(parse_number<double>(fields[i], line_no));
  }
  if (!have_header) fail(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": missing header");
  if (order.empty()) fail(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": no data rows");

  const auto n_s = static_cast<Eigen::Index>(order.size());
  const auto n_f = static_cast<Eigen::Index>(ds.frequencies.size());
  for (auto& [ch, per_sample] : rows) {
    per_sample.resize(order.size());
    Eigen::MatrixXd m(n_s, n_f);
    for (Eigen::Index s = 0; s < n_s; ++s) {
      const auto& v = per_sample[static_cast<std::size_t>(s)];
      if (v.empty()) fail(ErrorCode::ParseError, "sample '" + order[static_cast<std::size_t>(s)] + "' lacks channel " + ch);
      for (Eigen::Index i = 0; i < n_f; ++i) m(s, i) = v[static_cast<std::size_t>(i)];
    }
    ds.channels.emplace(ch, std::move(m));
  }
  ds.sample_ids = std::move(order);
  ds.labels = infotheory::LabelVector(std::move(labels));
  if (ds.class_names.empty()) {
    for (int c = 0; c < ds.labels.cardinality(); ++c) ds.class_names.push_back("class" + std::to_string(c));
  }
  ds.validate(false);
  return ds;
}

}  // namespace evifuse::pipeline
