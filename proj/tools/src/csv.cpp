#include "msvsim/csv.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <locale>
#include <sstream>

namespace msvsim {
namespace {

// Integer columns go through operator<<, so the stream's locale must not
// be allowed to add digit grouping.
class ClassicLocale {
 public:
  explicit ClassicLocale(std::ostream& out) : out_(out), saved_(out.imbue(std::locale::classic())) {}
  ~ClassicLocale() { out_.imbue(saved_); }
  ClassicLocale(const ClassicLocale&) = delete;
  ClassicLocale& operator=(const ClassicLocale&) = delete;

 private:
  std::ostream& out_;
  std::locale saved_;
};

}  // namespace

std::string format_number(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, 17);
  if (ec != std::errc{}) throw std::runtime_error("number formatting failed");
  return std::string(buf, ptr);
}

void write_learning_curve_csv(std::ostream& out, std::span<const msv::TrialResult> trials) {
  const ClassicLocale classic(out);
  out << "trial,epoch,raw_reward,filtered_reward\n";
  for (std::size_t t = 0; t < trials.size(); ++t) {
    const auto& trial = trials[t];
    for (std::size_t e = 0; e < trial.filtered_curve.size(); ++e)
      out << t << ',' << e + 1 << ',' << format_number(trial.raw_curve[e]) << ','
          << format_number(trial.filtered_curve[e]) << '\n';
  }
}

void write_sweep_csv(std::ostream& out, std::span<const msv::SweepResult> sweeps) {
  const ClassicLocale classic(out);
  out << "rule,lr_hidden,mean_epochs,std_epochs,n_converged\n";
  for (const auto& sweep : sweeps)
    for (const auto& p : sweep.points)
      out << msv::to_string(sweep.rule) << ',' << format_number(p.lr_hidden) << ','
          << format_number(p.mean_epochs) << ',' << format_number(p.std_epochs) << ','
          << p.n_converged << '\n';
}

void write_comparison_csv(std::ostream& out, const msv::ComparisonReport& report) {
  const ClassicLocale classic(out);
  out << "rule,mean,std,n_converged\n";
  for (const auto* arm : {&report.a, &report.b})
    out << msv::to_string(arm->spec.rule) << ',' << format_number(arm->epochs.mean) << ','
        << format_number(arm->epochs.stddev) << ',' << arm->epochs.converged.size() << '\n';
}

void write_stats_csv(std::ostream& out, const msv::WelchResult& welch) {
  const ClassicLocale classic(out);
  out << "t,nu,p_one_sided,p_two_sided\n"
      << format_number(welch.t) << ',' << format_number(welch.nu) << ','
      << format_number(welch.p_one_sided) << ',' << format_number(welch.p_two_sided) << '\n';
}

void write_pulse_map_csv(std::ostream& out, const msv::PulseMap& map) {
  const ClassicLocale classic(out);
  out << "voltage_v,duration_s,onoff_ratio\n";
  for (std::size_t i = 0; i < map.voltages.size(); ++i)
    for (std::size_t j = 0; j < map.durations.size(); ++j)
      out << format_number(map.voltages[i]) << ',' << format_number(map.durations[j]) << ','
          << format_number(map.at(i, j)) << '\n';
}

std::size_t CsvTable::column(std::string_view name) const {
  const auto it = std::find(header.begin(), header.end(), name);
  if (it == header.end()) throw std::out_of_range("no column '" + std::string(name) + "'");
  return static_cast<std::size_t>(it - header.begin());
}

bool CsvTable::has_columns(std::initializer_list<std::string_view> names) const {
  return std::all_of(names.begin(), names.end(), [&](std::string_view n) {
    return std::find(header.begin(), header.end(), n) != header.end();
  });
}

namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

}  // namespace

CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path.string() + "'");
  CsvTable table;
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("'" + path.string() + "' is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  table.header = split(line);
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto row = split(line);
    if (row.size() != table.header.size())
      throw std::runtime_error("ragged row in '" + path.string() + "'");
    table.rows.push_back(std::move(row));
  }
  return table;
}

}  // namespace msvsim
