#include "speechagent/metrics/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace speechagent::metrics {

namespace {

using json = nlohmann::json;

constexpr std::array<sir::ImpairmentClass, 3> kTableClasses = sir::kImpairedClasses;

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string pm(const MeanStd& m) { return fixed(m.mean, 3) + "±" + fixed(m.std, 3); }

json to_json(const MeanStd& m) { return {{"mean", m.mean}, {"std", m.std}, {"n", m.n}}; }

// Display width of UTF-8 text (counts code points).
std::size_t width(const std::string& s) {
  return static_cast<std::size_t>(
      std::count_if(s.begin(), s.end(), [](char c) { return (static_cast<unsigned char>(c) & 0xC0) != 0x80; }));
}

std::string pad(const std::string& s, std::size_t w) {
  const std::size_t cur = width(s);
  return cur >= w ? s : s + std::string(w - cur, ' ');
}

std::string render_table(const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> widths;
  for (const auto& r : rows) {
    widths.resize(std::max(widths.size(), r.size()), 0);
    for (std::size_t i = 0; i < r.size(); ++i) widths[i] = std::max(widths[i], width(r[i]));
  }
  std::ostringstream out;
  for (std::size_t k = 0; k < rows.size(); ++k) {
    std::string line;
    for (std::size_t i = 0; i < rows[k].size(); ++i) {
      if (i > 0) line += "  ";
      line += pad(rows[k][i], widths[i]);
    }
    while (!line.empty() && line.back() == ' ') line.pop_back();
    out << line << '\n';
    if (k == 1) {
      std::size_t total = 0;
      for (auto w : widths) total += w + 2;
      out << std::string(total - 2, '-') << '\n';
    }
  }
  return out.str();
}

}  // namespace

MeanStd mean_std(std::span<const double> values) {
  MeanStd m;
  m.n = values.size();
  if (values.empty()) return m;
  double sum = 0.0;
  for (double v : values) sum += v;
  m.mean = sum / static_cast<double>(m.n);
  if (m.n > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - m.mean) * (v - m.mean);
    m.std = std::sqrt(ss / static_cast<double>(m.n - 1));
  }
  return m;
}

json to_json(const TextReport& report) {
  json rows = json::array();
  for (const auto& row : report.rows) {
    json cells = json::object();
    for (const auto& [cls, cell] : row.cells) {
      json c = {{"bleu", to_json(cell.bleu)}, {"cosine", to_json(cell.cosine)}};
      if (cell.bert) c["bert"] = to_json(*cell.bert);
      cells[std::string(sir::to_string(cls))] = c;
    }
    rows.push_back({{"method", row.method}, {"failures", row.failures}, {"cells", cells}});
  }
  json out = {{"table", "text_refinement"}, {"rows", rows}, {"config", report.run_config}};
  if (!report.has_bert) {
    out["footnote"] = "BERT column omitted: no external embedding backend configured.";
  }
  return out;
}

std::string to_text(const TextReport& report) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> groups = {""}, header = {"Method"};
  for (auto cls : kTableClasses) {
    const std::string name(sir::display_name(cls));
    if (report.has_bert) {
      groups.insert(groups.end(), {name, "", ""});
      header.insert(header.end(), {"BERT", "BLEU", "CosSim"});
    } else {
      groups.insert(groups.end(), {name, ""});
      header.insert(header.end(), {"BLEU", "CosSim"});
    }
  }
  rows.push_back(groups);
  rows.push_back(header);
  for (const auto& row : report.rows) {
    std::vector<std::string> line = {row.method};
    for (auto cls : kTableClasses) {
      const auto it = row.cells.find(cls);
      if (it == row.cells.end()) {
        line.insert(line.end(), report.has_bert ? 3 : 2, "-");
        continue;
      }
      if (report.has_bert) line.push_back(it->second.bert ? pm(*it->second.bert) : "-");
      line.push_back(pm(it->second.bleu));
      line.push_back(pm(it->second.cosine));
    }
    rows.push_back(line);
  }
  std::string out = render_table(rows);
  if (!report.has_bert) out += "* BERT column omitted: no external embedding backend configured.\n";
  for (const auto& row : report.rows) {
    if (row.failures > 0) {
      out += "* " + row.method + ": " + std::to_string(row.failures) + " failed entries excluded\n";
    }
  }
  return out;
}

json to_json(const SpeechReport& report) {
  json rows = json::array();
  for (const auto& row : report.rows) {
    json cells = json::object();
    for (const auto& [cls, cell] : row.cells) {
      json c = {{"n", cell.n}};
      c["clarity"] = cell.clarity ? json(*cell.clarity) : json(nullptr);
      c["cmos"] = cell.cmos ? json(*cell.cmos) : json(nullptr);
      c["recover"] = cell.recover ? json(*cell.recover) : json(nullptr);
      cells[std::string(sir::to_string(cls))] = c;
    }
    rows.push_back({{"method", row.method}, {"cells", cells}});
  }
  return {{"table", "speech_refinement"}, {"rows", rows}, {"config", report.run_config}};
}

std::string to_text(const SpeechReport& report) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> groups = {""}, header = {"Method"};
  for (auto cls : kTableClasses) {
    groups.insert(groups.end(), {std::string(sir::display_name(cls)), "", ""});
    header.insert(header.end(), {"Clarity", "C-MOS", "Recover"});
  }
  rows.push_back(groups);
  rows.push_back(header);
  auto opt = [](const std::optional<double>& v, int digits) { return v ? fixed(*v, digits) : "-"; };
  for (const auto& row : report.rows) {
    std::vector<std::string> line = {row.method};
    for (auto cls : kTableClasses) {
      const auto it = row.cells.find(cls);
      if (it == row.cells.end()) {
        line.insert(line.end(), 3, "-");
        continue;
      }
      line.push_back(opt(it->second.clarity, 2));
      line.push_back(opt(it->second.cmos, 2));
      line.push_back(opt(it->second.recover, 1));
    }
    rows.push_back(line);
  }
  return render_table(rows);
}

json to_json(const sir::EvalReport& report) {
  json classes = json::object();
  for (std::size_t c = 0; c < sir::kNumClasses; ++c) {
    const auto& m = report.per_class[c];
    if (!m) continue;
    classes[std::string(sir::to_string(sir::kAllClasses[c]))] = {
        {"support", m->support},
        {"accuracy", m->accuracy},
        {"precision", m->precision},
        {"f1", m->f1},
        {"auc", m->auc ? json(*m->auc) : json(nullptr)},
    };
  }
  json confusion = json::array();
  for (int r = 0; r < 4; ++r) {
    confusion.push_back({report.confusion(r, 0), report.confusion(r, 1), report.confusion(r, 2),
                         report.confusion(r, 3)});
  }
  return {
      {"n", report.n},
      {"classes", classes},
      {"overall",
       {{"accuracy", report.overall_accuracy},
        {"f1", report.overall_f1},
        {"auc", report.overall_auc ? json(*report.overall_auc) : json(nullptr)},
        {"micro_accuracy", report.micro_accuracy}}},
      {"confusion", confusion},
  };
}

std::string to_text(const sir::EvalReport& report, const std::string& model_name) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> groups = {""}, header = {"Model"};
  for (auto cls : sir::kAllClasses) {
    groups.insert(groups.end(), {std::string(sir::display_name(cls)), "", ""});
    header.insert(header.end(), {"Acc", "F1", "AUC"});
  }
  groups.insert(groups.end(), {"Overall", "", ""});
  header.insert(header.end(), {"Acc", "F1", "AUC"});
  rows.push_back(groups);
  rows.push_back(header);

  std::vector<std::string> line = {model_name};
  for (std::size_t c = 0; c < sir::kNumClasses; ++c) {
    const auto& m = report.per_class[c];
    if (!m) {
      line.insert(line.end(), 3, "-");
      continue;
    }
    line.push_back(fixed(100.0 * m->accuracy, 1));
    line.push_back(fixed(m->f1, 2));
    line.push_back(m->auc ? fixed(*m->auc, 2) : "-");
  }
  line.push_back(fixed(100.0 * report.overall_accuracy, 1));
  line.push_back(fixed(report.overall_f1, 2));
  line.push_back(report.overall_auc ? fixed(*report.overall_auc, 2) : "-");
  rows.push_back(line);
  return render_table(rows);
}

}  // namespace speechagent::metrics
