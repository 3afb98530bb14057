#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <ostream>
#include <stdexcept>

#include <fmt/format.h>
#include <json.hpp>

#include "confront/cli.hpp"

namespace confront::cli {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string quoted = "\"";
  for (char c : s) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  return quoted + "\"";
}

}  // namespace

std::string format_number(double value, int precision) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  std::string s = fmt::format("{:.{}g}", value, precision);
  if (s == "-0") s = "0";
  return s;
}

double parse_number(const std::string& text) {
  if (text == "inf" || text == "+inf" || text == "Infinity" || text == "infinite") {
    return std::numeric_limits<double>::infinity();
  }
  if (text == "-inf" || text == "-Infinity") return -std::numeric_limits<double>::infinity();
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(text, &used);
  } catch (const std::exception&) {
    throw std::invalid_argument("not a number: '" + text + "'");
  }
  if (used != text.size() || std::isnan(value)) {
    throw std::invalid_argument("not a number: '" + text + "'");
  }
  return value;
}

Renderer::Renderer(OutputFormat format, int precision, std::ostream& out)
    : format_(format), precision_(precision), out_(out) {}

std::string Renderer::cell(const Value& v) const {
  return std::visit(Overloaded{
                        [](std::monostate) { return std::string(); },
                        [this](double d) { return format_number(d, precision_); },
                        [](long l) { return std::to_string(l); },
                        [](bool b) { return std::string(b ? "true" : "false"); },
                        [](const std::string& s) { return s; },
                    },
                    v);
}

void Renderer::table(const std::vector<Record>& rows) {
  if (rows.empty()) return;
  switch (format_) {
    case OutputFormat::Csv: {
      for (std::size_t i = 0; i < rows.front().size(); ++i) {
        out_ << (i ? "," : "") << rows.front()[i].first;
      }
      out_ << '\n';
      for (const Record& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
          out_ << (i ? "," : "") << csv_escape(cell(row[i].second));
        }
        out_ << '\n';
      }
      return;
    }
    case OutputFormat::Json: {
      for (const Record& row : rows) record(row);
      return;
    }
    case OutputFormat::Text: {
      const Record& header = rows.front();
      std::vector<std::size_t> widths(header.size());
      for (std::size_t i = 0; i < header.size(); ++i) widths[i] = header[i].first.size();
      for (const Record& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
          widths[i] = std::max(widths[i], cell(row[i].second).size());
        }
      }
      auto line = [&](auto&& text_at) {
        std::string s;
        for (std::size_t i = 0; i < widths.size(); ++i) {
          const std::string t = text_at(i);
          s += t + std::string(widths[i] - t.size() + (i + 1 < widths.size() ? 2 : 0), ' ');
        }
        while (!s.empty() && s.back() == ' ') s.pop_back();
        out_ << s << '\n';
      };
      line([&](std::size_t i) { return header[i].first; });
      for (const Record& row : rows) line([&](std::size_t i) { return cell(row[i].second); });
      return;
    }
  }
}

void Renderer::record(const Record& row) {
  switch (format_) {
    case OutputFormat::Csv:
      table({row});
      return;
    case OutputFormat::Json: {
      nlohmann::ordered_json obj = nlohmann::ordered_json::object();
      for (const auto& [key, value] : row) {
        obj[key] = std::visit(
            Overloaded{
                [](std::monostate) { return nlohmann::ordered_json(nullptr); },
                [this](double d) {
                  // Same digits as the text and CSV renderings.
                  if (!std::isfinite(d)) return nlohmann::ordered_json(format_number(d, precision_));
                  return nlohmann::ordered_json(parse_number(format_number(d, precision_)));
                },
                [](long l) { return nlohmann::ordered_json(l); },
                [](bool b) { return nlohmann::ordered_json(b); },
                [](const std::string& s) { return nlohmann::ordered_json(s); },
            },
            value);
      }
      out_ << obj.dump() << '\n';
      return;
    }
    case OutputFormat::Text: {
      std::size_t width = 0;
      for (const auto& kv : row) width = std::max(width, kv.first.size());
      for (const auto& [key, value] : row) {
        std::string text = cell(value);
        std::string lineout = key + ":" + std::string(width - key.size() + 1, ' ') + text;
        while (!lineout.empty() && lineout.back() == ' ') lineout.pop_back();
        out_ << lineout << '\n';
      }
      return;
    }
  }
}

}  // namespace confront::cli
