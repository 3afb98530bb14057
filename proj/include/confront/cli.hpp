#pragma once

// Command-line front end: flag/config parsing, the subcommands, and the
// text/CSV/JSON renderers they share.

#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace confront::cli {

enum class OutputFormat { Text, Csv, Json };

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidationFailed = 1;
inline constexpr int kExitBadInput = 2;

// Significant-digit formatting shared by every renderer; "inf" / "-inf"
// for infinities.
std::string format_number(double value, int precision);

// Inverse of format_number, including "inf", "+inf", "-inf".
double parse_number(const std::string& text);

// A flat record: ordered key/value pairs. std::monostate renders as an
// empty CSV field, an empty text value, and JSON null.
using Value = std::variant<std::monostate, double, long, bool, std::string>;
using Record = std::vector<std::pair<std::string, Value>>;

class Renderer {
 public:
  Renderer(OutputFormat format, int precision, std::ostream& out);

  // Rows sharing one header. Text renders an aligned table, CSV a header
  // plus one line per row, JSON one object per line.
  void table(const std::vector<Record>& rows);
  void record(const Record& row);

 private:
  std::string cell(const Value& v) const;
  OutputFormat format_;
  int precision_;
  std::ostream& out_;
};

// Runs the oracle cross-checks behind `validate`. Returns true when every
// check passes.
bool run_validation(Renderer& renderer);

// Entry point shared by the executable and the tests. args excludes the
// program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace confront::cli
