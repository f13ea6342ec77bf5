#include "salprop/proposal_io.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>

namespace salprop {

std::string format_number(double v)
{
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), res.ptr);
}

std::vector<std::string> split_csv_line(std::string_view line)
{
  std::vector<std::string> fields;
  auto trim = [](std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) { return std::string_view{}; }
    return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
  };
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    fields.emplace_back(trim(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start)));
    if (comma == std::string_view::npos) { break; }
    start = comma + 1;
  }
  return fields;
}

double parse_number(std::string_view field)
{
  double v = 0.0;
  const char * first = field.data();
  if (!field.empty() && field.front() == '+') { ++first; }
  const auto res = std::from_chars(first, field.data() + field.size(), v);
  if (field.empty() || res.ec != std::errc() || res.ptr != field.data() + field.size() || !std::isfinite(v)) {
    throw Error(ErrorCode::ParseError, "not a number: '" + std::string(field) + "'");
  }
  return v;
}

std::vector<ProposalRecord> read_proposals_csv(const std::filesystem::path & path)
{
  std::ifstream in(path);
  if (!in) { throw Error(ErrorCode::IoError, "cannot open " + path.string()); }
  std::vector<ProposalRecord> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) { continue; }
    const auto fields = split_csv_line(line);
    try {
      if (fields.size() < 4 || fields.size() > 5) {
        throw Error(ErrorCode::ParseError, "expected 4 or 5 fields");
      }
      ProposalRecord r;
      r.box   = BBox{static_cast<int>(std::lround(parse_number(fields[0]))), static_cast<int>(std::lround(parse_number(fields[1]))),
                     static_cast<int>(std::lround(parse_number(fields[2]))), static_cast<int>(std::lround(parse_number(fields[3])))};
      r.score = fields.size() == 5 ? parse_number(fields[4]) : 0.0;
      out.push_back(r);
    } catch (const Error &) {
      if (line_no == 1 && out.empty()) { continue; }  // header
      throw Error(ErrorCode::ParseError, path.string() + ":" + std::to_string(line_no) + ": malformed proposal row");
    }
  }
  return out;
}

void write_proposals_csv(const std::filesystem::path & path, const std::vector<ProposalRecord> & proposals)
{
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) { throw Error(ErrorCode::IoError, "cannot write " + path.string()); }
  out << kProposalHeader << '\n';
  for (const auto & p : proposals) {
    out << p.box.x1 << ',' << p.box.y1 << ',' << p.box.x2 << ',' << p.box.y2 << ',' << format_number(p.score) << '\n';
  }
  if (!out) { throw Error(ErrorCode::IoError, "failed writing " + path.string()); }
}

}  // namespace salprop
