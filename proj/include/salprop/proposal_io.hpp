#ifndef SALPROP_PROPOSAL_IO_HPP_
#define SALPROP_PROPOSAL_IO_HPP_

#include "salprop/imagecore.hpp"

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace salprop {

struct ProposalRecord
{
  BBox box;
  double score{0.0};
};

inline constexpr std::string_view kProposalHeader = "x1,y1,x2,y2,score";

/// Reads `x1,y1,x2,y2[,score]` rows in rank order. A non-numeric first line is taken as header.
std::vector<ProposalRecord> read_proposals_csv(const std::filesystem::path & path);

void write_proposals_csv(const std::filesystem::path & path, const std::vector<ProposalRecord> & proposals);

/// Shortest round-trip decimal form; locale independent.
std::string format_number(double v);

/// Split on commas and trim surrounding whitespace.
std::vector<std::string> split_csv_line(std::string_view line);

/// Strict full-field number parse; throws ParseError.
double parse_number(std::string_view field);

}  // namespace salprop

#endif  // SALPROP_PROPOSAL_IO_HPP_
