#include "salprop/imagecore.hpp"

#include <algorithm>
#include <sstream>

namespace salprop {

const char * to_string(ErrorCode code) noexcept
{
  switch (code) {
  case ErrorCode::EmptyAfterClamp: return "EmptyAfterClamp";
  case ErrorCode::DimensionMismatch: return "DimensionMismatch";
  case ErrorCode::ParseError: return "ParseError";
  case ErrorCode::InvalidBox: return "InvalidBox";
  case ErrorCode::EmptyBackground: return "EmptyBackground";
  case ErrorCode::NoFiniteValues: return "NoFiniteValues";
  case ErrorCode::NoGroundTruth: return "NoGroundTruth";
  case ErrorCode::IoError: return "IoError";
  case ErrorCode::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

std::ostream & operator<<(std::ostream & os, const BBox & b)
{
  return os << '(' << b.x1 << ',' << b.y1 << ',' << b.x2 << ',' << b.y2 << ')';
}

BBox make_box(int x1, int y1, int x2, int y2)
{
  BBox b{x1, y1, x2, y2};
  if (!b.valid()) {
    std::ostringstream ss;
    ss << "invalid box " << b;
    throw Error(ErrorCode::InvalidBox, ss.str());
  }
  return b;
}

std::int64_t intersection_area(const BBox & a, const BBox & b) noexcept
{
  const int w = std::min(a.x2, b.x2) - std::max(a.x1, b.x1);
  const int h = std::min(a.y2, b.y2) - std::max(a.y1, b.y1);
  if (w <= 0 || h <= 0) { return 0; }
  return static_cast<std::int64_t>(w) * h;
}

double bbox_iou(const BBox & a, const BBox & b) noexcept
{
  const std::int64_t inter = intersection_area(a, b);
  if (inter == 0) { return 0.0; }
  const std::int64_t uni = bbox_area(a) + bbox_area(b) - inter;
  return static_cast<double>(inter) / static_cast<double>(uni);
}

BBox clamp_box(const BBox & b, int w, int h)
{
  BBox c{std::clamp(b.x1, 0, w), std::clamp(b.y1, 0, h), std::clamp(b.x2, 0, w),
         std::clamp(b.y2, 0, h)};
  if (!c.valid()) {
    std::ostringstream ss;
    ss << b << " lies outside " << w << 'x' << h;
    throw Error(ErrorCode::EmptyAfterClamp, ss.str());
  }
  return c;
}

}  // namespace salprop
