#ifndef SALPROP_IMAGECORE_HPP_
#define SALPROP_IMAGECORE_HPP_

#include <Eigen/Core>

#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <string>

namespace salprop {

/// Single-channel raster, row-major, indexed (row=y, col=x).
template <typename Scalar>
using RasterT = Eigen::Array<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

using Raster   = RasterT<double>;
using LabelMap = RasterT<std::int32_t>;

enum class ErrorCode {
  EmptyAfterClamp,
  DimensionMismatch,
  ParseError,
  InvalidBox,
  EmptyBackground,
  NoFiniteValues,
  NoGroundTruth,
  IoError,
  ConfigError,
};

const char * to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error
{
public:
  Error(ErrorCode code, const std::string & what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code)
  {}

  ErrorCode code() const noexcept { return code_; }

private:
  ErrorCode code_;
};

/// Axis-aligned box in half-open pixel coordinates [x1,x2) x [y1,y2).
struct BBox
{
  int x1{0}, y1{0}, x2{1}, y2{1};

  int width() const noexcept { return x2 - x1; }
  int height() const noexcept { return y2 - y1; }
  bool valid() const noexcept { return 0 <= x1 && x1 < x2 && 0 <= y1 && y1 < y2; }
  bool contains(int x, int y) const noexcept { return x >= x1 && x < x2 && y >= y1 && y < y2; }
  bool contains(const BBox & o) const noexcept
  {
    return o.x1 >= x1 && o.y1 >= y1 && o.x2 <= x2 && o.y2 <= y2;
  }

  friend bool operator==(const BBox &, const BBox &) = default;
};

std::ostream & operator<<(std::ostream & os, const BBox & b);

/// Checked construction; throws InvalidBox when the coordinates do not form a valid box.
BBox make_box(int x1, int y1, int x2, int y2);

inline std::int64_t bbox_area(const BBox & b) noexcept
{
  return static_cast<std::int64_t>(b.width()) * b.height();
}

/// Pixel count of a ∩ b (0 when disjoint).
std::int64_t intersection_area(const BBox & a, const BBox & b) noexcept;

double bbox_iou(const BBox & a, const BBox & b) noexcept;

/// Clip to [0,w] x [0,h]. Throws EmptyAfterClamp when nothing remains.
BBox clamp_box(const BBox & b, int w, int h);

template <typename Derived>
inline BBox full_box(const Eigen::DenseBase<Derived> & r)
{
  return BBox{0, 0, static_cast<int>(r.cols()), static_cast<int>(r.rows())};
}

}  // namespace salprop

#endif  // SALPROP_IMAGECORE_HPP_
