#include "besicover/point.hpp"

#include <sstream>

namespace besicover {

std::string point_to_string(const Point& p) {
  std::ostringstream os;
  os << "(";
  for (size_t i = 0; i < p.size(); ++i) {
    if (i) os << ",";
    os << p[i];
  }
  os << ")";
  return os.str();
}

std::vector<Point> sorted_difference(const std::vector<Point>& a, const std::vector<Point>& b) {
  std::vector<Point> out;
  out.reserve(a.size());
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

std::vector<Point> sorted_intersection(const std::vector<Point>& a, const std::vector<Point>& b) {
  std::vector<Point> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

bool sorted_is_subset(const std::vector<Point>& sub, const std::vector<Point>& super) {
  return std::includes(super.begin(), super.end(), sub.begin(), sub.end());
}

}  // namespace besicover
