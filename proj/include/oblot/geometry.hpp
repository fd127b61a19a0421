#pragma once

#include <cmath>
#include <optional>
#include <vector>

namespace oblot {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

struct Point {
  double x = 0.0;
  double y = 0.0;

  Point operator+(Point o) const { return {x + o.x, y + o.y}; }
  Point operator-(Point o) const { return {x - o.x, y - o.y}; }
  Point operator*(double s) const { return {x * s, y * s}; }
  Point operator/(double s) const { return {x / s, y / s}; }
  bool operator==(const Point&) const = default;
};

inline double dot(Point a, Point b) { return a.x * b.x + a.y * b.y; }
inline double cross(Point a, Point b) { return a.x * b.y - a.y * b.x; }
inline double norm(Point a) { return std::hypot(a.x, a.y); }
inline double distance(Point a, Point b) { return norm(a - b); }
inline bool finite(Point a) { return std::isfinite(a.x) && std::isfinite(a.y); }

/// Polar angle of v in [0, 2pi).
double polar_angle(Point v);
/// Counterclockwise rotation by a radians.
Point rotate(Point v, double a);
Point polar(double r, double a);
/// Orders points by x, then y.
bool lex_less(Point a, Point b);

struct Circle {
  Point center;
  double radius = 0.0;
};

struct Tolerance {
  double eps = 1e-9;
};

/// Rotational sense in the mathematical plane (y up).
enum class Chirality { Clockwise, CounterClockwise };

Chirality opposite(Chirality c);

/// Angle in [0, 2pi) swept from ray center->a to ray center->b turning in direction dir.
double sweep(Point center, Point a, Point b, Chirality dir);

Circle smallest_enclosing_circle(const std::vector<Point>& points, Tolerance tol);

bool on_boundary(Point p, const Circle& c, Tolerance tol);
bool strictly_inside(Point p, const Circle& c, Tolerance tol);

/// Points within eps of the center lie on every ray.
bool co_radial(Point a, Point b, Point center, Tolerance tol);

/// True if some point of obstacles lies on segment [a, b] other than within eps of the endpoints.
bool segment_blocked(Point a, Point b, const std::vector<Point>& obstacles, Tolerance tol);

enum class Source { Robot, Pattern };

struct SPrimeEntry {
  Point point;
  Source source = Source::Robot;
};

struct SPrime {
  std::vector<SPrimeEntry> entries;  // sorted by polar angle about the center
  bool defined() const { return entries.size() > 2; }
};

/// One representative per ray: most external robot, else most external pattern point.
/// Points at the center are dropped.
SPrime build_s_prime(const std::vector<Point>& robots, const std::vector<Point>* pattern, const Circle& sec,
                     Tolerance tol);

struct AngleSequence {
  std::vector<Point> points;
  std::vector<double> angles;  // angles[i] between points[i] and points[i+1]
  Chirality direction = Chirality::Clockwise;
};

/// Throws UsageError if fewer than three points or start is not one of them.
AngleSequence angle_sequence(const std::vector<Point>& s_prime, Point center, Point start, Chirality direction,
                             Tolerance tol);

struct LeaderAngularSequence {
  AngleSequence base;  // starts at inner_point and runs in orientation
  std::size_t theta1_index = 0;
  Point inner_point;
  Point boundary_point;
  Chirality orientation = Chirality::Clockwise;  // the sense that counts as clockwise
  double theta1 = 0.0;
};

std::optional<LeaderAngularSequence> leader_angular_sequence(const std::vector<Point>& robots,
                                                             const std::vector<Point>* pattern, Tolerance tol);
std::optional<LeaderAngularSequence> leader_angular_sequence(const std::vector<Point>& robots,
                                                             const std::vector<Point>* pattern, const Circle& sec,
                                                             Tolerance tol);

struct RadiangularDistance {
  double angle = 0.0;
  double length = 0.0;
};

RadiangularDistance radiangular_distance(Point a, Point b, Point center, Chirality orientation, Tolerance tol);

/// Priority rule of the walker order: smaller angle first; equal nonzero angle, longer first;
/// both zero, shorter first.
bool higher_priority(const RadiangularDistance& a, const RadiangularDistance& b, Tolerance tol);

}  // namespace oblot
