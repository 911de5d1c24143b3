#include "jb/martingale.hpp"

#include <algorithm>
#include <cmath>

#include "jb/error.hpp"

namespace jb {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Cascade states.
enum : std::uint32_t { kLevelRoot = 0, kUp = 1, kDown = 2, kUpUp = 3, kDrift = 4, kQuiet = 5 };

}  // namespace

MartingaleModel::MartingaleModel(DyadicInterval base, double root_value, double step_bound, Generator generator)
    : base_(base.root()), root_value_(root_value), step_bound_(step_bound), generator_(std::move(generator)) {
  if (!(step_bound_ > 0.0)) throw Error(ErrorCode::InvalidArgument, "martingale step bound must be positive");
  if (const auto* ex = std::get_if<ExplicitIncrements>(&generator_)) {
    for (const auto& e : ex->entries) {
      if (e.depth < 1 || e.depth > kMaxDyadicDepth || e.index >= (std::uint64_t{1} << e.depth))
        throw Error(ErrorCode::InvalidArgument, "explicit increment outside the dyadic tree");
      if (std::abs(e.value) > step_bound_ * (1.0 + 1e-12))
        throw Error(ErrorCode::CertificateViolation, "explicit increment exceeds the step bound");
      explicit_[{e.depth, e.index}] += e.value;
      if (e.value != 0.0) {
        data_depth_ = std::max(data_depth_, e.depth);
        for (int d = 0; d < e.depth; ++d) active_.insert({d, e.index >> (e.depth - d)});
      }
    }
  } else if (const auto* bal = std::get_if<BalancedGenerator>(&generator_)) {
    if (bal->depth < 0 || bal->depth > kMaxDyadicDepth)
      throw Error(ErrorCode::InvalidArgument, "balanced generator depth out of range");
    data_depth_ = bal->depth;
  } else {
    const auto& cas = std::get<CascadeGenerator>(generator_);
    if (cas.levels < 1) throw Error(ErrorCode::InvalidArgument, "cascade needs at least one level");
    data_depth_ = 3 * (cas.levels - 1) + 7;
    if (data_depth_ > kMaxDyadicDepth) throw Error(ErrorCode::DepthExceeded, "cascade too deep");
  }
}

MartingaleCursor MartingaleModel::root_cursor() const {
  MartingaleCursor c;
  c.node = base_;
  c.value = root_value_;
  c.state = kLevelRoot;
  c.level = 0;
  c.sign = 1;
  if (std::holds_alternative<ExplicitIncrements>(generator_)) c.quiet = !active_.contains({0, 0});
  else c.quiet = data_depth_ == 0;
  return c;
}

MartingaleCursor MartingaleModel::child(const MartingaleCursor& c, int bit) const {
  MartingaleCursor out = c;
  out.node = c.node.child(bit);
  if (c.quiet) return out;
  const int d = out.node.depth();
  const std::uint64_t i = out.node.index();

  if (std::holds_alternative<ExplicitIncrements>(generator_)) {
    auto it = explicit_.find({d, i});
    if (it != explicit_.end()) out.value += it->second;
    out.quiet = !active_.contains({d, i});
    return out;
  }
  if (const auto* bal = std::get_if<BalancedGenerator>(&generator_)) {
    const std::uint64_t h = splitmix64(bal->seed ^ splitmix64((static_cast<std::uint64_t>(c.node.depth()) << 58) ^
                                                             c.node.index()));
    const double s = (h & 1) ? 1.0 : -1.0;
    out.value += (bit == 0 ? s : -s) * step_bound_;
    out.quiet = d >= bal->depth;
    return out;
  }

  const auto& cas = std::get<CascadeGenerator>(generator_);
  const double up = c.sign * step_bound_;
  switch (c.state) {
    case kLevelRoot:
      out.value += bit == 0 ? up : -up;
      out.state = bit == 0 ? kUp : kDown;
      break;
    case kUp:
      if (bit == 0) {
        out.value += up;
        out.state = kUpUp;
      } else {
        out.value -= up;
        out.state = kDrift;
        out.aux = 5;
      }
      break;
    case kDown:
      out.value -= up;
      out.state = kDrift;
      out.aux = 3;
      break;
    case kUpUp:
      out.value += up;
      out.level = c.level + 1;
      out.sign = -c.sign;
      out.state = out.level >= cas.levels ? kQuiet : kLevelRoot;
      break;
    case kDrift:
      out.value -= up;
      out.aux = c.aux - 1;
      if (out.aux == 0) out.state = kQuiet;
      break;
    default:
      out.state = kQuiet;
      break;
  }
  out.quiet = out.state == kQuiet;
  return out;
}

MartingaleCursor MartingaleModel::cursor_at(double x, int depth) const {
  MartingaleCursor c = root_cursor();
  const DyadicInterval target = base_.descendant_containing(x, depth);
  for (int d = 1; d <= depth; ++d) {
    if (c.quiet) {
      c.node = base_.descendant_containing(x, depth);
      return c;
    }
    const int bit = static_cast<int>((target.index() >> (depth - d)) & 1);
    c = child(c, bit);
  }
  return c;
}

double MartingaleModel::node_value(const DyadicInterval& node) const {
  if (node.base_left() != base_.base_left() || node.base_length() != base_.base_length())
    throw Error(ErrorCode::OutOfDomain, "node is not in the model's dyadic tree");
  MartingaleCursor c = root_cursor();
  for (int d = 1; d <= node.depth() && !c.quiet; ++d) {
    const int bit = static_cast<int>((node.index() >> (node.depth() - d)) & 1);
    c = child(c, bit);
  }
  return c.value;
}

namespace {

struct Blend {
  int k;
  double s;
};

Blend scale_of(const DyadicInterval& base, Point z) {
  const double t = std::log2(base.length() / z.y);
  const double k = std::floor(t);
  return {static_cast<int>(k), t - k};
}

}  // namespace

double MartingaleModel::extend(Point z) const {
  if (!(z.y > 0.0) || z.y > base_.length() || z.x < base_.left() || z.x > base_.right())
    throw Error(ErrorCode::OutOfDomain, "point outside the Carleson square of the base");
  const Blend b = scale_of(base_, z);
  const int k = std::min(b.k, data_depth_);
  const MartingaleCursor ck = cursor_at(z.x, k);
  if (b.k >= data_depth_ || b.s == 0.0) return ck.value;
  const MartingaleCursor ck1 = child(ck, static_cast<int>(base_.descendant_containing(z.x, k + 1).index() & 1));
  return (1.0 - b.s) * ck.value + b.s * ck1.value;
}

double MartingaleModel::vertical_slope(Point z) const {
  if (!(z.y > 0.0) || z.y > base_.length() || z.x < base_.left() || z.x > base_.right())
    throw Error(ErrorCode::OutOfDomain, "point outside the Carleson square of the base");
  const Blend b = scale_of(base_, z);
  if (b.k >= data_depth_) return 0.0;
  const MartingaleCursor ck = cursor_at(z.x, b.k);
  const MartingaleCursor ck1 = child(ck, static_cast<int>(base_.descendant_containing(z.x, b.k + 1).index() & 1));
  return -(ck1.value - ck.value) / (z.y * std::log(2.0));
}

}  // namespace jb
