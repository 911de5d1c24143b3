#pragma once

#include <string>

#include "json.hpp"
#include "jb/builder.hpp"
#include "jb/content.hpp"
#include "jb/frostman.hpp"
#include "jb/hardy.hpp"
#include "jb/transfer.hpp"

namespace jb {

using Json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;

/// Sorted keys, two-space indent, doubles as %.17g; non-finite doubles are
/// written as null. parse(canonical_dump(x)) == x for finite data.
std::string canonical_dump(const Json& j);

void to_json(Json& j, const Point& p);
void to_json(Json& j, const Segment& s);
void to_json(Json& j, const IntervalUnion& u);
void to_json(Json& j, const CoverBox& b);
void to_json(Json& j, const CoverSolution& c);
void to_json(Json& j, const LevelSummary& s);
void to_json(Json& j, const GenerationTree& t);  // summary; nodes go to CSV
void to_json(Json& j, const DistortionReport& r);
void to_json(Json& j, const GrowthWitness& w);
void to_json(Json& j, const GrowthReport& r);
void to_json(Json& j, const ContentLowerBound& c);
void to_json(Json& j, const PushforwardEstimate& e);
void to_json(Json& j, const JohnConstant& c);
void to_json(Json& j, const Lemma33Report& r);
void to_json(Json& j, const EndToEndReport& r);
void to_json(Json& j, const PointwiseReport& r);  // records go to CSV
void to_json(Json& j, const IntegralReport& r);

/// level,left,right,kind,stop,deviation,M_local,sign,indeterminate,good_length
std::string tree_csv(const GenerationTree& t);
/// left,right,density
std::string measure_csv(const FrostmanMeasure& mu);
/// x,y
std::string points_csv(const std::vector<Complex>& pts);
/// x,y,u,rhs,ratio
std::string hardy_csv(const PointwiseReport& r);

}  // namespace jb
