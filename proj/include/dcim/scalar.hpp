#pragma once

#include <cstdint>
#include <string>
#include <variant>

#include <json.hpp>

namespace dcim {

// Attribute values are restricted to these four kinds so that every
// predicate comparison is total and the wire format stays simple.
using Scalar = std::variant<std::string, std::int64_t, double, bool>;

enum class CmpOp { Eq, Ne, Lt, Gt, Le, Ge };

const char* to_string(CmpOp op);

// Numeric kinds compare cross-type (int vs double); otherwise types must
// match exactly. A type mismatch makes every comparison false.
bool compare(const Scalar& lhs, CmpOp op, const Scalar& rhs);

nlohmann::json scalar_to_json(const Scalar& s);
Scalar scalar_from_json(const nlohmann::json& j);

std::string scalar_to_display(const Scalar& s);

}  // namespace dcim
