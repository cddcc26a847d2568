#include "dcim/scalar.hpp"

#include <cmath>
#include <optional>
#include <sstream>
#include <stdexcept>

namespace dcim {

const char* to_string(CmpOp op) {
  switch (op) {
    case CmpOp::Eq: return "=";
    case CmpOp::Ne: return "!=";
    case CmpOp::Lt: return "<";
    case CmpOp::Gt: return ">";
    case CmpOp::Le: return "<=";
    case CmpOp::Ge: return ">=";
  }
  return "?";
}

namespace {

std::optional<double> as_number(const Scalar& s) {
  if (std::holds_alternative<std::int64_t>(s))
    return static_cast<double>(std::get<std::int64_t>(s));
  if (std::holds_alternative<double>(s)) return std::get<double>(s);
  return std::nullopt;
}

template <typename T>
bool apply_op(const T& a, CmpOp op, const T& b) {
  switch (op) {
    case CmpOp::Eq: return a == b;
    case CmpOp::Ne: return a != b;
    case CmpOp::Lt: return a < b;
    case CmpOp::Gt: return a > b;
    case CmpOp::Le: return a <= b;
    case CmpOp::Ge: return a >= b;
  }
  return false;
}

}  // namespace

bool compare(const Scalar& lhs, CmpOp op, const Scalar& rhs) {
  auto ln = as_number(lhs);
  auto rn = as_number(rhs);
  if (ln && rn) return apply_op(*ln, op, *rn);
  if (lhs.index() != rhs.index()) return false;
  if (std::holds_alternative<std::string>(lhs))
    return apply_op(std::get<std::string>(lhs), op, std::get<std::string>(rhs));
  if (std::holds_alternative<bool>(lhs)) {
    bool a = std::get<bool>(lhs), b = std::get<bool>(rhs);
    switch (op) {
      case CmpOp::Eq: return a == b;
      case CmpOp::Ne: return a != b;
      default: return false;
    }
  }
  return false;
}

nlohmann::json scalar_to_json(const Scalar& s) {
  return std::visit([](const auto& v) { return nlohmann::json(v); }, s);
}

Scalar scalar_from_json(const nlohmann::json& j) {
  if (j.is_string()) return j.get<std::string>();
  if (j.is_boolean()) return j.get<bool>();
  if (j.is_number_integer()) return j.get<std::int64_t>();
  if (j.is_number()) return j.get<double>();
  throw std::invalid_argument("attribute value must be string, integer, float or boolean");
}

std::string scalar_to_display(const Scalar& s) {
  if (std::holds_alternative<std::string>(s)) return std::get<std::string>(s);
  std::ostringstream os;
  if (std::holds_alternative<bool>(s))
    os << (std::get<bool>(s) ? "true" : "false");
  else if (std::holds_alternative<std::int64_t>(s))
    os << std::get<std::int64_t>(s);
  else
    os << std::get<double>(s);
  return os.str();
}

}  // namespace dcim
