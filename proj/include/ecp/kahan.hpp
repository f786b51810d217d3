#pragma once

namespace ecp {

/// Kahan-compensated running sum. Works for any field type closed under + and -,
/// including std::complex.
template <typename Value>
struct kahan_accumulator {
  Value sum = Value{0};
  Value compensation = Value{0};

  constexpr kahan_accumulator& operator+=(const Value& value) {
    const Value y = value - compensation;
    const Value t = sum + y;
    compensation = (t - sum) - y;
    sum = t;
    return *this;
  }

  constexpr Value value() const { return sum; }
  constexpr operator Value() const { return sum; }
};

template <typename Range, typename Value = double>
Value compensated_sum(const Range& values) {
  kahan_accumulator<Value> acc;
  for (const auto& v : values) acc += v;
  return acc.value();
}

}  // namespace ecp
