#include "tforge/common.hpp"

#include <algorithm>

namespace tforge {

std::string key_to_decimal(const Key& k) {
  Key cur = k;
  std::string out;
  do {
    // divide cur by 10, collecting the remainder
    uint64_t rem = 0;
    for (int i = Key::kWords - 1; i >= 0; --i) {
      unsigned __int128 acc = ((unsigned __int128)rem << 64) | cur.w[i];
      cur.w[i] = (uint64_t)(acc / 10);
      rem = (uint64_t)(acc % 10);
    }
    out.push_back(char('0' + rem));
  } while (!cur.is_zero());
  std::reverse(out.begin(), out.end());
  return out;
}

Key key_from_decimal(const std::string& s) {
  if (s.empty()) fail("empty basis index");
  Key k;
  for (char c : s) {
    if (c < '0' || c > '9') fail("bad basis index '" + s + "'");
    // k = k*10 + digit
    uint64_t carry = (uint64_t)(c - '0');
    for (int i = 0; i < Key::kWords; ++i) {
      unsigned __int128 acc = (unsigned __int128)k.w[i] * 10 + carry;
      k.w[i] = (uint64_t)acc;
      carry = (uint64_t)(acc >> 64);
    }
    if (carry) fail("basis index overflow");
  }
  return k;
}

}  // namespace tforge
