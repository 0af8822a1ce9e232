#include "tforge/truth_table.hpp"

#include <sstream>

namespace tforge {

TruthTable TruthTable::zero(int n, int b) {
  if (n < 0 || n > 24 || b < 1 || b > 512) fail("truth table shape out of range");
  TruthTable t;
  t.n = n;
  t.b = b;
  t.bits.assign((size_t(1) << n) * t.row_stride(), 0);
  return t;
}

uint64_t TruthTable::row(uint64_t x) const {
  if (b > 64) fail("row access on a table wider than 64 bits");
  size_t rb = row_stride();
  const uint8_t* p = bits.data() + x * rb;
  uint64_t v = 0;
  for (size_t i = 0; i < rb; ++i) v |= (uint64_t)p[i] << (8 * i);
  return v;
}

void TruthTable::set_row(uint64_t x, uint64_t value) {
  if (b > 64) fail("row access on a table wider than 64 bits");
  size_t rb = row_stride();
  uint8_t* p = bits.data() + x * rb;
  for (size_t i = 0; i < rb; ++i) p[i] = (uint8_t)(value >> (8 * i));
  if (b & 63) p[rb - 1] &= (uint8_t)((1u << (((b - 1) & 7) + 1)) - 1);
}

TruthTable random_table(Rng& rng, int n, int b) {
  TruthTable t = TruthTable::zero(n, b);
  uint64_t buf = 0;
  int avail = 0;
  for (uint64_t x = 0; x < (uint64_t(1) << n); ++x)
    for (int j = 0; j < b; ++j) {
      if (!avail) {
        buf = rng.bits();
        avail = 64;
      }
      t.set_bit(x, j, buf & 1);
      buf >>= 1;
      --avail;
    }
  return t;
}

std::string serialize_table(const TruthTable& t) {
  std::ostringstream os;
  os << "N " << t.n << " B " << t.b << "\n";
  for (uint64_t x = 0; x < (uint64_t(1) << t.n); ++x) {
    for (int j = t.b - 1; j >= 0; --j) os << (t.bit(x, j) ? '1' : '0');
    os << "\n";
  }
  return os.str();
}

TruthTable parse_table(const std::string& text) {
  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  bool have_header = false;
  TruthTable t;
  uint64_t next_row = 0, rows = 0;
  auto bad = [&](const std::string& why) {
    fail("table parse error at line " + std::to_string(lineno) + ": " + why);
  };
  while (std::getline(is, line)) {
    ++lineno;
    size_t start = line.find_first_not_of(" \t\r");
    if (start == std::string::npos || line[start] == '#') continue;
    std::istringstream ls(line);
    if (!have_header) {
      std::string kw_n, kw_b;
      int n, b;
      if (!(ls >> kw_n >> n >> kw_b >> b) || kw_n != "N" || kw_b != "B")
        bad("expected 'N <n> B <b>' header");
      if (n < 0 || n > 24 || b < 1 || b > 512) bad("shape out of range");
      t = TruthTable::zero(n, b);
      rows = uint64_t(1) << n;
      have_header = true;
      continue;
    }
    std::string word;
    ls >> word;
    if ((int)word.size() != t.b) bad("row must have exactly b characters");
    if (next_row == rows) bad("too many rows");
    for (int j = 0; j < t.b; ++j) {
      char c = word[t.b - 1 - j];
      if (c != '0' && c != '1') bad("row characters must be 0/1");
      t.set_bit(next_row, j, c == '1');
    }
    ++next_row;
  }
  if (!have_header) fail("table parse error: missing header");
  if (next_row != rows)
    fail("table parse error: expected " + std::to_string(rows) + " rows, got " +
         std::to_string(next_row));
  return t;
}

PhaseTable PhaseTable::plus(int n) {
  if (n < 0 || n > 24) fail("phase table size out of range");
  PhaseTable t;
  t.n = n;
  t.signs.assign(size_t(1) << n, 1);
  return t;
}

PhaseTable random_phase_table(Rng& rng, int n) {
  PhaseTable t = PhaseTable::plus(n);
  for (auto& s : t.signs) s = rng.bits() & 1 ? 1 : -1;
  return t;
}

std::string serialize_phase_table(const PhaseTable& t) {
  std::ostringstream os;
  os << "N " << t.n << "\n";
  for (int8_t s : t.signs) os << (s > 0 ? '+' : '-') << "\n";
  return os.str();
}

PhaseTable parse_phase_table(const std::string& text) {
  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  bool have_header = false;
  PhaseTable t;
  size_t want = 0;
  auto bad = [&](const std::string& why) {
    fail("phase table parse error at line " + std::to_string(lineno) + ": " +
         why);
  };
  while (std::getline(is, line)) {
    ++lineno;
    size_t start = line.find_first_not_of(" \t\r");
    if (start == std::string::npos || line[start] == '#') continue;
    std::istringstream ls(line);
    if (!have_header) {
      std::string kw;
      int n;
      if (!(ls >> kw >> n) || kw != "N" || n < 0 || n > 24)
        bad("expected 'N <n>' header");
      t.n = n;
      want = size_t(1) << n;
      have_header = true;
      continue;
    }
    std::string word;
    ls >> word;
    if (word != "+" && word != "-") bad("expected '+' or '-'");
    if (t.signs.size() == want) bad("too many entries");
    t.signs.push_back(word == "+" ? 1 : -1);
  }
  if (!have_header) fail("phase table parse error: missing header");
  if (t.signs.size() != want)
    fail("phase table parse error: expected " + std::to_string(want) +
         " entries, got " + std::to_string(t.signs.size()));
  return t;
}

}  // namespace tforge
