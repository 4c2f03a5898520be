#include "muchlab/initial.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>
#include <random>

#include "muchlab/errors.hpp"

namespace muchlab {

namespace {

class Parser {
 public:
  Parser(const std::string& text, std::uint64_t seed) : s_(text), rng_(seed) {}

  TrigSpectrum parse() {
    skip();
    if (at_end()) fail("empty expression");
    TrigSpectrum sum;
    double sign = 1.0;
    if (peek() == '+' || peek() == '-') {
      sign = peek() == '-' ? -1.0 : 1.0;
      ++pos_;
    }
    sum = axpy(sum, sign, term());
    while (true) {
      skip();
      if (at_end()) break;
      const char c = peek();
      if (c != '+' && c != '-') fail(std::string("expected '+' or '-', found '") + c + "'");
      ++pos_;
      sum = axpy(sum, c == '-' ? -1.0 : 1.0, term());
    }
    return sum;
  }

 private:
  TrigSpectrum term() {
    skip();
    if (at_end()) fail("expected a term");
    if (std::isalpha(static_cast<unsigned char>(peek()))) return call();
    const double a = number();
    skip();
    if (!at_end() && peek() == '*') {
      ++pos_;
      skip();
      return a * call();
    }
    return TrigSpectrum::constant(a);
  }

  TrigSpectrum call() {
    const std::size_t start = pos_;
    std::string name;
    while (!at_end() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_')) {
      name += s_[pos_++];
    }
    if (name.empty()) fail("expected a function name");
    expect('(');
    TrigSpectrum out;
    if (name == "cos" || name == "sin") {
      skip();
      const std::size_t at = pos_;
      const int k = integer();
      if (k < 1) fail("mode index must be a positive integer", at);
      out = name == "cos" ? TrigSpectrum::cosine(k) : TrigSpectrum::sine(k);
    } else if (name == "mckean_pos") {
      const double c = number();
      expect(',');
      const double e = number();
      out = axpy(TrigSpectrum::constant(c), e, TrigSpectrum::cosine(1));
    } else if (name == "geom") {
      const std::size_t at = pos_;
      const double rho = number();
      if (!(rho > 0.0)) fail("geom needs a positive strip width", at);
      expect(',');
      const std::size_t at_n = pos_;
      const int n = integer();
      if (n < 1) fail("geom needs at least one mode", at_n);
      out = geometric(rho, n);
    } else {
      fail("unknown function '" + name + "'", start);
    }
    expect(')');
    return out;
  }

  TrigSpectrum geometric(double rho, int n) {
    std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
    std::vector<Complex> pos(n);
    for (int k = 1; k <= n; ++k) pos[k - 1] = std::polar(std::exp(-2.0 * std::numbers::pi * rho * k), phase(rng_));
    return TrigSpectrum::from_positive(1.0, pos);
  }

  double number() {
    skip();
    const char* first = s_.data() + pos_;
    const char* last = s_.data() + s_.size();
    if (first != last && *first == '+') ++first;
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || !std::isfinite(value)) fail("expected a number");
    pos_ = static_cast<std::size_t>(ptr - s_.data());
    return value;
  }

  int integer() {
    skip();
    const char* first = s_.data() + pos_;
    const char* last = s_.data() + s_.size();
    int value = 0;
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc()) fail("expected an integer");
    pos_ = static_cast<std::size_t>(ptr - s_.data());
    return value;
  }

  void expect(char c) {
    skip();
    if (at_end() || peek() != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  void skip() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(peek()))) ++pos_;
  }
  bool at_end() const { return pos_ >= s_.size(); }
  char peek() const { return s_[pos_]; }
  [[noreturn]] void fail(const std::string& what) const { throw ParseError(pos_, what); }
  [[noreturn]] void fail(const std::string& what, std::size_t at) const { throw ParseError(at, what); }

  const std::string& s_;
  std::size_t pos_ = 0;
  std::mt19937_64 rng_;
};

}  // namespace

TrigSpectrum parse_initial(const std::string& expr, std::uint64_t seed) {
  return Parser(expr, seed).parse().trimmed();
}

}  // namespace muchlab
