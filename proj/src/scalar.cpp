#include "vqg/scalar.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <sstream>

namespace vqg {

Rational parse_rational(const std::string& text) {
  std::string t;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) t += c;
  if (t.empty()) throw std::invalid_argument("empty rational");
  size_t i = (t[0] == '-' || t[0] == '+') ? 1 : 0;
  bool slash = false, digit = false;
  for (size_t k = i; k < t.size(); ++k) {
    if (t[k] == '/') {
      if (slash || !digit) throw std::invalid_argument("bad rational: " + text);
      slash = true;
      digit = false;
    } else if (std::isdigit(static_cast<unsigned char>(t[k]))) {
      digit = true;
    } else {
      throw std::invalid_argument("bad rational: " + text);
    }
  }
  if (!digit) throw std::invalid_argument("bad rational: " + text);
  if (t[0] == '+') t = t.substr(1);
  Rational q;
  if (q.set_str(t, 10) != 0) throw std::invalid_argument("bad rational: " + text);
  if (q.get_den() == 0) throw std::invalid_argument("zero denominator: " + text);
  q.canonicalize();
  return q;
}

std::string rational_str(const Rational& q) { return q.get_str(); }

Ring::Ring(std::vector<std::string> params) : params_(std::move(params)) {}

int Ring::index_of(const std::string& name) const {
  auto it = std::find(params_.begin(), params_.end(), name);
  return it == params_.end() ? -1 : static_cast<int>(it - params_.begin());
}

RingPtr make_ring(std::vector<std::string> params) {
  std::sort(params.begin(), params.end());
  if (std::adjacent_find(params.begin(), params.end()) != params.end())
    throw std::invalid_argument("duplicate ring parameter");
  for (const auto& p : params)
    if (p.empty()) throw std::invalid_argument("empty ring parameter name");
  if (params.empty()) return nullptr;
  return std::make_shared<const Ring>(std::move(params));
}

RingPtr common_ring(const RingPtr& a, const RingPtr& b) {
  if (!a) return b;
  if (!b || a == b) return a;
  if (!(*a == *b)) throw RingMismatch("scalars from different coefficient rings");
  return a;
}

Scalar::Scalar(const Rational& q) {
  if (q != 0) {
    terms_.push_back({Monomial{}, q});
    terms_[0].second.canonicalize();
  }
}

Scalar Scalar::param(const RingPtr& ring, const std::string& name, int exponent) {
  if (!ring) throw std::invalid_argument("no parameter " + name + " in Q");
  int idx = ring->index_of(name);
  if (idx < 0) throw std::invalid_argument("no parameter " + name + " in ring");
  Monomial m(ring->params().size(), 0);
  m[idx] = exponent;
  return monomial(ring, std::move(m), 1);
}

Scalar Scalar::monomial(const RingPtr& ring, Monomial exps, const Rational& coeff) {
  Scalar s;
  s.ring_ = ring;
  size_t n = ring ? ring->params().size() : 0;
  if (exps.size() != n) throw std::invalid_argument("monomial arity mismatch");
  if (coeff != 0) {
    s.terms_.push_back({std::move(exps), coeff});
    s.terms_[0].second.canonicalize();
  }
  return s;
}

void Scalar::adopt_ring(const RingPtr& other) {
  RingPtr r = common_ring(ring_, other);
  if (r == ring_) return;
  size_t n = r ? r->params().size() : 0;
  for (auto& t : terms_) t.first.assign(n, 0);  // only constants can lack a ring
  ring_ = r;
}

void Scalar::normalize() {
  std::sort(terms_.begin(), terms_.end(),
            [](const Term& a, const Term& b) { return a.first < b.first; });
  std::vector<Term> out;
  for (auto& t : terms_) {
    if (!out.empty() && out.back().first == t.first)
      out.back().second += t.second;
    else
      out.push_back(std::move(t));
  }
  out.erase(std::remove_if(out.begin(), out.end(), [](const Term& t) { return t.second == 0; }),
            out.end());
  terms_ = std::move(out);
}

bool Scalar::is_rational() const {
  if (terms_.empty()) return true;
  if (terms_.size() > 1) return false;
  const auto& m = terms_[0].first;
  return std::all_of(m.begin(), m.end(), [](int e) { return e == 0; });
}

Rational Scalar::rational() const {
  if (!is_rational()) throw std::domain_error("scalar is not a rational constant: " + str());
  return terms_.empty() ? Rational(0) : terms_[0].second;
}

bool Scalar::is_one() const { return is_rational() && rational() == 1; }

Scalar Scalar::operator-() const {
  Scalar r = *this;
  for (auto& t : r.terms_) t.second = -t.second;
  return r;
}

Scalar& Scalar::operator+=(const Scalar& o) {
  if (!ring_ && !o.ring_) {  // both plain rationals
    if (o.terms_.empty()) return *this;
    if (terms_.empty()) {
      terms_ = o.terms_;
      return *this;
    }
    terms_[0].second += o.terms_[0].second;
    if (terms_[0].second == 0) terms_.clear();
    return *this;
  }
  if (o.terms_.empty()) {
    adopt_ring(o.ring_);
    return *this;
  }
  Scalar other = o;
  adopt_ring(o.ring_);
  other.adopt_ring(ring_);
  terms_.insert(terms_.end(), other.terms_.begin(), other.terms_.end());
  normalize();
  return *this;
}

Scalar& Scalar::operator-=(const Scalar& o) { return *this += -o; }

Scalar& Scalar::operator*=(const Scalar& o) {
  if (!ring_ && !o.ring_) {
    if (o.terms_.empty()) terms_.clear();
    if (!terms_.empty()) terms_[0].second *= o.terms_[0].second;
    return *this;
  }
  Scalar other = o;
  adopt_ring(o.ring_);
  other.adopt_ring(ring_);
  if (terms_.size() == 1 && other.terms_.size() == 1 && is_rational() && other.is_rational()) {
    terms_[0].second *= other.terms_[0].second;
    return *this;
  }
  std::vector<Term> out;
  out.reserve(terms_.size() * other.terms_.size());
  for (const auto& a : terms_)
    for (const auto& b : other.terms_) {
      Monomial m = a.first;
      for (size_t i = 0; i < m.size(); ++i) m[i] += b.first[i];
      out.push_back({std::move(m), a.second * b.second});
    }
  terms_ = std::move(out);
  normalize();
  return *this;
}

Scalar& Scalar::operator/=(const Rational& q) {
  if (q == 0) throw std::domain_error("division by zero");
  for (auto& t : terms_) t.second /= q;
  return *this;
}

bool Scalar::operator==(const Scalar& o) const {
  if (terms_.empty() || o.terms_.empty()) return terms_.empty() && o.terms_.empty();
  if (is_rational() && o.is_rational()) return rational() == o.rational();
  common_ring(ring_, o.ring_);
  return terms_ == o.terms_;
}

std::string Scalar::str() const {
  if (terms_.empty()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [m, c] : terms_) {
    std::string piece;
    bool constant = std::all_of(m.begin(), m.end(), [](int e) { return e == 0; });
    piece = rational_str(c);
    if (!constant)
      for (size_t i = 0; i < m.size(); ++i)
        if (m[i] != 0) piece += "*" + ring_->params()[i] + "^" + std::to_string(m[i]);
    if (first) {
      out = piece;
    } else if (piece[0] == '-') {
      out += "-" + piece.substr(1);
    } else {
      out += "+" + piece;
    }
    first = false;
  }
  return out;
}

std::string Scalar::factor_str() const {
  return terms_.size() > 1 ? "(" + str() + ")" : str();
}

namespace {

// term := [sign] factor ('*' factor)* ; factor := rational | name ['^' int]
Scalar parse_term(const std::string& t, const RingPtr& ring) {
  Scalar acc(1);
  std::stringstream ss(t);
  std::string factor;
  bool any = false;
  while (std::getline(ss, factor, '*')) {
    if (factor.empty()) throw std::invalid_argument("bad scalar term: " + t);
    any = true;
    if (std::isdigit(static_cast<unsigned char>(factor[0]))) {
      acc *= Scalar(parse_rational(factor));
      continue;
    }
    auto caret = factor.find('^');
    std::string name = factor.substr(0, caret);
    int e = 1;
    if (caret != std::string::npos) {
      try {
        size_t used = 0;
        e = std::stoi(factor.substr(caret + 1), &used);
        if (used != factor.size() - caret - 1) throw std::invalid_argument("x");
      } catch (const std::exception&) {
        throw std::invalid_argument("bad exponent in " + factor);
      }
    }
    acc *= Scalar::param(ring, name, e);
  }
  if (!any) throw std::invalid_argument("empty scalar term");
  return acc;
}

}  // namespace

Scalar Scalar::parse(const std::string& text, const RingPtr& ring) {
  std::string t;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) t += c;
  if (t.empty()) throw std::invalid_argument("empty scalar");
  Scalar total = Scalar::monomial(ring, Monomial(ring ? ring->params().size() : 0, 0), 0);
  size_t pos = 0;
  while (pos < t.size()) {
    int sign = 1;
    while (pos < t.size() && (t[pos] == '+' || t[pos] == '-')) {
      if (t[pos] == '-') sign = -sign;
      ++pos;
    }
    size_t end = pos;
    while (end < t.size() && t[end] != '+' && !(t[end] == '-' && end > pos && t[end - 1] != '^'))
      ++end;
    Scalar term = parse_term(t.substr(pos, end - pos), ring);
    total += sign > 0 ? term : -term;
    pos = end;
  }
  return total;
}

}  // namespace vqg
