// Copyright 2026 The leadopt Authors.
// SPDX-License-Identifier: Apache-2.0

#include <cctype>
#include <cstdio>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "chemgraph/smiles.hpp"
#include "common/error.hpp"

namespace leadopt::chemgraph {

namespace {

struct RingOpen {
  int atom;
  int order;  // 0 if unspecified
  char stereo;
};

class Parser {
 public:
  explicit Parser(std::string_view text) : s_(text) {}

  MolecularGraph run() {
    if (s_.empty()) fail(ErrorCode::kSyntaxError, "empty SMILES");
    while (pos_ < s_.size()) {
      const char c = s_[pos_];
      if (c == '(') {
        if (prev_ < 0) syntax("branch before any atom");
        if (pending_order_ != 0) syntax("bond symbol before branch");
        branches_.push_back(prev_);
        ++pos_;
      } else if (c == ')') {
        if (branches_.empty()) fail(ErrorCode::kUnbalancedBracket, at("unmatched ')'"));
        if (pending_order_ != 0) syntax("dangling bond before ')'");
        prev_ = branches_.back();
        branches_.pop_back();
        ++pos_;
      } else if (c == '[') {
        parse_bracket_atom();
      } else if (c == ']') {
        fail(ErrorCode::kUnbalancedBracket, at("unmatched ']'"));
      } else if (c == '-' || c == '=' || c == '#' || c == ':' || c == '/' || c == '\\') {
        if (pending_order_ != 0) syntax("two consecutive bond symbols");
        if (prev_ < 0) syntax("bond symbol before any atom");
        pending_order_ = c == '=' ? 2 : c == '#' ? 3 : c == ':' ? 4 : 1;
        pending_stereo_ = (c == '/' || c == '\\') ? c : 0;
        ++pos_;
      } else if (c == '$') {
        syntax("quadruple bonds are not supported");
      } else if (c == '.') {
        fail(ErrorCode::kMultiFragment, at("multi-fragment SMILES is not supported"));
      } else if (std::isdigit(static_cast<unsigned char>(c))) {
        ring_closure(c - '0');
        ++pos_;
      } else if (c == '%') {
        if (pos_ + 2 >= s_.size() || !std::isdigit(static_cast<unsigned char>(s_[pos_ + 1])) ||
            !std::isdigit(static_cast<unsigned char>(s_[pos_ + 2]))) {
          syntax("bad %nn ring label");
        }
        ring_closure((s_[pos_ + 1] - '0') * 10 + (s_[pos_ + 2] - '0'));
        pos_ += 3;
      } else if (c == '*') {
        fail(ErrorCode::kUnsupportedElement, at("wildcard atoms are not supported"));
      } else if (std::isalpha(static_cast<unsigned char>(c))) {
        parse_organic_atom();
      } else {
        syntax(std::string("unexpected character '") + printable(c) + "'");
      }
    }
    if (!branches_.empty()) fail(ErrorCode::kUnbalancedBracket, "unclosed '('");
    if (!rings_.empty()) {
      fail(ErrorCode::kUnclosedRing, "unclosed ring bond " + std::to_string(rings_.begin()->first));
    }
    if (pending_order_ != 0) syntax("dangling bond at end of input");
    return MolecularGraph::build(std::move(atoms_), std::move(bonds_));
  }

 private:
  std::string_view s_;
  std::size_t pos_ = 0;
  std::vector<RawAtom> atoms_;
  std::vector<RawBond> bonds_;
  std::vector<int> branches_;
  std::map<int, RingOpen> rings_;
  int prev_ = -1;
  int pending_order_ = 0;
  char pending_stereo_ = 0;

  static std::string printable(char c) {
    const auto u = static_cast<unsigned char>(c);
    if (u >= 0x20 && u < 0x7f) return std::string(1, c);
    char buf[8];
    std::snprintf(buf, sizeof buf, "\\x%02x", u);
    return buf;
  }

  std::string at(const std::string& msg) const {
    return msg + " at position " + std::to_string(pos_);
  }

  [[noreturn]] void syntax(const std::string& msg) const {
    fail(ErrorCode::kSyntaxError, at(msg));
  }

  void add_atom(RawAtom atom) {
    const int idx = static_cast<int>(atoms_.size());
    const bool aromatic = atom.aromatic;
    atoms_.push_back(std::move(atom));
    if (prev_ >= 0) {
      int order = pending_order_;
      if (order == 0) order = (aromatic && atoms_[static_cast<std::size_t>(prev_)].aromatic) ? 4 : 1;
      bonds_.push_back({prev_, idx, order, pending_stereo_});
    }
    pending_order_ = 0;
    pending_stereo_ = 0;
    prev_ = idx;
  }

  void ring_closure(int label) {
    if (prev_ < 0) syntax("ring bond before any atom");
    auto it = rings_.find(label);
    if (it == rings_.end()) {
      rings_[label] = {prev_, pending_order_, pending_stereo_};
    } else {
      const RingOpen open = it->second;
      rings_.erase(it);
      int order = pending_order_;
      if (open.order != 0 && order != 0 && open.order != order) {
        syntax("conflicting ring bond orders for label " + std::to_string(label));
      }
      if (order == 0) order = open.order;
      if (order == 0) {
        order = (atoms_[static_cast<std::size_t>(open.atom)].aromatic &&
                 atoms_[static_cast<std::size_t>(prev_)].aromatic)
                    ? 4
                    : 1;
      }
      const char stereo = pending_stereo_ ? pending_stereo_ : open.stereo;
      bonds_.push_back({open.atom, prev_, order, stereo});
    }
    pending_order_ = 0;
    pending_stereo_ = 0;
  }

  void parse_organic_atom() {
    const char c = s_[pos_];
    const char next = pos_ + 1 < s_.size() ? s_[pos_ + 1] : '\0';
    RawAtom atom;
    std::size_t len = 1;
    if (c == 'C' && next == 'l') {
      atom.element = Element::Cl;
      len = 2;
    } else if (c == 'B' && next == 'r') {
      atom.element = Element::Br;
      len = 2;
    } else {
      switch (c) {
        case 'B': atom.element = Element::B; break;
        case 'C': atom.element = Element::C; break;
        case 'N': atom.element = Element::N; break;
        case 'O': atom.element = Element::O; break;
        case 'P': atom.element = Element::P; break;
        case 'S': atom.element = Element::S; break;
        case 'F': atom.element = Element::F; break;
        case 'I': atom.element = Element::I; break;
        case 'b': atom.element = Element::B; atom.aromatic = true; break;
        case 'c': atom.element = Element::C; atom.aromatic = true; break;
        case 'n': atom.element = Element::N; atom.aromatic = true; break;
        case 'o': atom.element = Element::O; atom.aromatic = true; break;
        case 'p': atom.element = Element::P; atom.aromatic = true; break;
        case 's': atom.element = Element::S; atom.aromatic = true; break;
        default:
          fail(ErrorCode::kUnsupportedElement,
               at(std::string("unsupported element '") + printable(c) + "'"));
      }
    }
    pos_ += len;
    add_atom(std::move(atom));
  }

  void parse_bracket_atom() {
    const std::size_t close = s_.find(']', pos_);
    if (close == std::string_view::npos) fail(ErrorCode::kUnbalancedBracket, at("unclosed '['"));
    std::string_view body = s_.substr(pos_ + 1, close - pos_ - 1);
    std::size_t i = 0;
    while (i < body.size() && std::isdigit(static_cast<unsigned char>(body[i]))) ++i;  // isotope
    if (i >= body.size()) syntax("empty bracket atom");

    RawAtom atom;
    const char c0 = body[i];
    if (std::islower(static_cast<unsigned char>(c0))) {
      std::string sym(1, static_cast<char>(std::toupper(static_cast<unsigned char>(c0))));
      if (i + 1 < body.size() && std::islower(static_cast<unsigned char>(body[i + 1]))) {
        fail(ErrorCode::kUnsupportedElement, at("unsupported aromatic element in brackets"));
      }
      auto e = element_from_symbol(sym);
      if (!e || !can_be_aromatic(*e)) {
        fail(ErrorCode::kUnsupportedElement, at("unsupported aromatic element '" + printable(c0) + "'"));
      }
      atom.element = *e;
      atom.aromatic = true;
      ++i;
    } else if (std::isupper(static_cast<unsigned char>(c0))) {
      std::string sym(1, c0);
      if (i + 1 < body.size() && std::islower(static_cast<unsigned char>(body[i + 1]))) {
        sym.push_back(body[i + 1]);
      }
      auto e = element_from_symbol(sym);
      if (!e) {
        fail(ErrorCode::kUnsupportedElement, at("unsupported element '" + sym + "'"));
      }
      atom.element = *e;
      i += sym.size();
    } else if (c0 == '*') {
      fail(ErrorCode::kUnsupportedElement, at("wildcard atoms are not supported"));
    } else {
      syntax("bad bracket atom");
    }

    if (i < body.size() && body[i] == '@') {
      std::size_t j = i;
      while (j < body.size() && body[j] == '@') ++j;
      if (j - i > 2) syntax("bad chirality mark");
      atom.chirality = std::string(body.substr(i, j - i));
      i = j;
    }
    atom.hydrogens = 0;
    if (i < body.size() && body[i] == 'H') {
      ++i;
      int h = 1;
      if (i < body.size() && std::isdigit(static_cast<unsigned char>(body[i]))) {
        h = body[i] - '0';
        ++i;
      }
      atom.hydrogens = h;
    }
    if (i < body.size() && (body[i] == '+' || body[i] == '-')) {
      const char sign = body[i];
      int magnitude = 1;
      ++i;
      if (i < body.size() && std::isdigit(static_cast<unsigned char>(body[i]))) {
        magnitude = body[i] - '0';
        ++i;
      } else {
        while (i < body.size() && body[i] == sign) {
          ++magnitude;
          ++i;
        }
      }
      atom.charge = sign == '+' ? magnitude : -magnitude;
    }
    if (i < body.size() && body[i] == ':') {  // atom class, ignored
      ++i;
      while (i < body.size() && std::isdigit(static_cast<unsigned char>(body[i]))) ++i;
    }
    if (i != body.size()) syntax("unexpected characters in bracket atom");
    pos_ = close + 1;
    add_atom(std::move(atom));
  }
};

}  // namespace

MolecularGraph parse_smiles(std::string_view text) { return Parser(text).run(); }

}  // namespace leadopt::chemgraph
