// Copyright 2026 The nmrqc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "nmrqc/sequence.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

namespace nmrqc {

std::string ParseError::to_string() const {
  std::ostringstream out;
  out << "line " << line << ", column " << column << ": " << message;
  if (!token.empty()) out << " (got '" << token << "')";
  return out.str();
}

namespace {

struct Token {
  std::string text;
  int column;
};

struct ParseFailure {
  ParseError error;
};

[[noreturn]] void fail(int line, int column, std::string message,
                       std::string token = {}) {
  throw ParseFailure{{line, column, std::move(message), std::move(token)}};
}

std::vector<Token> tokenize(std::string_view line) {
  std::vector<Token> toks;
  size_t i = 0;
  while (i < line.size()) {
    if (line[i] == '#') break;
    if (line[i] == ' ' || line[i] == '\t' || line[i] == '\r') {
      ++i;
      continue;
    }
    size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t' &&
           line[j] != '\r' && line[j] != '#') {
      ++j;
    }
    toks.push_back({std::string(line.substr(i, j - i)),
                    static_cast<int>(i) + 1});
    i = j;
  }
  return toks;
}

// Cursor over one line's tokens.
struct Line {
  int number;
  int end_column;
  std::vector<Token> toks;
  size_t next = 0;

  const Token& take(const char* what) {
    if (next >= toks.size()) {
      fail(number, end_column, std::string("expected ") + what);
    }
    return toks[next++];
  }

  const Token* peek() const {
    return next < toks.size() ? &toks[next] : nullptr;
  }

  bool accept(std::string_view keyword) {
    if (next < toks.size() && toks[next].text == keyword) {
      ++next;
      return true;
    }
    return false;
  }

  void finish() {
    if (next < toks.size()) {
      fail(number, toks[next].column, "unexpected trailing token",
           toks[next].text);
    }
  }
};

double parse_number(const Line& line, const Token& tok, const char* what) {
  double value = 0.0;
  const char* begin = tok.text.data();
  const char* end = begin + tok.text.size();
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end) {
    fail(line.number, tok.column, std::string("malformed ") + what,
         tok.text);
  }
  return value;
}

int parse_int(const Line& line, const Token& tok, const char* what) {
  int value = 0;
  const char* begin = tok.text.data();
  const char* end = begin + tok.text.size();
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end) {
    fail(line.number, tok.column, std::string("malformed ") + what,
         tok.text);
  }
  return value;
}

Target parse_target(const Line& line, const Token& tok) {
  if (tok.text == "I") return Target::I;
  if (tok.text == "S") return Target::S;
  if (tok.text == "both") return Target::Both;
  fail(line.number, tok.column, "unknown target, expected I, S or both",
       tok.text);
}

// Axis of a pulse line: a label, or a phase in degrees. z axes denote ideal
// z rotations and are reported through the is_z/z_sign outputs.
double parse_axis(Line& line, const Token& tok, bool* is_z, double* z_sign) {
  *is_z = false;
  *z_sign = 1.0;
  if (tok.text == "x") return 0.0;
  if (tok.text == "y") return 90.0;
  if (tok.text == "-x") return 180.0;
  if (tok.text == "-y") return 270.0;
  if (tok.text == "z" || tok.text == "-z") {
    *is_z = true;
    *z_sign = tok.text[0] == '-' ? -1.0 : 1.0;
    return 0.0;
  }
  return parse_number(line, tok, "axis");
}

Event parse_event(Line& line) {
  const Token& head = line.take("an event mnemonic");
  if (head.text == "pulse") {
    const Target target = parse_target(line, line.take("a target"));
    const double flip = parse_number(line, line.take("a flip angle"),
                                     "flip angle");
    bool is_z = false;
    double z_sign = 1.0;
    const double phase = parse_axis(line, line.take("an axis"), &is_z,
                                    &z_sign);
    line.finish();
    if (is_z) return ZRotEvent{target, z_sign * flip};
    return PulseEvent{target, flip, phase};
  }
  if (head.text == "soft") {
    const Token& target_tok = line.take("a target spin");
    if (target_tok.text == "both") {
      fail(line.number, target_tok.column,
           "soft pulses are selective, target must be I or S",
           target_tok.text);
    }
    const Target target = parse_target(line, target_tok);
    const double flip = parse_number(line, line.take("a flip angle"),
                                     "flip angle");
    const Token& axis_tok = line.take("an axis");
    bool is_z = false;
    double z_sign = 1.0;
    const double phase = parse_axis(line, axis_tok, &is_z, &z_sign);
    if (is_z) {
      fail(line.number, axis_tok.column, "soft pulse axis must be equatorial",
           axis_tok.text);
    }
    const Token& dur_kw = line.take("'dur'");
    if (dur_kw.text != "dur") {
      fail(line.number, dur_kw.column, "expected 'dur'", dur_kw.text);
    }
    const Token& dur_tok = line.take("a duration");
    const double duration = parse_number(line, dur_tok, "duration");
    if (duration < 0.0) {
      fail(line.number, dur_tok.column, "duration must be nonnegative",
           dur_tok.text);
    }
    SoftPulseEvent evt{target == Target::I ? Spin::I : Spin::S,
                       flip,
                       phase,
                       duration,
                       std::nullopt,
                       std::nullopt,
                       std::nullopt};
    if (line.accept("offset")) {
      evt.offset_hz = parse_number(line, line.take("an offset"), "offset");
    }
    if (line.accept("trunc")) {
      evt.truncation = parse_number(line, line.take("a truncation"),
                                    "truncation");
    }
    if (line.accept("slices")) {
      evt.slices = parse_int(line, line.take("a slice count"),
                             "slice count");
    }
    line.finish();
    return evt;
  }
  if (head.text == "delay") {
    const Token& value_tok = line.take("a duration");
    const double value = parse_number(line, value_tok, "duration");
    if (value < 0.0) {
      fail(line.number, value_tok.column, "duration must be nonnegative",
           value_tok.text);
    }
    const Token& unit = line.take("a unit ('s' or '/J')");
    bool fraction = false;
    if (unit.text == "/J") {
      fraction = true;
    } else if (unit.text != "s") {
      fail(line.number, unit.column, "expected delay unit 's' or '/J'",
           unit.text);
    }
    line.finish();
    return DelayEvent{value, fraction};
  }
  if (head.text == "couple") {
    const Token& frac_tok = line.take("a fraction");
    const double fraction = parse_number(line, frac_tok, "fraction");
    if (fraction < 0.0) {
      fail(line.number, frac_tok.column, "fraction must be nonnegative",
           frac_tok.text);
    }
    line.finish();
    return CoupleEvent{fraction};
  }
  if (head.text == "zrot") {
    const Target target = parse_target(line, line.take("a target"));
    const double theta = parse_number(line, line.take("an angle"), "angle");
    line.finish();
    return ZRotEvent{target, theta};
  }
  fail(line.number, head.column, "unknown event mnemonic", head.text);
}

std::string format_number(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, ptr);
}

std::string format_axis(double phase_deg) {
  if (phase_deg == 0.0) return "x";
  if (phase_deg == 90.0) return "y";
  if (phase_deg == 180.0) return "-x";
  if (phase_deg == 270.0) return "-y";
  return format_number(phase_deg);
}

std::string_view target_name(Target target) {
  switch (target) {
    case Target::I:
      return "I";
    case Target::S:
      return "S";
    default:
      return "both";
  }
}

struct Printer {
  std::ostringstream out;

  void operator()(const PulseEvent& e) {
    out << "pulse " << target_name(e.target) << ' '
        << format_number(e.flip_deg) << ' ' << format_axis(e.phase_deg);
  }
  void operator()(const SoftPulseEvent& e) {
    out << "soft " << spin_name(e.target) << ' ' << format_number(e.flip_deg)
        << ' ' << format_axis(e.phase_deg) << " dur "
        << format_number(e.duration_s);
    if (e.offset_hz) out << " offset " << format_number(*e.offset_hz);
    if (e.truncation) out << " trunc " << format_number(*e.truncation);
    if (e.slices) out << " slices " << *e.slices;
  }
  void operator()(const DelayEvent& e) {
    out << "delay " << format_number(e.value) << (e.fraction_of_j ? " /J" : " s");
  }
  void operator()(const CoupleEvent& e) {
    out << "couple " << format_number(e.fraction);
  }
  void operator()(const ZRotEvent& e) {
    out << "zrot " << target_name(e.target) << ' '
        << format_number(e.theta_deg);
  }
};

}  // namespace

std::variant<Sequence, ParseError> parse(std::string_view text,
                                         std::string name) {
  Sequence seq;
  seq.name = std::move(name);
  int line_number = 0;
  size_t pos = 0;
  try {
    while (pos <= text.size()) {
      const size_t eol = text.find('\n', pos);
      const std::string_view raw =
          text.substr(pos, eol == std::string_view::npos ? std::string_view::npos
                                                         : eol - pos);
      ++line_number;
      Line line{line_number, static_cast<int>(raw.size()) + 1,
                tokenize(raw)};
      if (!line.toks.empty()) {
        seq.events.push_back(parse_event(line));
      }
      if (eol == std::string_view::npos) break;
      pos = eol + 1;
    }
  } catch (const ParseFailure& failure) {
    return failure.error;
  }
  return seq;
}

std::string print(const Sequence& seq) {
  Printer printer;
  for (const Event& event : seq.events) {
    std::visit(printer, event);
    printer.out << '\n';
  }
  return printer.out.str();
}

namespace {

struct EventCompiler {
  const SpinSystem& sys;
  CompileMode mode;
  const ShapedLibrary* shaped;

  C4 operator()(const PulseEvent& e) const {
    if (mode == CompileMode::Shaped && e.target != Target::Both) {
      if (shaped == nullptr) {
        throw CompileError(
            "shaped compilation of a single-spin pulse needs a calibrated "
            "pulse library");
      }
      const Spin spin = e.target == Target::I ? Spin::I : Spin::S;
      return shaped->selective(spin, e.flip_deg, e.phase_deg);
    }
    return hard_pulse(e.flip_deg, e.phase_deg, e.target);
  }

  C4 operator()(const SoftPulseEvent& e) const {
    ShapedPulseSpec spec;
    spec.target = e.target;
    spec.flip_deg = e.flip_deg;
    spec.phase_deg = e.phase_deg;
    spec.duration_s = e.duration_s;
    const ShapedDefaults defaults =
        shaped != nullptr ? shaped->defaults() : ShapedDefaults{};
    spec.shape = PulseShape::Gaussian;
    spec.truncation = e.truncation.value_or(defaults.truncation);
    spec.slices = e.slices.value_or(defaults.slices);
    spec.ramp_offset_hz = e.offset_hz;
    return shaped_propagator(sys, spec);
  }

  C4 operator()(const DelayEvent& e) const {
    double t = e.value;
    if (e.fraction_of_j) {
      if (sys.j_hz == 0.0) {
        throw CompileError("delay in units of 1/J requires a nonzero J");
      }
      t = e.value / std::abs(sys.j_hz);
    }
    return free_evolution(sys, t);
  }

  C4 operator()(const CoupleEvent& e) const {
    return couple(e.fraction, sys);
  }

  C4 operator()(const ZRotEvent& e) const {
    return z_rotation(e.theta_deg, e.target);
  }
};

std::string_view event_mnemonic(const Event& event) {
  switch (event.index()) {
    case 0:
      return "pulse";
    case 1:
      return "soft";
    case 2:
      return "delay";
    case 3:
      return "couple";
    default:
      return "zrot";
  }
}

}  // namespace

C4 compile(const Sequence& seq, const SpinSystem& sys, CompileMode mode,
           const ShapedLibrary* shaped) {
  sys.validate();
  const EventCompiler compiler{sys, mode, shaped};
  C4 u = C4::Identity();
  for (size_t k = 0; k < seq.events.size(); ++k) {
    try {
      u = std::visit(compiler, seq.events[k]) * u;
    } catch (const CompileError&) {
      throw;
    } catch (const std::exception& e) {
      std::ostringstream msg;
      msg << "event " << (k + 1) << " (" << event_mnemonic(seq.events[k])
          << ")";
      if (!seq.name.empty()) msg << " of '" << seq.name << "'";
      msg << ": " << e.what();
      throw CompileError(msg.str());
    }
  }
  return u;
}

namespace {

Event pulse(Target target, double flip, double phase) {
  return PulseEvent{target, flip, phase};
}

}  // namespace

Sequence builtin(std::string_view name) {
  Sequence seq;
  seq.name = std::string(name);
  if (name == "u00") {
    return seq;
  }
  if (name == "u01" || name == "u10") {
    const double z_sign = name == "u01" ? -1.0 : 1.0;
    seq.events = {
        pulse(Target::S, 90.0, 90.0),
        CoupleEvent{0.5},
        ZRotEvent{Target::I, 90.0},
        ZRotEvent{Target::S, z_sign * 90.0},
        pulse(Target::S, 90.0, 270.0),
    };
    return seq;
  }
  if (name == "u11") {
    seq.events = {pulse(Target::S, 180.0, 0.0)};
    return seq;
  }
  if (name == "u01_merged" || name == "u10_merged") {
    const double final_phase = name == "u01_merged" ? 0.0 : 180.0;
    seq.events = {
        pulse(Target::S, 90.0, 90.0),
        DelayEvent{0.25, true},
        pulse(Target::Both, 180.0, 0.0),
        DelayEvent{0.25, true},
        pulse(Target::Both, 180.0, 0.0),
        pulse(Target::I, 90.0, 90.0),
        pulse(Target::I, 90.0, 0.0),
        pulse(Target::Both, 90.0, 270.0),
        pulse(Target::S, 90.0, final_phase),
    };
    return seq;
  }
  if (name == "u11_shaped") {
    seq.events = {pulse(Target::S, 90.0, 0.0), pulse(Target::S, 90.0, 0.0)};
    return seq;
  }
  if (name == "hadamard_I" || name == "hadamard_S") {
    const Target target = name == "hadamard_I" ? Target::I : Target::S;
    seq.events = {
        pulse(target, 45.0, 90.0),
        pulse(target, 180.0, 0.0),
        pulse(target, 45.0, 270.0),
    };
    return seq;
  }
  if (name == "pseudo_h" || name == "deutsch_prep") {
    seq.events = {pulse(Target::Both, 90.0, 90.0)};
    return seq;
  }
  throw std::invalid_argument("unknown builtin sequence '" +
                              std::string(name) + "'");
}

std::vector<std::string_view> builtin_names() {
  return {"u00",        "u01",        "u10",       "u11",
          "u01_merged", "u10_merged", "u11_shaped", "hadamard_I",
          "hadamard_S", "pseudo_h",   "deutsch_prep"};
}

Sequence expand_composite_z(const Sequence& seq) {
  Sequence out;
  out.name = seq.name;
  for (const Event& event : seq.events) {
    if (const auto* zrot = std::get_if<ZRotEvent>(&event)) {
      out.events.push_back(pulse(zrot->target, 90.0, 90.0));
      out.events.push_back(pulse(zrot->target, zrot->theta_deg, 0.0));
      out.events.push_back(pulse(zrot->target, 90.0, 270.0));
    } else {
      out.events.push_back(event);
    }
  }
  return out;
}

PhaseDistance check_equivalence(const Sequence& seq, const C4& target,
                                const SpinSystem& sys, CompileMode mode,
                                const ShapedLibrary* shaped) {
  return phase_distance(compile(seq, sys, mode, shaped), target);
}

}  // namespace nmrqc
