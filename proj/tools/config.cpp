#include "config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iterator>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "weakmeas/errors.hpp"
#include "weakmeas/unsharp.hpp"

namespace weakmeas::cli {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

[[noreturn]] void fail(std::string_view key, const std::string& why) {
  throw Error(Errc::InvalidConfig, "key '" + std::string(key) + "': " + why);
}

double parse_double(std::string_view key, std::string_view text) {
  text = trim(text);
  double v = 0.0;
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || end != text.data() + text.size() || text.empty()) {
    fail(key, "expected a number, got '" + std::string(text) + "'");
  }
  return v;
}

template <typename Int>
Int parse_integer(std::string_view key, std::string_view text) {
  text = trim(text);
  Int v{};
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || end != text.data() + text.size() || text.empty()) {
    fail(key, "expected a non-negative integer, got '" + std::string(text) + "'");
  }
  return v;
}

// Splits "dir a=0.8 readout=standard" into the direction text and key=value options.
// A parenthesised direction may contain spaces.
std::pair<std::string_view, std::vector<std::string_view>> split_step(std::string_view value) {
  value = trim(value);
  std::string_view dir;
  std::string_view rest;
  if (!value.empty() && value.front() == '(') {
    const auto close = value.find(')');
    if (close == std::string_view::npos) fail("step", "unterminated direction '('");
    dir = value.substr(0, close + 1);
    rest = value.substr(close + 1);
  } else {
    const auto space = value.find_first_of(" \t");
    dir = value.substr(0, space);
    rest = space == std::string_view::npos ? std::string_view{} : value.substr(space);
  }
  std::vector<std::string_view> options;
  rest = trim(rest);
  while (!rest.empty()) {
    const auto space = rest.find_first_of(" \t");
    options.push_back(rest.substr(0, space));
    rest = space == std::string_view::npos ? std::string_view{} : trim(rest.substr(space));
  }
  return {dir, options};
}

WeakStep parse_step(std::string_view value) {
  const auto [dir_text, options] = split_step(value);
  if (dir_text.empty()) fail("step", "missing direction");
  const BlochDirection direction = parse_direction(dir_text);

  std::optional<UnsharpCoupling> coupling;
  Readout readout = Readout::Standard;
  for (const std::string_view opt : options) {
    const auto eq = opt.find('=');
    if (eq == std::string_view::npos) fail("step", "expected name=value, got '" + std::string(opt) + "'");
    const std::string_view name = opt.substr(0, eq);
    const std::string_view arg = opt.substr(eq + 1);
    if (name == "a" || name == "b" || name == "epsilon") {
      if (coupling) fail("step", "give exactly one of a=, b=, epsilon=");
      const double v = parse_double("step", arg);
      try {
        if (name == "a") {
          coupling = UnsharpCoupling::from_a(v);
        } else if (name == "b") {
          if (v < 0.0 || v * v > 0.5) fail("step", "b must lie in [0, 1/sqrt2]");
          coupling = UnsharpCoupling(std::sqrt(1.0 - v * v), v);
        } else {
          coupling = UnsharpCoupling::from_strength(v);
        }
      } catch (const Error& e) {
        if (e.code() == Errc::InvalidConfig) throw;
        fail("step", e.what());
      }
    } else if (name == "readout") {
      if (arg == "standard") {
        readout = Readout::Standard;
      } else if (arg == "conjugate") {
        readout = Readout::Conjugate;
      } else {
        fail("step", "readout must be 'standard' or 'conjugate'");
      }
    } else {
      fail("step", "unknown step option '" + std::string(name) + "'");
    }
  }
  if (!coupling) fail("step", "missing coupling (a=, b= or epsilon=)");
  return WeakStep{direction, *coupling, readout};
}

}  // namespace

BlochDirection parse_direction(std::string_view text) {
  text = trim(text);
  if (text.size() >= 2 && text.front() == '(' && text.back() == ')') {
    std::string inner(text.substr(1, text.size() - 2));
    for (char& c : inner) {
      if (c == ',') c = ' ';
    }
    std::istringstream in(inner);
    std::vector<std::string> parts{std::istream_iterator<std::string>(in), {}};
    if (parts.size() != 3) fail("direction", "expected three components in '" + std::string(text) + "'");
    const double x = parse_double("direction", parts[0]);
    const double y = parse_double("direction", parts[1]);
    const double z = parse_double("direction", parts[2]);
    try {
      return BlochDirection::normalized(x, y, z);
    } catch (const Error& e) {
      fail("direction", e.what());
    }
  }
  double sign = 1.0;
  std::string_view axis = text;
  if (!axis.empty() && (axis.front() == '-' || axis.front() == '+')) {
    sign = axis.front() == '-' ? -1.0 : 1.0;
    axis.remove_prefix(1);
  }
  if (axis == "x") return {sign, 0, 0};
  if (axis == "y") return {0, sign, 0};
  if (axis == "z") return {0, 0, sign};
  fail("direction", "unrecognised direction '" + std::string(text) + "'");
}

Ket parse_state(std::string_view text) {
  text = trim(text);
  if (auto named = states::named(text)) return *named;
  return states::along(parse_direction(text));
}

ExperimentConfig parse_config(std::istream& in) {
  static const std::set<std::string, std::less<>> kSingleKeys{
      "pre", "final", "order", "trials", "seed", "threads"};

  ExperimentConfig config;
  std::set<std::string, std::less<>> seen;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view = line;
    if (const auto hash = view.find('#'); hash != std::string_view::npos) view = view.substr(0, hash);
    view = trim(view);
    if (view.empty()) continue;

    const auto eq = view.find('=');
    if (eq == std::string_view::npos) {
      throw Error(Errc::InvalidConfig,
                  "line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    const std::string_view key = trim(view.substr(0, eq));
    const std::string_view value = trim(view.substr(eq + 1));
    if (key != "step" && !kSingleKeys.contains(key)) fail(key, "unknown key");
    if (key != "step" && !seen.insert(std::string(key)).second) fail(key, "given more than once");
    if (value.empty()) fail(key, "missing value");

    if (key == "step") {
      config.steps.push_back(parse_step(value));
    } else if (key == "pre") {
      try {
        config.pre = parse_state(value);
      } catch (const Error& e) {
        fail(key, e.what());
      }
    } else if (key == "final") {
      try {
        config.final_direction = parse_direction(value);
      } catch (const Error& e) {
        fail(key, e.what());
      }
    } else if (key == "order") {
      if (value == "pointer-first") {
        config.order = Order::PointerFirst;
      } else if (value == "postselect-first") {
        config.order = Order::PostselectFirst;
      } else {
        fail(key, "expected 'pointer-first' or 'postselect-first'");
      }
    } else if (key == "trials") {
      config.trials = parse_integer<std::uint64_t>(key, value);
    } else if (key == "seed") {
      config.seed = parse_integer<std::uint64_t>(key, value);
    } else if (key == "threads") {
      config.threads = parse_integer<unsigned>(key, value);
    }
  }

  if (!seen.contains("pre")) fail("pre", "required key missing");
  if (!seen.contains("trials")) fail("trials", "required key missing");
  if (config.steps.empty()) fail("step", "at least one step is required");
  if (config.trials < 1) fail("trials", "must be at least 1");
  return config;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::ios_base::failure("cannot open config file '" + path.string() + "'");
  }
  return parse_config(in);
}

}  // namespace weakmeas::cli
