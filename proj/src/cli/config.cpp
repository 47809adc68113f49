#include "retx/cli/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <sstream>
#include <type_traits>

#include "retx/coupled_model.hpp"
#include "retx/error.hpp"

namespace retx::cli {
namespace {

struct Value {
  std::vector<std::string> items;
  bool is_list = false;
  int line = 0;
};

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

[[noreturn]] void bad(const std::string& what) { fail(Errc::ConfigInvalid, what); }

std::map<std::string, Value> tokenize(std::string_view text) {
  std::map<std::string, Value> out;
  std::istringstream in{std::string(text)};
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string line = trim(std::string_view(raw).substr(0, raw.find('#')));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) bad("line " + std::to_string(line_no) + ": expected key = value");
    const std::string key = trim(std::string_view(line).substr(0, eq));
    std::string rhs = trim(std::string_view(line).substr(eq + 1));
    if (key.empty() || rhs.empty()) bad("line " + std::to_string(line_no) + ": empty key or value");
    Value v;
    v.line = line_no;
    if (rhs.front() == '[') {
      if (rhs.back() != ']') bad("line " + std::to_string(line_no) + ": unterminated list");
      v.is_list = true;
      std::istringstream items(rhs.substr(1, rhs.size() - 2));
      std::string item;
      while (std::getline(items, item, ',')) {
        item = trim(item);
        if (item.empty()) bad("line " + std::to_string(line_no) + ": empty list item");
        v.items.push_back(item);
      }
    } else {
      v.items.push_back(rhs);
    }
    if (!out.emplace(key, std::move(v)).second) bad("line " + std::to_string(line_no) + ": duplicate key " + key);
  }
  return out;
}

double to_double(const std::string& s, const std::string& key) {
  if (s == "inf" || s == "+inf") return std::numeric_limits<double>::infinity();
  double v = 0.0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) bad(key + ": not a number: " + s);
  return v;
}

std::uint64_t to_count(const std::string& s, const std::string& key) {
  std::uint64_t v = 0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec == std::errc() && p == s.data() + s.size()) return v;
  const double d = to_double(s, key);
  if (!(d >= 0.0 && d <= 9.2e18 && std::floor(d) == d)) bad(key + ": not a nonnegative integer: " + s);
  return static_cast<std::uint64_t>(d);
}

bool to_bool(const std::string& s, const std::string& key) {
  if (s == "true" || s == "1" || s == "yes") return true;
  if (s == "false" || s == "0" || s == "no") return false;
  bad(key + ": not a boolean: " + s);
}

class Reader {
 public:
  explicit Reader(std::map<std::string, Value> kv) : kv_(std::move(kv)) {}

  bool has(const std::string& key) const { return kv_.count(key) != 0; }

  const Value* get(const std::string& key) {
    const auto it = kv_.find(key);
    if (it == kv_.end()) return nullptr;
    used_.insert(key);
    return &it->second;
  }

  std::optional<std::string> scalar(const std::string& key) {
    const Value* v = get(key);
    if (!v) return std::nullopt;
    if (v->is_list) bad(key + ": expected a scalar");
    return v->items.front();
  }

  std::string require_scalar(const std::string& key) {
    auto v = scalar(key);
    if (!v) bad("missing key " + key);
    return *v;
  }

  std::optional<double> number(const std::string& key) {
    auto s = scalar(key);
    if (!s) return std::nullopt;
    return to_double(*s, key);
  }

  double require_number(const std::string& key) { return to_double(require_scalar(key), key); }

  std::vector<std::string> list(const std::string& key) {
    const Value* v = get(key);
    if (!v) return {};
    return v->items;
  }

  std::vector<std::string> keys() const {
    std::vector<std::string> out;
    for (const auto& [k, _] : kv_) out.push_back(k);
    return out;
  }

  void check_all_used() const {
    for (const auto& [k, v] : kv_) {
      if (!used_.count(k)) bad("line " + std::to_string(v.line) + ": unknown key " + k);
    }
  }

 private:
  std::map<std::string, Value> kv_;
  std::set<std::string> used_;
};

const std::set<std::string> kModelFields = {"channel", "doc", "bounds", "alpha", "ell"};

DistSpec read_law(Reader& r, const std::string& prefix) {
  const std::string family = r.require_scalar(prefix + ".family");
  if (family == "exponential") return DistSpec::exponential(r.require_number(prefix + ".rate"));
  if (family == "weibull") {
    return DistSpec::weibull(r.require_number(prefix + ".k"), r.require_number(prefix + ".scale"));
  }
  if (family == "gamma") return DistSpec::gamma(r.require_number(prefix + ".rate"), r.require_number(prefix + ".shape"));
  bad(prefix + ".family: unknown family " + family);
}

SlowVary read_ell(Reader& r, const std::string& prefix) {
  const std::string kind = r.scalar(prefix + ".kind").value_or("one");
  if (kind == "one") return SlowVary::one();
  if (kind == "log_power") {
    const double coeff = r.require_number(prefix + ".coeff");
    const double exponent = r.require_number(prefix + ".exponent");
    const auto x_min = r.number(prefix + ".x_min");
    return x_min ? SlowVary::log_power(coeff, exponent, *x_min) : SlowVary::log_power(coeff, exponent);
  }
  if (kind == "gamma_doc_exact") {
    return SlowVary::gamma_doc_exact(r.require_number(prefix + ".lambda"), r.require_number(prefix + ".k"),
                                     r.require_number(prefix + ".mu"));
  }
  bad(prefix + ".kind: unknown kind " + kind);
}

ModelConfig read_model(Reader& r, const std::string& label) {
  const std::string p = label.empty() ? "model" : "model." + label;
  ModelConfig m;
  m.label = label;
  m.channel = read_law(r, p + ".channel");
  const std::string mode = r.scalar(p + ".doc.mode").value_or(r.has(p + ".doc.family") ? "parametric" : "derived");
  if (mode == "parametric") {
    m.doc = read_law(r, p + ".doc");
  } else if (mode != "derived") {
    bad(p + ".doc.mode: expected parametric or derived");
  }
  for (const auto& s : r.list(p + ".bounds")) m.bounds.push_back(to_double(s, p + ".bounds"));
  m.alpha = r.number(p + ".alpha");
  m.ell = read_ell(r, p + ".ell");
  return m;
}

void append_law(std::ostringstream& os, const std::string& prefix, const DistSpec& d) {
  std::visit(
      [&](const auto& law) {
        using T = std::decay_t<decltype(law)>;
        if constexpr (std::is_same_v<T, Exponential>) {
          os << prefix << ".family = exponential\n" << prefix << ".rate = " << format_number(law.rate) << "\n";
        } else if constexpr (std::is_same_v<T, Weibull>) {
          os << prefix << ".family = weibull\n"
             << prefix << ".k = " << format_number(law.k) << "\n"
             << prefix << ".scale = " << format_number(law.scale) << "\n";
        } else {
          os << prefix << ".family = gamma\n"
             << prefix << ".rate = " << format_number(law.rate) << "\n"
             << prefix << ".shape = " << format_number(law.shape) << "\n";
        }
      },
      d.family());
}

template <class T, class F>
std::string join_list(const std::vector<T>& xs, F&& fmt) {
  std::string out = "[";
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ", ";
    out += fmt(xs[i]);
  }
  return out + "]";
}

}  // namespace

bool ExperimentConfig::wants(CurveSource s) const {
  return std::find(curves.begin(), curves.end(), s) != curves.end();
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::optional<CurveSource> parse_source(std::string_view name) {
  for (auto s : {CurveSource::MonteCarlo, CurveSource::Oracle, CurveSource::UniformApprox, CurveSource::PowerLawLimit,
                 CurveSource::ExpTail, CurveSource::ExactInteger, CurveSource::LogBody}) {
    if (source_key(s) == name) return s;
  }
  return std::nullopt;
}

std::string_view source_key(CurveSource s) noexcept {
  return s == CurveSource::MonteCarlo ? std::string_view("mc") : column_name(s);
}

ExperimentConfig parse_config(std::string_view text) {
  Reader r(tokenize(text));
  ExperimentConfig cfg;
  try {
    if (auto v = r.scalar("name")) cfg.name = *v;

    std::vector<std::string> labels;
    for (const auto& key : r.keys()) {
      if (key.rfind("model.", 0) != 0) continue;
      const std::string rest = key.substr(6);
      const std::string head = rest.substr(0, rest.find('.'));
      const std::string label = kModelFields.count(head) ? "" : head;
      if (std::find(labels.begin(), labels.end(), label) == labels.end()) labels.push_back(label);
    }
    for (const auto& label : labels) cfg.models.push_back(read_model(r, label));

    if (auto v = r.scalar("grid.n_min")) cfg.grid.n_min = to_count(*v, "grid.n_min");
    if (auto v = r.scalar("grid.n_max")) cfg.grid.n_max = (*v == "auto") ? 0 : to_count(*v, "grid.n_max");
    if (auto v = r.scalar("grid.points_per_decade")) {
      cfg.grid.points_per_decade = static_cast<int>(to_count(*v, "grid.points_per_decade"));
    }
    if (auto v = r.scalar("samples")) cfg.samples = to_count(*v, "samples");
    if (auto v = r.scalar("seed")) cfg.seed = to_count(*v, "seed");
    if (auto v = r.scalar("workers")) cfg.workers = static_cast<unsigned>(to_count(*v, "workers"));
    if (auto v = r.number("confidence")) cfg.confidence = *v;
    for (const auto& s : r.list("curves")) {
      const auto src = parse_source(s);
      if (!src) bad("curves: unknown source " + s);
      if (!cfg.wants(*src)) cfg.curves.push_back(*src);
    }
    if (auto v = r.scalar("output")) cfg.output = *v;
    if (auto v = r.scalar("format")) {
      if (*v == "csv") {
        cfg.format = Format::Csv;
      } else if (*v == "json") {
        cfg.format = Format::Json;
      } else {
        bad("format: expected csv or json");
      }
    }
    if (auto v = r.scalar("override_coupling")) cfg.override_coupling = to_bool(*v, "override_coupling");
    if (auto v = r.scalar("prefactor")) {
      if (*v == "truncation_corrected") {
        cfg.prefactor = PrefactorMode::TruncationCorrected;
      } else if (*v == "plain") {
        cfg.prefactor = PrefactorMode::Plain;
      } else {
        bad("prefactor: expected truncation_corrected or plain");
      }
    }
  } catch (const Error& e) {
    if (e.code() == Errc::ConfigInvalid) throw;
    bad(e.what());
  }
  r.check_all_used();
  validate(cfg);
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(Errc::ConfigInvalid, "cannot read config " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

void validate(const ExperimentConfig& cfg) {
  if (cfg.models.empty()) bad("no model given");
  for (const auto& m : cfg.models) {
    const std::string where = m.label.empty() ? "model" : "model." + m.label;
    if (m.bounds.empty()) bad(where + ".bounds: at least one bound is required");
    for (double b : m.bounds) {
      if (!(b > 0.0)) bad(where + ".bounds: bounds must be positive");
    }
    if (m.alpha && !(*m.alpha > 0.0 && std::isfinite(*m.alpha))) bad(where + ".alpha: must be positive");
    if (!m.doc && !m.alpha) bad(where + ".alpha: required for a derived document law");
    if (m.doc && !m.alpha && !infer_alpha(m.channel, *m.doc)) {
      bad(where + ".alpha: required, cannot be inferred for this pair");
    }
  }
  if (cfg.grid.n_min < 1) bad("grid.n_min must be at least 1");
  if (cfg.grid.n_max != 0 && cfg.grid.n_max < cfg.grid.n_min) bad("grid.n_max below grid.n_min");
  if (cfg.grid.points_per_decade < 1) bad("grid.points_per_decade must be at least 1");
  if (cfg.samples < 1000) bad("samples must be at least 1000");
  if (!(cfg.confidence > 0.5 && cfg.confidence < 1.0)) bad("confidence must be in (0.5, 1)");
  if (cfg.workers < 1) bad("workers must be at least 1");
  if (cfg.curves.empty()) bad("curves: at least one source is required");
}

std::string to_text(const ExperimentConfig& cfg) {
  std::ostringstream os;
  os << "name = " << cfg.name << "\n";
  for (const auto& m : cfg.models) {
    const std::string p = m.label.empty() ? "model" : "model." + m.label;
    append_law(os, p + ".channel", m.channel);
    if (m.doc) {
      os << p << ".doc.mode = parametric\n";
      append_law(os, p + ".doc", *m.doc);
    } else {
      os << p << ".doc.mode = derived\n";
    }
    os << p << ".bounds = " << join_list(m.bounds, format_number) << "\n";
    if (m.alpha) os << p << ".alpha = " << format_number(*m.alpha) << "\n";
    switch (m.ell.kind()) {
      case SlowVary::Kind::One:
        os << p << ".ell.kind = one\n";
        break;
      case SlowVary::Kind::LogPower:
        os << p << ".ell.kind = log_power\n"
           << p << ".ell.coeff = " << format_number(m.ell.coeff()) << "\n"
           << p << ".ell.exponent = " << format_number(m.ell.exponent()) << "\n"
           << p << ".ell.x_min = " << format_number(m.ell.x_min()) << "\n";
        break;
      case SlowVary::Kind::GammaDocExact:
        os << p << ".ell.kind = gamma_doc_exact\n"
           << p << ".ell.lambda = " << format_number(m.ell.rate()) << "\n"
           << p << ".ell.k = " << format_number(m.ell.shape()) << "\n"
           << p << ".ell.mu = " << format_number(m.ell.channel_rate()) << "\n";
        break;
    }
  }
  os << "grid.n_min = " << cfg.grid.n_min << "\n";
  os << "grid.n_max = " << (cfg.grid.n_max == 0 ? std::string("auto") : std::to_string(cfg.grid.n_max)) << "\n";
  os << "grid.points_per_decade = " << cfg.grid.points_per_decade << "\n";
  os << "samples = " << cfg.samples << "\n";
  os << "seed = " << cfg.seed << "\n";
  os << "workers = " << cfg.workers << "\n";
  os << "confidence = " << format_number(cfg.confidence) << "\n";
  os << "curves = " << join_list(cfg.curves, [](CurveSource s) { return std::string(source_key(s)); }) << "\n";
  if (!cfg.output.empty()) os << "output = " << cfg.output << "\n";
  os << "format = " << (cfg.format == Format::Csv ? "csv" : "json") << "\n";
  os << "override_coupling = " << (cfg.override_coupling ? "true" : "false") << "\n";
  os << "prefactor = " << (cfg.prefactor == PrefactorMode::Plain ? "plain" : "truncation_corrected") << "\n";
  return os.str();
}

}  // namespace retx::cli
