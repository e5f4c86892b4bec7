// SPDX-License-Identifier: Apache-2.0
// Copyright (c) nicert contributors

#include "nicert/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace nicert {

namespace {

using nlohmann::json;

class JsonOut {
 public:
  void raw(const std::string& s) {
    mark();
    out_ += s;
  }
  void key(const std::string& k) {
    comma();
    out_ += '"';
    out_ += k;
    out_ += "\":";
    fresh_ = true;
  }
  void open_object() { mark(); out_ += '{'; fresh_ = true; }
  void close_object() { out_ += '}'; fresh_ = false; }
  void open_array() { mark(); out_ += '['; fresh_ = true; }
  void close_array() { out_ += ']'; fresh_ = false; }
  void value(double v) { mark(); out_ += format_fixed(v); }
  void value(int v) { mark(); out_ += std::to_string(v); }
  void value(std::uint64_t v) { mark(); out_ += std::to_string(v); }
  void value(bool v) { mark(); out_ += v ? "true" : "false"; }
  void value(const std::string& s) {
    mark();
    out_ += '"';
    for (char c : s) {
      if (c == '"' || c == '\\') out_ += '\\';
      out_ += c;
    }
    out_ += '"';
  }
  void matrix(const Mat& m) {
    open_array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      open_array();
      for (Eigen::Index j = 0; j < m.cols(); ++j) value(m(i, j));
      close_array();
    }
    close_array();
  }
  const std::string& str() const { return out_; }

 private:
  void comma() {
    if (!fresh_ && !out_.empty() && out_.back() != '{' && out_.back() != '[') out_ += ',';
  }
  void mark() {
    comma();
    fresh_ = false;
  }
  std::string out_;
  bool fresh_ = true;
};

void write_kkt(JsonOut& w, const KktCertificate& k) {
  w.open_object();
  w.key("G1"); w.matrix(k.G1);
  w.key("G2"); w.matrix(k.G2);
  w.key("lambda1"); w.value(k.lambda1);
  w.key("lambda2"); w.value(k.lambda2);
  w.key("W1"); w.matrix(k.W1);
  w.key("W2"); w.matrix(k.W2);
  w.key("stationarity_residual"); w.value(k.stationarity_residual);
  w.key("complementarity_residual"); w.value(k.complementarity_residual);
  w.key("psd_violation"); w.value(k.psd_violation);
  w.close_object();
}

void write_verdict(JsonOut& w, const NoisyVerdict& v) {
  w.open_object();
  w.key("passed"); w.value(v.passed);
  w.key("sum_capacity_nats");
  if (v.sum_capacity) w.value(*v.sum_capacity); else w.raw("null");
  w.key("conditions");
  w.open_array();
  for (const auto& c : v.conditions) {
    w.open_object();
    w.key("name"); w.value(c.name);
    w.key("value"); w.value(c.value);
    w.key("margin"); w.value(c.margin);
    w.close_object();
  }
  w.close_array();
  if (v.radius_phi1) { w.key("radius_phi1"); w.value(*v.radius_phi1); }
  if (v.radius_phi2) { w.key("radius_phi2"); w.value(*v.radius_phi2); }
  if (v.O) {
    w.key("O1"); w.matrix(v.O->O1);
    w.key("O2"); w.matrix(v.O->O2);
  }
  if (!v.note.empty()) { w.key("note"); w.value(v.note); }
  w.close_object();
}

}  // namespace

std::string format_fixed(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", value);
  std::string s = buf;
  if (s == "-0.000000") s = "0.000000";
  return s;
}

std::string report_to_json(const RunReport& r) {
  JsonOut w;
  w.open_object();
  w.key("command"); w.value(r.command);
  w.key("tool_version"); w.value(r.tool_version);
  w.key("channel");
  w.open_object();
  w.key("H1"); w.matrix(r.channel.H1);
  w.key("F1"); w.matrix(r.channel.F1);
  w.key("H2"); w.matrix(r.channel.H2);
  w.key("F2"); w.matrix(r.channel.F2);
  w.key("P1"); w.value(r.channel.P1);
  w.key("P2"); w.value(r.channel.P2);
  w.close_object();
  w.key("class");
  w.open_object();
  w.key("kind"); w.value(channel_kind_name(r.channel_class.kind()));
  w.key("miso"); w.value(r.channel_class.miso);
  w.key("simo"); w.value(r.channel_class.simo);
  w.key("zic_f1_zero"); w.value(r.channel_class.zic_f1_zero);
  w.key("parallel"); w.value(r.channel_class.parallel);
  w.key("symmetric"); w.value(r.channel_class.symmetric);
  w.close_object();
  w.key("config");
  w.open_object();
  w.key("restarts"); w.value(r.config.restarts);
  w.key("max_iters"); w.value(r.config.max_iters);
  w.key("grad_tol"); w.value(r.config.grad_tol);
  w.key("seed"); w.value(r.config.seed);
  w.close_object();
  if (!r.route.empty()) { w.key("route"); w.value(r.route); }
  w.key("lower");
  w.open_object();
  w.key("sum_rate_nats"); w.value(r.lower_sum_rate);
  w.key("sum_rate_bits"); w.value(r.lower_sum_rate / std::log(2.0));
  w.key("S1"); w.matrix(r.lower_S.S1);
  w.key("S2"); w.matrix(r.lower_S.S2);
  w.key("kkt"); write_kkt(w, r.kkt);
  w.close_object();
  w.key("upper");
  if (r.upper_value) {
    w.open_object();
    w.key("value_nats"); w.value(*r.upper_value);
    w.key("value_bits"); w.value(*r.upper_value / std::log(2.0));
    w.key("gap_nats"); w.value(*r.upper_value - r.lower_sum_rate);
    if (r.genie) {
      w.key("genie");
      w.open_object();
      w.key("A1"); w.matrix(r.genie->A1);
      w.key("A2"); w.matrix(r.genie->A2);
      w.key("Sigma1"); w.matrix(r.genie->Sigma1);
      w.key("Sigma2"); w.matrix(r.genie->Sigma2);
      w.close_object();
    }
    if (r.upper_argmax) {
      w.key("argmax_S1"); w.matrix(r.upper_argmax->S1);
      w.key("argmax_S2"); w.matrix(r.upper_argmax->S2);
    }
    w.close_object();
  } else {
    w.raw("null");
  }
  if (r.lifted_S) {
    w.key("lifted_S1"); w.matrix(r.lifted_S->S1);
    w.key("lifted_S2"); w.matrix(r.lifted_S->S2);
  }
  if (r.verdict) {
    w.key("verdict");
    write_verdict(w, *r.verdict);
  }
  if (r.hk_witness) {
    w.key("rate_split_witness");
    w.open_object();
    w.key("sum_rate_nats"); w.value(r.hk_witness->sum_rate);
    w.key("Sp"); w.matrix(r.hk_witness->split.Sp);
    w.key("Sc"); w.matrix(r.hk_witness->split.Sc);
    w.close_object();
  }
  if (r.cross_check) {
    w.key("cross_check");
    w.open_object();
    w.key("passed"); w.value(r.cross_check->passed);
    w.key("lower"); w.value(r.cross_check->lower);
    w.key("upper");
    if (r.cross_check->upper) w.value(*r.cross_check->upper); else w.raw("null");
    w.close_object();
  }
  w.close_object();
  std::string out = w.str();
  out += '\n';
  return out;
}

std::string report_to_text(const RunReport& r) {
  std::ostringstream os;
  const auto f = [](double v) { return format_fixed(v); };
  os << "command: " << r.command << "\n";
  os << "class: " << channel_kind_name(r.channel_class.kind()) << "\n";
  if (!r.route.empty()) os << "route: " << r.route << "\n";
  os << "lower bound (single-user detection): " << f(r.lower_sum_rate) << " nats  ("
     << f(r.lower_sum_rate / std::log(2.0)) << " bits)\n";
  if (r.upper_value) {
    os << "upper bound (side information):      " << f(*r.upper_value) << " nats  ("
       << f(*r.upper_value / std::log(2.0)) << " bits)\n";
    os << "gap: " << f(*r.upper_value - r.lower_sum_rate) << " nats\n";
  } else {
    os << "upper bound: unknown (no valid side-information construction)\n";
  }
  if (r.verdict) {
    os << "verdict: " << (r.verdict->passed ? "certified" : "not certified") << "\n";
    if (r.verdict->sum_capacity) {
      os << "sum capacity: " << f(*r.verdict->sum_capacity) << " nats ("
         << f(*r.verdict->sum_capacity / std::log(2.0)) << " bits)\n";
    }
    os << "conditions (pass iff margin >= -1e-6):\n";
    for (const auto& c : r.verdict->conditions) {
      os << "  " << (c.margin >= -tol::kCertMargin ? "[ok]  " : "[FAIL]") << " " << c.name
         << "  value=" << f(c.value) << "  margin=" << f(c.margin) << "\n";
    }
    if (!r.verdict->note.empty()) os << "note: " << r.verdict->note << "\n";
  }
  if (r.hk_witness) {
    os << "rate-splitting witness: " << f(r.hk_witness->sum_rate)
       << " nats exceeds the single-user-detection optimum\n";
  }
  return os.str();
}

std::string sweep_to_csv(std::vector<SweepRow> rows) {
  std::sort(rows.begin(), rows.end(), [](const SweepRow& a, const SweepRow& b) {
    if (a.P2 != b.P2) return a.P2 < b.P2;
    return a.theta2 < b.theta2;
  });
  std::string out = "P1,P2,theta2,a2_max\n";
  for (const auto& r : rows) {
    out += format_fixed(r.P1) + "," + format_fixed(r.P2) + "," + format_fixed(r.theta2) + "," +
           format_fixed(r.a2_max) + "\n";
  }
  return out;
}

namespace {

Mat parse_matrix(const json& j, const std::string& key) {
  if (!j.is_array() || j.empty()) {
    throw Error(ErrorCode::ParseError, key + " must be a non-empty nested array");
  }
  const size_t rows = j.size();
  if (!j[0].is_array() || j[0].empty()) {
    throw Error(ErrorCode::ParseError, key + " must be a nested (row-major) array");
  }
  const size_t cols = j[0].size();
  Mat m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (size_t i = 0; i < rows; ++i) {
    if (!j[i].is_array() || j[i].size() != cols) {
      throw Error(ErrorCode::ParseError, key + " has ragged rows");
    }
    for (size_t k = 0; k < cols; ++k) {
      if (!j[i][k].is_number()) {
        throw Error(ErrorCode::ParseError, key + " contains a non-numeric entry");
      }
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = j[i][k].get<double>();
    }
  }
  return m;
}

json parse_strict(const std::string& text, std::initializer_list<const char*> keys) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
  if (!j.is_object()) throw Error(ErrorCode::ParseError, "top level must be a map");
  for (const auto& item : j.items()) {
    if (std::find_if(keys.begin(), keys.end(), [&](const char* k) {
          return item.key() == k;
        }) == keys.end()) {
      throw Error(ErrorCode::ParseError, "unknown key '" + item.key() + "'");
    }
  }
  for (const char* k : keys) {
    if (!j.contains(k)) throw Error(ErrorCode::ParseError, std::string("missing key '") + k + "'");
  }
  return j;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

MimoChannel load_channel_json(const std::string& text) {
  const json j = parse_strict(text, {"H1", "F1", "H2", "F2", "P1", "P2"});
  if (!j["P1"].is_number() || !j["P2"].is_number()) {
    throw Error(ErrorCode::ParseError, "P1 and P2 must be numbers");
  }
  return validate_channel(parse_matrix(j["H1"], "H1"), parse_matrix(j["F1"], "F1"),
                          parse_matrix(j["H2"], "H2"), parse_matrix(j["F2"], "F2"),
                          j["P1"].get<double>(), j["P2"].get<double>());
}

MimoChannel load_channel_file(const std::string& path) {
  return load_channel_json(slurp(path));
}

GenieParameters load_genie_json(const std::string& text) {
  const json j = parse_strict(text, {"A1", "A2", "Sigma1", "Sigma2"});
  GenieParameters g;
  g.A1 = parse_matrix(j["A1"], "A1");
  g.A2 = parse_matrix(j["A2"], "A2");
  g.Sigma1 = parse_matrix(j["Sigma1"], "Sigma1");
  g.Sigma2 = parse_matrix(j["Sigma2"], "Sigma2");
  return g;
}

GenieParameters load_genie_file(const std::string& path) {
  return load_genie_json(slurp(path));
}

std::string channel_to_json(const MimoChannel& ch) {
  JsonOut w;
  w.open_object();
  w.key("H1"); w.matrix(ch.H1);
  w.key("F1"); w.matrix(ch.F1);
  w.key("H2"); w.matrix(ch.H2);
  w.key("F2"); w.matrix(ch.F2);
  w.key("P1"); w.value(ch.P1);
  w.key("P2"); w.value(ch.P2);
  w.close_object();
  std::string out = w.str();
  out += '\n';
  return out;
}

}  // namespace nicert
