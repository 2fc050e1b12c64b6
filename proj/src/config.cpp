#include "secbeam/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "secbeam/errors.hpp"

namespace secbeam {
namespace {

using nlohmann::json;

const json& require(const json& j, const std::string& key) {
  auto it = j.find(key);
  if (it == j.end()) throw MissingKey(key);
  return *it;
}

int require_positive_int(const json& j, const std::string& key) {
  const json& v = require(j, key);
  if (!v.is_number_integer() || v.get<long long>() <= 0)
    throw InvalidValue(key, "expected a positive integer");
  return v.get<int>();
}

double require_number(const json& j, const std::string& key) {
  const json& v = require(j, key);
  if (!v.is_number()) throw InvalidValue(key, "expected a number");
  return v.get<double>();
}

// Accepts either a scalar (broadcast to all users) or an array of length D.
std::vector<double> per_user_numbers(const json& j, const std::string& key,
                                     int D) {
  const json& v = require(j, key);
  std::vector<double> out;
  if (v.is_number()) {
    out.assign(D, v.get<double>());
  } else if (v.is_array()) {
    if (static_cast<int>(v.size()) != D)
      throw InvalidValue(key, "array length must equal D");
    for (const auto& e : v) {
      if (!e.is_number()) throw InvalidValue(key, "array entries must be numbers");
      out.push_back(e.get<double>());
    }
  } else {
    throw InvalidValue(key, "expected a number or an array of length D");
  }
  return out;
}

}  // namespace

double db_to_watts(double db) { return std::pow(10.0, db / 10.0); }
double bits_to_nats(double bits) { return bits * M_LN2; }
double nats_to_bits(double nats) { return nats / M_LN2; }

SystemConfig SystemConfig::with_pmax_db(double pmax_db) const {
  SystemConfig out = *this;
  out.P_max = db_to_watts(pmax_db);
  return out;
}

SystemConfig load_config(const json& j) {
  static const std::set<std::string> kKnown = {
      "D",          "N",       "N_r",
      "N_e",        "d_1",     "sigma_u",
      "sigma_e",    "r_bits",  "zeta",
      "P_c_dB",     "P_max_dB_list", "eps_secrecy_bits",
      "eps_stop",   "max_outer_iters", "seeds"};
  if (!j.is_object()) throw InvalidValue("<root>", "config must be a JSON object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!kKnown.count(it.key())) throw InvalidValue(it.key(), "unknown key");
  }

  SystemConfig cfg;
  cfg.D = require_positive_int(j, "D");
  cfg.N = require_positive_int(j, "N");
  cfg.N_r = require_positive_int(j, "N_r");
  cfg.N_e = require_positive_int(j, "N_e");
  cfg.d_1 = require_positive_int(j, "d_1");
  if (cfg.d_1 > std::min(cfg.N, cfg.N_r))
    throw InvalidValue("d_1", "stream count must not exceed min(N, N_r)");

  cfg.sigma_u = per_user_numbers(j, "sigma_u", cfg.D);
  for (double s : cfg.sigma_u)
    if (!(s > 0.0)) throw InvalidValue("sigma_u", "must be positive");
  cfg.sigma_e = require_number(j, "sigma_e");
  if (!(cfg.sigma_e > 0.0)) throw InvalidValue("sigma_e", "must be positive");

  cfg.r_nats = per_user_numbers(j, "r_bits", cfg.D);
  for (double& r : cfg.r_nats) {
    if (!(r >= 0.0)) throw InvalidValue("r_bits", "must be nonnegative");
    r = bits_to_nats(r);
  }

  cfg.zeta = require_number(j, "zeta");
  if (!(cfg.zeta > 0.0)) throw InvalidValue("zeta", "must be positive");

  cfg.P_c = db_to_watts(require_number(j, "P_c_dB"));

  {
    const json& v = require(j, "P_max_dB_list");
    if (v.is_number()) {
      cfg.P_max_dB_list = {v.get<double>()};
    } else if (v.is_array() && !v.empty()) {
      for (const auto& e : v) {
        if (!e.is_number())
          throw InvalidValue("P_max_dB_list", "entries must be numbers");
        cfg.P_max_dB_list.push_back(e.get<double>());
      }
    } else {
      throw InvalidValue("P_max_dB_list", "expected a number or nonempty array");
    }
    cfg.P_max = db_to_watts(cfg.P_max_dB_list.front());
  }

  {
    const json& v = require(j, "eps_secrecy_bits");
    if (v.is_string() && v.get<std::string>() == "inf") {
      cfg.eps_secrecy_nats = std::numeric_limits<double>::infinity();
    } else if (v.is_number() && v.get<double>() >= 0.0) {
      cfg.eps_secrecy_nats = bits_to_nats(v.get<double>());
    } else {
      throw InvalidValue("eps_secrecy_bits",
                         "expected a nonnegative number or \"inf\"");
    }
  }

  cfg.eps_stop = require_number(j, "eps_stop");
  if (!(cfg.eps_stop > 0.0)) throw InvalidValue("eps_stop", "must be positive");
  cfg.max_outer_iters = require_positive_int(j, "max_outer_iters");

  {
    const json& v = require(j, "seeds");
    if (v.is_number_integer()) {
      const long long count = v.get<long long>();
      if (count <= 0) throw InvalidValue("seeds", "count must be positive");
      for (long long s = 0; s < count; ++s)
        cfg.seeds.push_back(static_cast<std::uint64_t>(s));
    } else if (v.is_array() && !v.empty()) {
      for (const auto& e : v) {
        if (!e.is_number_integer() || e.get<long long>() < 0)
          throw InvalidValue("seeds", "entries must be nonnegative integers");
        cfg.seeds.push_back(e.get<std::uint64_t>());
      }
    } else {
      throw InvalidValue("seeds", "expected a count or nonempty array");
    }
  }

  return cfg;
}

SystemConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ConfigError("config parse error in " + path + ": " + e.what());
  }
  return load_config(j);
}

std::string canonical_config_text(const SystemConfig& cfg) {
  std::ostringstream os;
  auto num = [](double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return std::string(buf);
  };
  os << "D=" << cfg.D << "\nN=" << cfg.N << "\nN_r=" << cfg.N_r
     << "\nN_e=" << cfg.N_e << "\nd_1=" << cfg.d_1 << "\n";
  os << "sigma_u=";
  for (double s : cfg.sigma_u) os << num(s) << ",";
  os << "\nsigma_e=" << num(cfg.sigma_e) << "\nr_nats=";
  for (double r : cfg.r_nats) os << num(r) << ",";
  os << "\nzeta=" << num(cfg.zeta) << "\nP_c=" << num(cfg.P_c)
     << "\nP_max=" << num(cfg.P_max)
     << "\neps_secrecy_nats=" << num(cfg.eps_secrecy_nats)
     << "\neps_stop=" << num(cfg.eps_stop)
     << "\nmax_outer_iters=" << cfg.max_outer_iters << "\nP_max_dB_list=";
  for (double p : cfg.P_max_dB_list) os << num(p) << ",";
  os << "\nseeds=";
  for (std::uint64_t s : cfg.seeds) os << s << ",";
  os << "\n";
  return os.str();
}

std::uint64_t config_hash(const SystemConfig& cfg) {
  const std::string text = canonical_config_text(cfg);
  std::uint64_t h = 1469598103934665603ull;  // FNV-1a 64-bit offset basis
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace secbeam
