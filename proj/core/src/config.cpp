#include "ulab/config.hpp"

#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "ulab/error.hpp"

namespace ulab {

using json = nlohmann::json;

namespace {

// Walks a JSON document, collecting every violation with its key path.
class Reader {
 public:
  std::vector<std::string> errors;

  void fail(const std::string& path, const std::string& what) { errors.push_back(path + ": " + what); }

  const json* object(const json& parent, const std::string& key, const std::string& path, bool required) {
    auto it = parent.find(key);
    if (it == parent.end()) {
      if (required) fail(path, "required");
      return nullptr;
    }
    if (!it->is_object()) {
      fail(path, "must be an object");
      return nullptr;
    }
    return &*it;
  }

  void allow(const json& obj, const std::string& path, const std::set<std::string>& keys) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
      if (!keys.count(it.key())) fail(join(path, it.key()), "unknown key");
    }
  }

  static std::string join(const std::string& path, const std::string& key) {
    return path.empty() ? key : path + "." + key;
  }

  std::optional<std::string> str(const json& obj, const std::string& key, const std::string& path) {
    auto it = obj.find(key);
    if (it == obj.end()) return std::nullopt;
    if (!it->is_string()) {
      fail(join(path, key), "must be a string");
      return std::nullopt;
    }
    return it->get<std::string>();
  }

  std::optional<double> num(const json& obj, const std::string& key, const std::string& path) {
    auto it = obj.find(key);
    if (it == obj.end()) return std::nullopt;
    if (!it->is_number()) {
      fail(join(path, key), "must be a number");
      return std::nullopt;
    }
    return it->get<double>();
  }

  std::optional<std::uint64_t> uint(const json& obj, const std::string& key, const std::string& path) {
    auto it = obj.find(key);
    if (it == obj.end()) return std::nullopt;
    return as_uint(*it, join(path, key));
  }

  std::optional<std::uint64_t> as_uint(const json& v, const std::string& path) {
    if (v.is_number_unsigned()) return v.get<std::uint64_t>();
    if (v.is_number_float()) {
      const double d = v.get<double>();
      if (d >= 0 && d == static_cast<double>(static_cast<std::uint64_t>(d)) && d < 0x1.0p63) {
        return static_cast<std::uint64_t>(d);
      }
    }
    fail(path, "must be a nonnegative integer");
    return std::nullopt;
  }

  std::optional<bool> boolean(const json& obj, const std::string& key, const std::string& path) {
    auto it = obj.find(key);
    if (it == obj.end()) return std::nullopt;
    if (!it->is_boolean()) {
      fail(join(path, key), "must be true or false");
      return std::nullopt;
    }
    return it->get<bool>();
  }

  std::vector<std::uint64_t> uint_list(const json& obj, const std::string& key, const std::string& path) {
    std::vector<std::uint64_t> out;
    auto it = obj.find(key);
    if (it == obj.end()) return out;
    if (!it->is_array()) {
      fail(join(path, key), "must be an array of integers");
      return out;
    }
    for (std::size_t i = 0; i < it->size(); ++i) {
      if (auto v = as_uint((*it)[i], join(path, key) + "[" + std::to_string(i) + "]")) out.push_back(*v);
    }
    return out;
  }

  // Runs a parser that throws ulab errors, recording them under `path`.
  template <typename F>
  void guard(const std::string& path, F&& fn) {
    try {
      fn();
    } catch (const ConfigError& e) {
      for (const auto& v : e.violations()) errors.push_back(v.rfind(path, 0) == 0 ? v : path + ": " + v);
    } catch (const Error& e) {
      fail(path, e.what());
    }
  }
};

SpaceKind parse_space(const std::string& s) {
  if (s == "unit") return SpaceKind::kUnit;
  if (s == "natural") return SpaceKind::kNatural;
  throw ConfigError("unknown space '" + s + "' (expected unit|natural)");
}

void read_int_schedule(Reader& r, const json& parent, const std::string& key, const std::string& path,
                       IntSchedule& out) {
  const json* obj = r.object(parent, key, path, false);
  if (!obj) return;
  r.allow(*obj, path, {"shape", "scale", "cap"});
  if (auto s = r.str(*obj, "shape", path)) r.guard(path + ".shape", [&] { out.shape = parse_shape(*s); });
  if (auto v = r.num(*obj, "scale", path)) out.scale = *v;
  if (auto v = r.uint(*obj, "cap", path)) out.cap = *v;
}

json int_schedule_json(const IntSchedule& s) {
  return json{{"shape", to_string(s.shape)}, {"scale", s.scale}, {"cap", s.cap}};
}

void read_process(Reader& r, const json& root, ExperimentConfig& cfg) {
  const json* p = r.object(root, "process", "process", true);
  if (!p) return;
  r.allow(*p, "process", {"kind", "params", "seed"});
  auto kind = r.str(*p, "kind", "process");
  if (!kind) {
    if (!p->contains("kind")) r.fail("process.kind", "required");
    return;
  }
  bool known = false;
  r.guard("process.kind", [&] {
    cfg.process.kind = parse_process_kind(*kind);
    known = true;
  });
  if (!known) return;
  auto& params = cfg.process.params;
  params = ProcessParams{};
  params.space = default_space(cfg.process.kind);
  if (auto seed = r.uint(*p, "seed", "process")) cfg.process.seed = *seed;
  const json* q = r.object(*p, "params", "process.params", false);
  std::set<std::string> allowed{"space"};
  for (const auto& name : process_param_names(cfg.process.kind)) allowed.insert(name);
  bool x0_given = false;
  bool x1_given = false;
  if (q) {
    r.allow(*q, "process.params", allowed);
    if (auto s = r.str(*q, "space", "process.params")) {
      r.guard("process.params.space", [&] { params.space = parse_space(*s); });
    }
    if (allowed.count("k")) {
      if (auto v = r.uint(*q, "k", "process.params")) params.k = *v;
    }
    if (allowed.count("stay")) {
      if (auto v = r.num(*q, "stay", "process.params")) params.stay = *v;
    }
    if (allowed.count("x0")) {
      if (auto v = r.num(*q, "x0", "process.params")) {
        params.x0 = *v;
        x0_given = true;
      }
    }
    if (allowed.count("x1")) {
      if (auto v = r.num(*q, "x1", "process.params")) {
        params.x1 = *v;
        x1_given = true;
      }
    }
  }
  if (params.space == SpaceKind::kNatural) {
    if (!x0_given) params.x0 = 0.0;
    if (!x1_given) params.x1 = 1.0;
  }
  r.guard("process.params", [&] { validate_params(cfg.process.kind, params); });
}

json process_json(const ProcessSpec& p) {
  json params{{"space", to_string(p.params.space)}};
  for (const auto& name : process_param_names(p.kind)) {
    if (name == "k") params["k"] = p.params.k;
    if (name == "stay") params["stay"] = p.params.stay;
    if (name == "x0") params["x0"] = p.params.x0;
    if (name == "x1") params["x1"] = p.params.x1;
  }
  json out{{"kind", to_string(p.kind)}, {"params", params}};
  if (p.seed) out["seed"] = *p.seed;
  return out;
}

void read_target(Reader& r, const json& root, ExperimentConfig& cfg) {
  const json* t = r.object(root, "target", "target", true);
  if (!t) return;
  auto kind = r.str(*t, "kind", "target");
  if (!kind) {
    if (!t->contains("kind")) r.fail("target.kind", "required");
    return;
  }
  auto& tgt = cfg.target;
  if (*kind == "constant") {
    tgt.kind = TargetKind::kConstant;
    r.allow(*t, "target", {"kind", "value"});
    if (auto v = r.num(*t, "value", "target")) tgt.value = *v;
  } else if (*kind == "simple") {
    tgt.kind = TargetKind::kSimple;
    r.allow(*t, "target", {"kind", "cells", "values", "default"});
    auto cells = t->find("cells");
    if (cells == t->end() || !cells->is_array()) {
      r.fail("target.cells", "required array of set literals");
    } else {
      for (const auto& c : *cells) {
        if (!c.is_string()) {
          r.fail("target.cells", "entries must be strings");
          continue;
        }
        tgt.cells.push_back(c.get<std::string>());
      }
    }
    auto values = t->find("values");
    if (values == t->end() || !values->is_array()) {
      r.fail("target.values", "required array of numbers");
    } else {
      for (const auto& v : *values) {
        if (!v.is_number()) {
          r.fail("target.values", "entries must be numbers");
          continue;
        }
        tgt.values.push_back(v.get<double>());
      }
    }
    if (auto v = r.num(*t, "default", "target")) tgt.default_value = *v;
  } else if (*kind == "kappa") {
    tgt.kind = TargetKind::kKappa;
    r.allow(*t, "target", {"kind", "kappa", "partition", "y0", "y1"});
    if (auto v = r.num(*t, "kappa", "target")) {
      tgt.kappa = *v;
    } else if (!t->contains("kappa")) {
      r.fail("target.kappa", "required");
    }
    if (auto v = r.str(*t, "partition", "target")) tgt.partition = *v;
    if (auto v = r.num(*t, "y0", "target")) tgt.y0 = *v;
    if (auto v = r.num(*t, "y1", "target")) tgt.y1 = *v;
  } else if (*kind == "nn_killer") {
    tgt.kind = TargetKind::kNnKiller;
    r.allow(*t, "target", {"kind", "y0", "y1"});
    if (auto v = r.num(*t, "y0", "target")) tgt.y0 = *v;
    if (auto v = r.num(*t, "y1", "target")) tgt.y1 = *v;
  } else {
    r.fail("target.kind", "unknown target '" + *kind + "' (expected constant|simple|kappa|nn_killer)");
  }
}

json target_json(const TargetSpec& t) {
  switch (t.kind) {
    case TargetKind::kConstant: return json{{"kind", "constant"}, {"value", t.value}};
    case TargetKind::kSimple:
      return json{{"kind", "simple"}, {"cells", t.cells}, {"values", t.values}, {"default", t.default_value}};
    case TargetKind::kKappa:
      return json{{"kind", "kappa"}, {"kappa", t.kappa}, {"partition", t.partition}, {"y0", t.y0}, {"y1", t.y1}};
    case TargetKind::kNnKiller: return json{{"kind", "nn_killer"}, {"y0", t.y0}, {"y1", t.y1}};
  }
  return json::object();
}

void read_loss(Reader& r, const json& root, ExperimentConfig& cfg) {
  const json* l = r.object(root, "loss", "loss", false);
  if (!l) return;
  r.allow(*l, "loss", {"values", "kind", "labels"});
  if (auto v = r.str(*l, "values", "loss")) r.guard("loss.values", [&] { cfg.loss.values = parse_value_kind(*v); });
  if (auto v = r.str(*l, "kind", "loss")) r.guard("loss.kind", [&] { cfg.loss.kind = parse_loss_kind(*v); });
  if (auto v = r.uint(*l, "labels", "loss")) {
    if (*v < 2 || *v > 1'000'000) {
      r.fail("loss.labels", "must lie in [2, 1000000]");
    } else {
      cfg.loss.labels = static_cast<std::uint32_t>(*v);
    }
  }
  if (cfg.loss.values == ValueKind::kBinary) cfg.loss.labels = 2;
}

void read_learner(Reader& r, const json& root, ExperimentConfig& cfg) {
  const json* l = r.object(root, "learner", "learner", false);
  if (!l) return;
  r.allow(*l, "learner", {"rule", "fallback", "schedule", "class"});
  if (auto v = r.str(*l, "rule", "learner")) r.guard("learner.rule", [&] { cfg.learner.rule = parse_rule_kind(*v); });
  if (auto v = r.num(*l, "fallback", "learner")) cfg.learner.fallback = *v;
  if (const json* s = r.object(*l, "schedule", "learner.schedule", false)) {
    r.allow(*s, "learner.schedule", {"u", "gamma", "eps", "m_hat", "i_n", "k_n"});
    auto& sch = cfg.learner.schedule;
    read_int_schedule(r, *s, "u", "learner.schedule.u", sch.u);
    read_int_schedule(r, *s, "m_hat", "learner.schedule.m_hat", sch.m_hat);
    read_int_schedule(r, *s, "i_n", "learner.schedule.i_n", sch.i_n);
    read_int_schedule(r, *s, "k_n", "learner.schedule.k_n", sch.k_n);
    if (const json* g = r.object(*s, "gamma", "learner.schedule.gamma", false)) {
      r.allow(*g, "learner.schedule.gamma", {"scale", "ratio"});
      if (auto v = r.num(*g, "scale", "learner.schedule.gamma")) sch.gamma.scale = *v;
      if (auto v = r.num(*g, "ratio", "learner.schedule.gamma")) sch.gamma.ratio = *v;
    }
    if (const json* e = r.object(*s, "eps", "learner.schedule.eps", false)) {
      r.allow(*e, "learner.schedule.eps", {"scale", "power"});
      if (auto v = r.num(*e, "scale", "learner.schedule.eps")) sch.eps.scale = *v;
      if (auto v = r.num(*e, "power", "learner.schedule.eps")) sch.eps.power = *v;
    }
  }
  if (const json* c = r.object(*l, "class", "learner.class", false)) {
    r.allow(*c, "learner.class", {"growth", "cap", "value_grid"});
    if (auto v = r.uint(*c, "growth", "learner.class")) cfg.learner.cls.growth = *v;
    if (auto v = r.uint(*c, "cap", "learner.class")) cfg.learner.cls.cap = *v;
    if (auto v = r.str(*c, "value_grid", "learner.class")) {
      r.guard("learner.class.value_grid", [&] { cfg.learner.cls.value_grid = parse_value_grid(*v); });
    }
  }
}

void read_online(Reader& r, const json& root, ExperimentConfig& cfg) {
  const json* o = r.object(root, "online", "online", false);
  if (!o) return;
  r.allow(*o, "online", {"rule", "b", "i_max", "eps", "expert"});
  if (auto v = r.str(*o, "rule", "online")) r.guard("online.rule", [&] { cfg.online.rule = parse_online_rule(*v); });
  if (auto v = r.num(*o, "b", "online")) cfg.online.aggregate.b = *v;
  if (auto v = r.uint(*o, "i_max", "online")) cfg.online.aggregate.i_max = *v;
  if (auto v = r.num(*o, "eps", "online")) cfg.online.aggregate.eps = *v;
  if (auto v = r.str(*o, "expert", "online")) {
    r.guard("online.expert", [&] { cfg.online.aggregate.expert = parse_expert_kind(*v); });
  }
}

void read_caps(Reader& r, const json& root, ExperimentConfig& cfg) {
  const json* c = r.object(root, "caps", "caps", false);
  if (!c) return;
  r.allow(*c, "caps", {"max_steps", "class_size", "experts"});
  const Caps defaults;
  if (auto v = r.uint(*c, "max_steps", "caps")) cfg.caps.max_steps = *v;
  if (auto v = r.uint(*c, "class_size", "caps")) cfg.caps.class_size = *v;
  if (auto v = r.uint(*c, "experts", "caps")) cfg.caps.experts = *v;
  if (cfg.caps.max_steps > defaults.max_steps) cfg.warnings.push_back("caps.max_steps raised above 10^8");
  if (cfg.caps.class_size > defaults.class_size) cfg.warnings.push_back("caps.class_size raised above 4096");
  if (cfg.caps.experts > defaults.experts) cfg.warnings.push_back("caps.experts raised above 64");
}

void validate(Reader& r, ExperimentConfig& cfg) {
  if (cfg.train_sizes.empty()) r.fail("train_sizes", "must list at least one size");
  for (std::size_t i = 0; i < cfg.train_sizes.size(); ++i) {
    if (cfg.train_sizes[i] == 0) r.fail("train_sizes", "sizes must be positive");
    if (i > 0 && cfg.train_sizes[i] <= cfg.train_sizes[i - 1]) {
      r.fail("train_sizes", "must be strictly increasing");
      break;
    }
  }
  if (cfg.eval_horizon == 0) r.fail("eval_horizon", "must be at least 1");
  if (!(cfg.window > 0.0 && cfg.window <= 1.0)) r.fail("window", "must lie in (0,1]");
  if (cfg.learner.cls.cap > cfg.caps.class_size) {
    r.fail("learner.class.cap", "exceeds caps.class_size = " + std::to_string(cfg.caps.class_size));
  }
  if (cfg.online.aggregate.i_max > cfg.caps.experts) {
    r.fail("online.i_max", "exceeds caps.experts = " + std::to_string(cfg.caps.experts));
  }

  const LossSpace space = cfg.loss.space();
  const SpaceKind xs = cfg.process.params.space;
  auto check_value = [&](const std::string& path, Value v) {
    if (!space.contains(v)) r.fail(path, "value " + std::to_string(v) + " is not in " + space.to_string());
  };
  switch (cfg.target.kind) {
    case TargetKind::kConstant: check_value("target.value", cfg.target.value); break;
    case TargetKind::kSimple:
      for (auto v : cfg.target.values) check_value("target.values", v);
      check_value("target.default", cfg.target.default_value);
      if (cfg.target.cells.size() != cfg.target.values.size()) {
        r.fail("target.values", "need one value per cell");
      }
      break;
    case TargetKind::kKappa:
    case TargetKind::kNnKiller:
      check_value("target.y0", cfg.target.y0);
      check_value("target.y1", cfg.target.y1);
      break;
  }
  if (cfg.target.kind == TargetKind::kKappa && !(cfg.target.kappa >= 0.0 && cfg.target.kappa < 1.0)) {
    r.fail("target.kappa", "must lie in [0,1)");
  }
  if (r.errors.empty()) {
    r.guard("target", [&] {
      const auto target = build_target(cfg);
      if (target.space() != xs) {
        throw ConfigError("target.kind: target lives on " + to_string(target.space()) + " but the process on " +
                          to_string(xs));
      }
    });
  }
  check_value("learner.fallback", cfg.learner.fallback);
  r.guard("learner.class", [&] { build_class_schedule(cfg).validate(); });

  const bool online = cfg.protocol == Protocol::kOnline;
  const bool needs_class = online ? (cfg.online.rule == OnlineRuleKind::kAggregate &&
                                     cfg.online.aggregate.expert == ExpertKind::kWrapper)
                                  : (cfg.learner.rule != RuleKind::kNearestNeighbor &&
                                     cfg.learner.rule != RuleKind::kMemorize);
  const bool self_adaptive = online ? needs_class : cfg.learner.rule == RuleKind::kSelfAdaptive;
  if (needs_class) r.guard("learner.schedule", [&] { cfg.learner.schedule.validate(space, self_adaptive); });
  if (!online && cfg.learner.rule == RuleKind::kNearestNeighbor && xs != SpaceKind::kUnit) {
    r.fail("learner.rule", "nearest neighbour needs the unit-interval instance space");
  }
  if (online && cfg.online.rule == OnlineRuleKind::kAggregate) {
    if (!space.bounded()) r.fail("online.rule", "aggregation needs a bounded loss");
    if (!(cfg.online.aggregate.b > 0.0 && cfg.online.aggregate.b < 1.0)) r.fail("online.b", "must lie in (0,1)");
    if (cfg.online.aggregate.i_max == 0) r.fail("online.i_max", "must be positive");
    if (!(cfg.online.aggregate.eps >= 0.0)) r.fail("online.eps", "must be nonnegative");
  }
}

}  // namespace

std::string to_string(Protocol p) {
  switch (p) {
    case Protocol::kInductive: return "inductive";
    case Protocol::kSelfAdaptive: return "self_adaptive";
    case Protocol::kOnline: return "online";
  }
  return "?";
}

Protocol parse_protocol(const std::string& text) {
  for (auto p : {Protocol::kInductive, Protocol::kSelfAdaptive, Protocol::kOnline}) {
    if (text == to_string(p)) return p;
  }
  throw ConfigError("protocol: unknown protocol '" + text + "' (expected inductive|self_adaptive|online)");
}

std::string to_string(TargetKind kind) {
  switch (kind) {
    case TargetKind::kConstant: return "constant";
    case TargetKind::kSimple: return "simple";
    case TargetKind::kKappa: return "kappa";
    case TargetKind::kNnKiller: return "nn_killer";
  }
  return "?";
}

ExperimentConfig parse_config(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config: not valid JSON: ") + e.what());
  }
  if (!root.is_object()) throw ConfigError("config: top level must be a JSON object");
  Reader r;
  ExperimentConfig cfg;
  r.allow(root, "", {"protocol", "process", "target", "loss", "learner", "online", "train_sizes", "eval_horizon",
                     "window", "seeds", "caps", "timing", "output"});
  if (auto p = r.str(root, "protocol", "")) {
    r.guard("protocol", [&] { cfg.protocol = parse_protocol(*p); });
  } else if (!root.contains("protocol")) {
    r.fail("protocol", "required");
  }
  read_process(r, root, cfg);
  read_target(r, root, cfg);
  read_loss(r, root, cfg);
  read_learner(r, root, cfg);
  read_online(r, root, cfg);
  read_caps(r, root, cfg);
  if (!root.contains("train_sizes")) r.fail("train_sizes", "required");
  cfg.train_sizes = r.uint_list(root, "train_sizes", "");
  if (auto v = r.uint(root, "eval_horizon", "")) cfg.eval_horizon = *v;
  if (auto v = r.num(root, "window", "")) cfg.window = *v;
  if (root.contains("seeds")) {
    cfg.seeds = r.uint_list(root, "seeds", "");
    if (cfg.seeds.empty() && root["seeds"].is_array()) r.fail("seeds", "must list at least one seed");
  } else if (cfg.process.seed) {
    cfg.seeds = {*cfg.process.seed};
  } else {
    r.fail("seeds", "required (no implicit default seed); give seeds or process.seed");
  }
  if (auto v = r.boolean(root, "timing", "")) cfg.timing = *v;
  if (auto v = r.str(root, "output", "")) cfg.output = *v;
  if (r.errors.empty()) validate(r, cfg);
  if (!r.errors.empty()) throw ConfigError(std::move(r.errors));
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read config file " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string serialize_config(const ExperimentConfig& cfg) {
  const auto& sch = cfg.learner.schedule;
  json loss{{"values", to_string(cfg.loss.values)}, {"kind", to_string(cfg.loss.kind)}};
  if (cfg.loss.values == ValueKind::kFiniteLabel) loss["labels"] = cfg.loss.labels;
  json root{
      {"protocol", to_string(cfg.protocol)},
      {"process", process_json(cfg.process)},
      {"target", target_json(cfg.target)},
      {"loss", loss},
      {"learner",
       {{"rule", to_string(cfg.learner.rule)},
        {"fallback", cfg.learner.fallback},
        {"schedule",
         {{"u", int_schedule_json(sch.u)},
          {"gamma", {{"scale", sch.gamma.scale}, {"ratio", sch.gamma.ratio}}},
          {"eps", {{"scale", sch.eps.scale}, {"power", sch.eps.power}}},
          {"m_hat", int_schedule_json(sch.m_hat)},
          {"i_n", int_schedule_json(sch.i_n)},
          {"k_n", int_schedule_json(sch.k_n)}}},
        {"class",
         {{"growth", cfg.learner.cls.growth},
          {"cap", cfg.learner.cls.cap},
          {"value_grid", to_string(cfg.learner.cls.value_grid)}}}}},
      {"online",
       {{"rule", to_string(cfg.online.rule)},
        {"b", cfg.online.aggregate.b},
        {"i_max", cfg.online.aggregate.i_max},
        {"eps", cfg.online.aggregate.eps},
        {"expert", to_string(cfg.online.aggregate.expert)}}},
      {"train_sizes", cfg.train_sizes},
      {"eval_horizon", cfg.eval_horizon},
      {"window", cfg.window},
      {"seeds", cfg.seeds},
      {"caps",
       {{"max_steps", cfg.caps.max_steps}, {"class_size", cfg.caps.class_size}, {"experts", cfg.caps.experts}}},
      {"timing", cfg.timing},
      {"output", cfg.output},
  };
  return root.dump(2);
}

std::string config_digest(const ExperimentConfig& cfg) {
  const std::string text = serialize_config(cfg);
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

TargetFunction build_target(const ExperimentConfig& cfg) {
  const auto& t = cfg.target;
  switch (t.kind) {
    case TargetKind::kConstant: return TargetFunction::constant(cfg.process.params.space, t.value);
    case TargetKind::kSimple: {
      std::vector<MeasurableSet> cells;
      for (const auto& c : t.cells) cells.push_back(MeasurableSet::parse(c));
      if (cells.empty()) return TargetFunction::constant(cfg.process.params.space, t.default_value);
      return TargetFunction::simple(SimpleFunction(std::move(cells), t.values, t.default_value));
    }
    case TargetKind::kKappa:
      return TargetFunction::kappa(t.kappa, KappaPartition::parse(t.partition), t.y0, t.y1);
    case TargetKind::kNnKiller: return TargetFunction::nn_killer(t.y0, t.y1);
  }
  throw ConfigError("target.kind: unsupported");
}

ClassSchedule build_class_schedule(const ExperimentConfig& cfg) {
  ClassSchedule s;
  s.space = cfg.process.params.space;
  s.values = cfg.loss.space();
  s.grid = cfg.learner.cls.value_grid;
  s.growth = cfg.learner.cls.growth;
  s.cap = cfg.learner.cls.cap;
  return s;
}

ProcessStream build_process(const ExperimentConfig& cfg, std::uint64_t seed) {
  return make_process(cfg.process.kind, cfg.process.params, seed);
}

}  // namespace ulab
