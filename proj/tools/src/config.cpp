#include <algorithm>
#include <array>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "mixbound/cli.hpp"
#include "schema.hpp"

namespace mixbound::cli {

namespace {

using nlohmann::json;

struct CommandName {
  Command command;
  std::string_view id;
  std::string_view first;
  std::string_view second;
};

constexpr std::array<CommandName, 9> kCommands{{
    {Command::w1, "w1", "w1", ""},
    {Command::l1, "l1", "l1", ""},
    {Command::bounds_verify, "bounds_verify", "bounds", "verify"},
    {Command::bounds_fuzz, "bounds_fuzz", "bounds", "fuzz"},
    {Command::pde_check, "pde_check", "pde", "check"},
    {Command::dual_witness_demo, "dual_witness_demo", "dual-witness", "demo"},
    {Command::posterior_run, "posterior_run", "posterior", "run"},
    {Command::posterior_rates, "posterior_rates", "posterior", "rates"},
    {Command::kernels_probe, "kernels_probe", "kernels", "probe"},
}};

Command command_from_id(std::string_view id) {
  for (const auto& c : kCommands)
    if (c.id == id) return c.command;
  throw CliError(exit_code::unknown_command, "unknown command '" + std::string(id) + "'");
}

const std::vector<ParamSpec> kSpaceParams{
    {"dim", ParamType::count, false, 1},
    {"R", ParamType::positive, false, 1.0},
    {"lambda_min", ParamType::positive, false, 0.5},
    {"lambda_max", ParamType::positive, false, 2.0},
    {"a", ParamType::positive, false, 1.0},
};

bool type_matches(const json& v, ParamType t) {
  switch (t) {
    case ParamType::count: return v.is_number_unsigned() || (v.is_number_integer() && v.get<std::int64_t>() >= 0);
    case ParamType::positive: return v.is_number() && v.get<double>() > 0.0;
    case ParamType::number: return v.is_number();
    case ParamType::text: return v.is_string();
    case ParamType::flag: return v.is_boolean();
    case ParamType::count_list:
      return v.is_array() && !v.empty() &&
             std::all_of(v.begin(), v.end(), [](const json& e) { return type_matches(e, ParamType::count); });
    case ParamType::kernel:
      return v.is_string() && (v == "gaussian" || v == "gaussian-iso" || v == "cauchy" || v == "laplace");
    case ParamType::object: return v.is_object();
  }
  return false;
}

std::string_view type_name(ParamType t) {
  switch (t) {
    case ParamType::count: return "a nonnegative integer";
    case ParamType::positive: return "a positive number";
    case ParamType::number: return "a number";
    case ParamType::text: return "a string";
    case ParamType::flag: return "a boolean";
    case ParamType::count_list: return "a nonempty list of nonnegative integers";
    case ParamType::kernel: return "one of gaussian, gaussian-iso, cauchy, laplace";
    case ParamType::object: return "an object";
  }
  return "";
}

std::string flag_name(std::string name) {
  std::replace(name.begin(), name.end(), '_', '-');
  return name;
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CliError(exit_code::unreadable_file, "cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw CliError(exit_code::unreadable_file, "cannot parse '" + path + "': " + e.what());
  }
}

json flag_value(const std::string& text, ParamType t) {
  auto as_json = [&](const std::string& s) -> json {
    try {
      return json::parse(s);
    } catch (const json::exception&) {
      return s;
    }
  };
  if (t == ParamType::text || t == ParamType::kernel) return text;
  if (t == ParamType::count_list) {
    json list = json::array();
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) list.push_back(as_json(item));
    return list;
  }
  return as_json(text);
}

}  // namespace

std::string_view to_string(Command c) noexcept {
  for (const auto& n : kCommands)
    if (n.command == c) return n.id;
  return "";
}

std::vector<ParamSpec> schema_for(Command c) {
  std::vector<ParamSpec> s = kSpaceParams;
  auto add = [&](std::initializer_list<ParamSpec> more) { s.insert(s.end(), more); };
  switch (c) {
    case Command::w1:
      add({{"p", ParamType::text, true, nullptr}, {"q", ParamType::text, true, nullptr},
           {"plan", ParamType::flag, false, false}});
      break;
    case Command::l1:
      add({{"p", ParamType::text, true, nullptr}, {"q", ParamType::text, true, nullptr},
           {"kernel", ParamType::kernel, true, nullptr}, {"budget", ParamType::count, false, 20000},
           {"method", ParamType::text, false, "automatic"}});
      break;
    case Command::bounds_verify:
      add({{"p", ParamType::text, true, nullptr}, {"q", ParamType::text, true, nullptr},
           {"kernel", ParamType::kernel, true, nullptr}, {"budget", ParamType::count, false, 20000},
           {"regime", ParamType::text, false, "kernel_specific"}});
      break;
    case Command::bounds_fuzz:
      add({{"kernel", ParamType::kernel, true, nullptr}, {"trials", ParamType::count, false, 200},
           {"atoms", ParamType::count, false, 3}, {"budget", ParamType::count, false, 20000}});
      break;
    case Command::pde_check:
      add({{"mixture", ParamType::text, false, ""}, {"atoms", ParamType::count, false, 3},
           {"budget", ParamType::count, false, 200000}});
      break;
    case Command::dual_witness_demo:
      add({{"lambda", ParamType::positive, false, 10.0}, {"atoms", ParamType::count, false, 3},
           {"points", ParamType::count, false, 101}});
      break;
    case Command::posterior_run:
    case Command::posterior_rates:
      add({{"kernel", ParamType::kernel, true, nullptr},
           {"n_grid", ParamType::count_list, false, json::array({100, 400, 1600})},
           {"replicates", ParamType::count, false, 5},
           {"iters", ParamType::count, false, 3000},
           {"burn_in", ParamType::count, false, 1000},
           {"thin", ParamType::count, false, 1},
           {"l1_budget", ParamType::count, false, 20000},
           {"truth", ParamType::object, false, nullptr}});
      if (c == Command::posterior_rates) add({{"table", ParamType::text, false, ""}});
      break;
    case Command::kernels_probe:
      add({{"kernel", ParamType::kernel, true, nullptr}, {"scale", ParamType::positive, false, 1.0},
           {"xi_max", ParamType::positive, false, 10.0}, {"points", ParamType::count, false, 21}});
      break;
  }
  return s;
}

json serialize(const RunConfig& cfg) {
  return json{{"command", std::string(to_string(cfg.command))},
              {"seed", cfg.seed},
              {"output_path", cfg.output_path},
              {"parameters", cfg.parameters}};
}

RunConfig parse_config(const json& j, Command command) {
  if (!j.is_object()) throw CliError(exit_code::schema, "configuration must be a JSON object");
  RunConfig cfg;
  cfg.command = command;
  json params = json::object();
  if (j.contains("parameters")) {
    if (!j.at("parameters").is_object()) throw CliError(exit_code::schema, "\"parameters\" must be an object");
    params = j.at("parameters");
    for (const auto& [key, value] : j.items())
      if (key != "parameters" && key != "command" && key != "seed" && key != "output_path")
        throw CliError(exit_code::schema, "unknown top-level key '" + key + "'");
  } else {
    for (const auto& [key, value] : j.items())
      if (key != "command" && key != "seed" && key != "output_path") params[key] = value;
  }
  if (j.contains("seed")) {
    if (!type_matches(j.at("seed"), ParamType::count)) throw CliError(exit_code::schema, "seed must be a nonnegative integer");
    cfg.seed = j.at("seed").get<std::uint64_t>();
  }
  if (j.contains("output_path")) {
    if (!j.at("output_path").is_string()) throw CliError(exit_code::schema, "output_path must be a string");
    cfg.output_path = j.at("output_path").get<std::string>();
  }

  const auto schema = schema_for(command);
  for (const auto& [key, value] : params.items()) {
    const auto it = std::find_if(schema.begin(), schema.end(), [&](const ParamSpec& p) { return p.name == key; });
    if (it == schema.end())
      throw CliError(exit_code::schema, "unknown parameter '" + key + "' for " + std::string(to_string(command)));
    if (!type_matches(value, it->type))
      throw CliError(exit_code::schema, "parameter '" + key + "' must be " + std::string(type_name(it->type)));
  }
  for (const auto& p : schema) {
    if (params.contains(p.name)) continue;
    if (p.required) throw CliError(exit_code::schema, "missing required parameter '" + p.name + "'");
    if (!p.fallback.is_null()) params[p.name] = p.fallback;
  }
  cfg.parameters = std::move(params);
  return cfg;
}

RunConfig parse_config(const json& j) {
  if (!j.is_object() || !j.contains("command") || !j.at("command").is_string())
    throw CliError(exit_code::unknown_command, "configuration names no command");
  return parse_config(j, command_from_id(j.at("command").get<std::string>()));
}

RunConfig parse_args(const std::vector<std::string>& args) {
  std::size_t pos = 0;
  std::optional<Command> command;
  if (pos < args.size() && !args[pos].starts_with("-")) {
    const std::string& first = args[pos];
    for (const auto& c : kCommands) {
      if (c.id == first || (c.second.empty() && c.first == first)) {
        command = c.command;
        ++pos;
        break;
      }
      if (c.first == first && pos + 1 < args.size() && c.second == args[pos + 1]) {
        command = c.command;
        pos += 2;
        break;
      }
    }
    if (!command) {
      std::string words = first;
      if (pos + 1 < args.size() && !args[pos + 1].starts_with("-")) words += " " + args[pos + 1];
      throw CliError(exit_code::unknown_command, "unknown command '" + words + "'");
    }
  }

  CLI::App app{"mixbound"};
  app.allow_windows_style_options(false);
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> output;
  std::vector<std::string> positional;
  std::vector<std::string> sets;
  app.add_option("--config", config_path);
  app.add_option("--seed", seed);
  app.add_option("--output,-o", output);
  app.add_option("--set", sets);
  app.add_option("files", positional);

  std::vector<ParamSpec> all;
  for (const auto& c : kCommands)
    for (const auto& p : schema_for(c.command))
      if (std::none_of(all.begin(), all.end(), [&](const ParamSpec& q) { return q.name == p.name; })) all.push_back(p);
  std::map<std::string, std::string> flags;
  std::map<std::string, bool> switches;
  for (const auto& p : all) {
    if (p.type == ParamType::flag)
      app.add_flag("--" + flag_name(p.name), switches[p.name]);
    else
      app.add_option("--" + flag_name(p.name), flags[p.name]);
  }

  std::vector<std::string> rest(args.begin() + static_cast<std::ptrdiff_t>(pos), args.end());
  std::reverse(rest.begin(), rest.end());
  try {
    app.parse(rest);
  } catch (const CLI::ParseError& e) {
    throw CliError(exit_code::schema, e.what());
  }

  json base = json::object();
  if (!config_path.empty()) base = read_json_file(config_path);
  if (!base.is_object()) throw CliError(exit_code::schema, "configuration must be a JSON object");
  if (!command) {
    if (!base.contains("command") || !base.at("command").is_string())
      throw CliError(exit_code::unknown_command, "no command given");
    command = command_from_id(base.at("command").get<std::string>());
  } else if (base.contains("command") && base.at("command") != std::string(to_string(*command))) {
    throw CliError(exit_code::schema, "configuration file is for a different command");
  }
  if (!base.contains("parameters")) {
    json wrapped = json::object();
    json params = json::object();
    for (const auto& [key, value] : base.items()) {
      if (key == "command" || key == "seed" || key == "output_path")
        wrapped[key] = value;
      else
        params[key] = value;
    }
    wrapped["parameters"] = params;
    base = wrapped;
  }
  json& params = base["parameters"];

  const auto schema = schema_for(*command);
  auto spec_of = [&](const std::string& name) -> const ParamSpec* {
    for (const auto& p : all)
      if (p.name == name) return &p;
    return nullptr;
  };
  for (const auto& [name, text] : flags)
    if (app.count("--" + flag_name(name)) > 0) params[name] = flag_value(text, spec_of(name)->type);
  for (const auto& [name, on] : switches)
    if (on) params[name] = true;
  for (const auto& s : sets) {
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw CliError(exit_code::schema, "--set expects key=value");
    const std::string key = s.substr(0, eq);
    const ParamSpec* spec = spec_of(key);
    params[key] = flag_value(s.substr(eq + 1), spec ? spec->type : ParamType::number);
  }
  if (!positional.empty()) {
    const bool takes_pair = std::any_of(schema.begin(), schema.end(), [](const ParamSpec& p) { return p.name == "p"; });
    if (!takes_pair || positional.size() != 2)
      throw CliError(exit_code::schema, "unexpected positional arguments");
    params["p"] = positional[0];
    params["q"] = positional[1];
  }
  if (seed) base["seed"] = *seed;
  if (output) base["output_path"] = *output;
  return parse_config(base, *command);
}

}  // namespace mixbound::cli
