#include "cli.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

namespace gabac::cli {
namespace {

using ordered_json = nlohmann::ordered_json;

struct CommonOptions {
  std::string model_path;
  std::string algorithm = "deny-overrides";
  std::optional<int> depth;
};

std::string shown_name(std::string_view name) {
  return is_bare_name(name) ? std::string(name) : "\"" + std::string(name) + "\"";
}

std::string describe_expr(const Graph& graph, const ConditionExpr& expr) {
  switch (expr.kind()) {
    case ConditionExpr::Kind::Ref:
      return shown_name(graph.node_name(expr.node()));
    case ConditionExpr::Kind::Not:
      return "not " + describe_expr(graph, expr.children().front());
    default: {
      const char* op = expr.kind() == ConditionExpr::Kind::And ? " and " : " or ";
      std::string out = "(";
      for (std::size_t i = 0; i < expr.children().size(); ++i)
        out += (i ? op : "") + describe_expr(graph, expr.children()[i]);
      return out + ")";
    }
  }
}

std::string join_names(const std::vector<PolicyMatch>& matches) {
  if (matches.empty()) return "(none)";
  std::string out;
  for (const auto& m : matches) out += (out.empty() ? "" : ", ") + m.name;
  return out;
}

CombiningAlgorithm algorithm_or_throw(std::string_view name) {
  auto alg = parse_algorithm(name);
  if (!alg) throw Error(Errc::UnsupportedAlgorithm, "unknown algorithm '" + std::string(name) + "'");
  return *alg;
}

std::optional<Model> load_or_report(const CommonOptions& opts, std::ostream& err) {
  LoadResult loaded = load_model_file(opts.model_path, LoadOptions{opts.depth});
  if (!loaded.ok()) {
    for (const auto& d : loaded.errors) err << opts.model_path << ":" << d.to_string() << "\n";
    return std::nullopt;
  }
  return std::move(loaded.model);
}

int cmd_check(const CommonOptions& opts, const std::vector<std::string>& query, bool explain,
              std::ostream& out, std::ostream& err) {
  try {
    const CombiningAlgorithm alg = algorithm_or_throw(opts.algorithm);
    auto model = load_or_report(opts, err);
    if (!model) return kExitError;
    const AccessQuery q = resolve_query(model->graph(), query[0], query[1], query[2]);
    const EvaluationResult result = evaluate(*model, q, alg);
    if (explain) out << explain_report(*model, q, result);
    else out << to_string(result.decision) << "\n";
    return result.decision == Decision::Permit ? kExitPermit : kExitDeny;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  }
}

int cmd_validate(const CommonOptions& opts, std::ostream& out, std::ostream& err) {
  std::ifstream in(opts.model_path, std::ios::binary);
  if (!in) {
    err << "error: cannot open '" << opts.model_path << "'\n";
    return kExitError;
  }
  std::stringstream buffer;
  buffer << in.rdbuf();
  ParseResult parsed = parse_document(buffer.str());
  if (!parsed.ok()) {
    for (const auto& d : parsed.errors) err << opts.model_path << ":" << d.to_string() << "\n";
    return kExitError;
  }

  LoadResult loaded = load_model(parsed.document);
  bool structural_error = false;
  for (const auto& d : loaded.errors) {
    if (d.code == Errc::MissingConditionType || d.code == Errc::DanglingConditionRef) continue;
    structural_error = true;
    err << opts.model_path << ":" << d.to_string() << "\n";
  }
  if (structural_error) return kExitError;

  std::size_t invalid = 0;
  const auto reports = validate_policy_declarations(parsed.document);
  for (const auto& entry : reports) {
    out << entry.name << ": ";
    if (entry.report.valid) {
      out << "valid\n";
      continue;
    }
    ++invalid;
    out << "invalid (line " << entry.pos.line;
    if (!entry.report.missing_types.empty()) {
      out << "; missing";
      for (ConditionType t : entry.report.missing_types) out << " " << relationship_name(t);
    }
    if (!entry.report.dangling_refs.empty()) {
      out << "; dangling";
      for (const auto& name : entry.report.dangling_refs) out << " " << shown_name(name);
    }
    out << ")\n";
  }

  if (invalid > 0) {
    out << invalid << " of " << reports.size() << " policies invalid\n";
    return 1;
  }
  out << reports.size() << " policies valid; attribute depth "
      << loaded.model->graph().computed_attr_depth() << "\n";
  return 0;
}

int cmd_export(const CommonOptions& opts, const std::string& what, std::ostream& out,
               std::ostream& err) {
  try {
    if (what == "query") {
      const CombiningAlgorithm alg = algorithm_or_throw(opts.algorithm);
      int depth = 0;
      if (opts.depth) {
        depth = *opts.depth;
      } else {
        auto model = load_or_report(opts, err);
        if (!model) return kExitError;
        depth = model->attr_depth();
      }
      out << emit_cypher_decision_query(alg, depth);
      return 0;
    }
    std::ifstream in(opts.model_path, std::ios::binary);
    if (!in) throw Error(Errc::IoError, "cannot open '" + opts.model_path + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    ParseResult parsed = parse_model(buffer.str());
    if (!parsed.ok()) {
      for (const auto& d : parsed.errors) err << opts.model_path << ":" << d.to_string() << "\n";
      return kExitError;
    }
    out << (what == "data" ? emit_cypher_data(parsed.document)
                           : emit_cypher_policies(parsed.document));
    return 0;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  }
}

int cmd_serve(const CommonOptions& opts, std::istream& in, std::ostream& out, std::ostream& err) {
  try {
    const CombiningAlgorithm alg = algorithm_or_throw(opts.algorithm);
    auto model = load_or_report(opts, err);
    if (!model) return kExitError;
    serve(*model, alg, in, out);
    return 0;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  }
}

ordered_json response(const std::string& id, Decision decision,
                      const std::vector<std::string>& matching,
                      const std::optional<std::string>& error) {
  ordered_json r;
  r["id"] = id;
  r["decision"] = std::string(to_string(decision));
  r["matching"] = matching;
  r["error"] = error ? ordered_json(*error) : ordered_json(nullptr);
  return r;
}

}  // namespace

std::string handle_request_line(const Model& model, std::string_view line,
                                CombiningAlgorithm default_algorithm) {
  std::string id;
  auto fail = [&](const std::string& message) {
    return response(id, Decision::Deny, {}, message)
        .dump(-1, ' ', false, nlohmann::json::error_handler_t::replace);
  };
  try {
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    const auto request = nlohmann::json::parse(line, nullptr, false);
    if (request.is_discarded()) return fail("parse error: request is not valid JSON");
    if (!request.is_object()) return fail("parse error: request must be a JSON object");

    if (auto it = request.find("id"); it != request.end() && it->is_string())
      id = it->get<std::string>();
    if (id.empty()) return fail("request field 'id' must be a non-empty string");

    auto text_field = [&](const char* key) -> std::optional<std::string> {
      auto it = request.find(key);
      if (it == request.end() || !it->is_string()) return std::nullopt;
      return it->get<std::string>();
    };
    const auto subject = text_field("subject");
    const auto action = text_field("action");
    const auto object = text_field("object");
    if (!subject || !action || !object)
      return fail("request fields 'subject', 'action' and 'object' must be strings");

    CombiningAlgorithm alg = default_algorithm;
    if (auto it = request.find("algorithm"); it != request.end() && !it->is_null()) {
      if (!it->is_string()) return fail("request field 'algorithm' must be a string");
      alg = algorithm_or_throw(it->get<std::string>());
    }

    const AccessQuery q = resolve_query(model.graph(), *subject, *action, *object);
    const EvaluationResult result = evaluate(model, q, alg);
    std::vector<std::string> names;
    for (const auto& m : result.matches) names.push_back(m.name);
    return response(id, result.decision, names, std::nullopt)
        .dump(-1, ' ', false, nlohmann::json::error_handler_t::replace);
  } catch (const std::exception& e) {
    return fail(e.what());
  }
}

void serve(const Model& model, CombiningAlgorithm default_algorithm, std::istream& in,
           std::ostream& out) {
  std::string line;
  while (std::getline(in, line)) {
    out << handle_request_line(model, line, default_algorithm) << '\n';
    out.flush();
  }
}

std::string explain_report(const Model& model, const AccessQuery& query,
                           const EvaluationResult& result) {
  const Graph& graph = model.graph();
  std::ostringstream out;
  out << "query: subject=" << shown_name(graph.node(query.subject).name)
      << " action=" << shown_name(graph.node(query.action).name)
      << " object=" << shown_name(graph.node(query.object).name) << "\n";
  out << "algorithm: " << to_string(result.algorithm) << "\n";
  out << "attribute depth: " << model.attr_depth() << "\n";

  if (result.matches.empty()) {
    out << "no matching policies; default Deny\n";
    out << "decision: " << to_string(result.decision) << "\n";
    return out.str();
  }

  out << "matching policies: " << result.matches.size() << "\n";
  for (const PolicyMatch& m : result.matches) {
    const Policy& policy = model.policies().policy(m.policy);
    out << "  " << m.name << " (" << to_string(m.decision) << ", score " << m.score << ")\n";
    for (ConditionType t : kConditionTypes) {
      const AttributeClosure closure =
          graph.attribute_closure(query.primitive(t), model.attr_depth());
      out << "    " << slot_keyword(t) << " length " << m.length(t) << ":";
      bool first = true;
      for (const auto& expr : policy.conditions[t]) {
        out << (first ? " " : ", ") << describe_expr(graph, expr);
        if (expr.is_ref()) {
          const int hops = closure.at(expr.node());
          out << " (" << hops << (hops == 1 ? " hop)" : " hops)");
        }
        first = false;
      }
      out << "\n";
    }
    out << "    total length " << m.total_len << "\n";
  }

  switch (result.algorithm) {
    case CombiningAlgorithm::MaxScoreDenyOverrides:
      out << "restricted to maximal score " << result.considered.front().score << ": "
          << join_names(result.considered) << "\n";
      break;
    case CombiningAlgorithm::ShortestPathDenyOverrides:
      out << "restricted to minimal total length " << result.considered.front().total_len << ": "
          << join_names(result.considered) << "\n";
      break;
    default:
      out << "considered: " << join_names(result.considered) << "\n";
      break;
  }
  out << "deciding: " << join_names(result.deciding_policies) << "\n";
  out << "decision: " << to_string(result.decision) << "\n";
  return out.str();
}

int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Graph-based attribute access control decision engine", "gabac"};
  app.require_subcommand(1);

  CommonOptions opts;
  std::vector<std::string> query;
  std::string what = "data";

  auto add_algorithm = [&](CLI::App* cmd) {
    cmd->add_option("--algorithm", opts.algorithm,
                    "deny-overrides, permit-overrides, first-applicable, "
                    "max-score-deny-overrides or shortest-path-deny-overrides");
  };
  auto add_depth = [&](CLI::App* cmd) {
    cmd->add_option("--depth", opts.depth, "attribute depth override")->check(CLI::NonNegativeNumber);
  };

  auto* check = app.add_subcommand("check", "print Permit or Deny for one access query");
  auto* explain = app.add_subcommand("explain", "show matching policies and how the decision was reached");
  for (auto* cmd : {check, explain}) {
    cmd->add_option("model", opts.model_path, "model file (.abac)")->required();
    cmd->add_option("query", query, "subject action object")->required()->expected(3);
    add_algorithm(cmd);
    add_depth(cmd);
  }

  auto* validate = app.add_subcommand("validate", "check a model file and report policy validity");
  validate->add_option("model", opts.model_path, "model file (.abac)")->required();

  auto* export_cmd = app.add_subcommand("export-cypher", "print Neo4j Cypher for a model");
  export_cmd->add_option("model", opts.model_path, "model file (.abac)")->required();
  export_cmd->add_option("--what", what, "data, policies or query")
      ->check(CLI::IsMember({"data", "policies", "query"}));
  add_algorithm(export_cmd);
  add_depth(export_cmd);

  auto* serve_cmd = app.add_subcommand("serve", "answer JSON-lines requests on standard input");
  serve_cmd->add_option("model", opts.model_path, "model file (.abac)")->required();
  add_algorithm(serve_cmd);
  add_depth(serve_cmd);

  std::vector<std::string> argv_tail(args.begin() + (args.empty() ? 0 : 1), args.end());
  std::reverse(argv_tail.begin(), argv_tail.end());
  try {
    app.parse(argv_tail);
  } catch (const CLI::Success& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitError;
  }

  if (check->parsed()) return cmd_check(opts, query, false, out, err);
  if (explain->parsed()) return cmd_check(opts, query, true, out, err);
  if (validate->parsed()) return cmd_validate(opts, out, err);
  if (export_cmd->parsed()) return cmd_export(opts, what, out, err);
  if (serve_cmd->parsed()) return cmd_serve(opts, in, out, err);
  return kExitError;
}

}  // namespace gabac::cli
