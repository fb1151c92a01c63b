#include "opm/cli.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <ostream>
#include <sstream>

#include "opm/axioms.hpp"
#include "opm/entropy.hpp"
#include "opm/model_io.hpp"
#include "opm/rational.hpp"
#include "opm/zoo.hpp"

namespace opm {

namespace {

constexpr int kSchemaVersion = 1;

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

Model load_model(const std::string& source, const Tolerances& tol) {
  if (std::filesystem::is_regular_file(source)) return validate_model(read_model_file(source), tol);
  if (source == "square-bit" || source.find(':') != std::string::npos) return zoo::by_name(source);
  throw Error(ErrorCode::IoError, "no model file or zoo model named '" + source + "'");
}

std::vector<double> parse_vector(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) throw Error(ErrorCode::InvalidArgument, "empty vector entry in '" + text + "'");
    out.push_back(parse_rational(item).get_d());
  }
  return out;
}

// "x0=1,y0=1/2"; outcomes left out are filled in from test normalization.
StateVec parse_state(const Model& model, const std::string& text, const Tolerances& tol) {
  const auto& space = model.space;
  std::vector<std::optional<double>> v(space.size());
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    auto eq = item.find('=');
    if (eq == std::string::npos) throw Error(ErrorCode::InvalidArgument, "expected outcome=value, got '" + item + "'");
    v[space.index(item.substr(0, eq))] = parse_rational(item.substr(eq + 1)).get_d();
  }
  for (bool changed = true; changed;) {
    changed = false;
    for (const auto& t : space.tests()) {
      int open = -1;
      int count = 0;
      double sum = 0;
      for (Outcome x : t) {
        if (v[x]) sum += *v[x];
        else {
          open = x;
          ++count;
        }
      }
      if (count == 1) {
        v[open] = 1 - sum;
        changed = true;
      }
    }
  }
  StateVec a(static_cast<Eigen::Index>(space.size()));
  for (size_t x = 0; x < space.size(); ++x) {
    if (!v[x]) {
      throw Error(ErrorCode::InvalidArgument, "state leaves an outcome undetermined",
                  Json{{"outcome", space.name(static_cast<Outcome>(x))}});
    }
    a(static_cast<Eigen::Index>(x)) = *v[x];
    if (*v[x] < -tol.sum || *v[x] > 1 + tol.sum) {
      throw Error(ErrorCode::StateSumViolation, "state value outside [0, 1]",
                  Json{{"outcome", space.name(static_cast<Outcome>(x))}, {"value", *v[x]}});
    }
  }
  double defect = normalization_defect(space, a);
  if (defect > tol.sum) throw Error(ErrorCode::StateSumViolation, "state is not normalized", Json{{"defect", defect}});
  return a;
}

Vec as_vec(const std::vector<double>& v, int dim, const char* label) {
  if (static_cast<int>(v.size()) != dim) {
    throw Error(ErrorCode::BadDimension, std::string(label) + " has the wrong dimension",
                Json{{"expected", dim}, {"found", v.size()}});
  }
  return Eigen::Map<const Vec>(v.data(), dim);
}

Json state_json(const TestSpace& space, const StateVec& a) {
  Json j = Json::object();
  for (size_t x = 0; x < space.size(); ++x) j[space.name(static_cast<Outcome>(x))] = a(static_cast<Eigen::Index>(x));
  return j;
}

struct Outcome_ {
  Json result;
  int code = 0;
  std::string text;
};

Outcome_ cmd_validate(const std::string& source, const Tolerances& tol) {
  Model m = load_model(source, tol);
  Json r{{"valid", true},
         {"kind", to_string(m.kind)},
         {"outcomes", m.space.outcomes()},
         {"tests", m.space.tests().size()},
         {"pure_states", m.pure_states.size()}};
  if (m.group && m.group->kind == GroupAction::Kind::finite) r["group_order"] = m.group->order();
  return {r, 0, "valid " + to_string(m.kind) + " model: " + std::to_string(m.space.size()) + " outcomes, " +
                    std::to_string(m.space.tests().size()) + " tests\n"};
}

Outcome_ cmd_verify(const std::string& source, const AxiomOptions& opts, const Tolerances& tol) {
  Model m = load_model(source, tol);
  AxiomReport report = verify_axioms(m, opts, tol);
  std::string text;
  for (const auto& s : report.stages) {
    text += s.name + ": " + s.status;
    if (s.status != "holds") {
      if (s.evidence.contains("reason")) text += " (" + s.evidence["reason"].get<std::string>() + ")";
      else if (s.evidence.contains("message")) text += " (" + s.evidence["message"].get<std::string>() + ")";
    }
    text += "\n";
  }
  text += std::string("certificate: ") + (report.certificate ? "present" : "absent") + "\n";
  return {report.to_json(), report.all_hold() ? 0 : 1, text};
}

Outcome_ cmd_entropy(const std::string& source, const std::string& state, const Tolerances& tol) {
  Model m = load_model(source, tol);
  LinearRep rep = build_linear_rep(m, tol);
  StateVec a = parse_state(m, state, tol);
  EntropyReport r = entropy_report(m, rep, a, tol);
  Json j = r.to_json(m.space);
  j["state"] = state_json(m.space, a);
  std::string text = "H = " + num(r.h.value) + " bits, S = " + num(r.s.value) + " bits (" + r.s.bound +
                     "), monoentropic = " + (r.monoentropic ? "true" : "false") + "\n";
  return {j, 0, text};
}

Outcome_ cmd_embed(const std::string& source, const std::string& which, const Tolerances& tol) {
  Model m = load_model(source, tol);
  LinearRep rep = build_linear_rep(m, tol);
  InnerProduct ip;
  Json candidates;
  if (which == "canonical") {
    ip = canonical_inner_product(m, rep, tol);
  } else if (which == "standard") {
    ip = standard_inner_product(m, rep, tol);
  } else if (which == "working") {
    WorkingInnerProduct w = working_inner_product(m, rep, tol);
    if (!w.found) throw Error(ErrorCode::NotMinimizing, "no candidate inner product works", w.candidates);
    ip = w.ip;
    candidates = w.candidates;
  } else {
    throw Error(ErrorCode::InvalidArgument, "unknown inner product '" + which + "'");
  }
  EmbeddingResult emb = embed_outcomes(m, rep, ip, tol);
  EmbeddingChecks checks = check_embedding(m, rep, ip, emb);
  MinimizingReport mini = is_minimizing(m, rep, ip, emb, tol);
  Json table = Json::object();
  std::string text = "inner product: " + ip.origin + "\nm = " + num(emb.m) + ", c = " + num(emb.c) +
                     ", s = " + num(emb.s) + ", r = " + num(emb.r) + ", scale = " + num(emb.scale) + "\n";
  text += std::string("minimizing: ") + (mini.minimizing ? "true" : "false") + "\n<v_x, v_y>:\n";
  for (size_t x = 0; x < m.space.size(); ++x) {
    Json row = Json::object();
    text += "  " + m.space.name(static_cast<Outcome>(x)) + ":";
    for (size_t y = 0; y < m.space.size(); ++y) {
      double v = ip(emb.v[x], emb.v[y]);
      if (std::fabs(v) < tol.zero) v = 0;
      row[m.space.name(static_cast<Outcome>(y))] = v;
      text += " " + num(v);
    }
    table[m.space.name(static_cast<Outcome>(x))] = row;
    text += "\n";
  }
  Json j{{"inner_product", ip.to_json()},
         {"constants", emb.to_json(m.space)},
         {"checks", checks.to_json()},
         {"minimizing", mini.to_json()},
         {"gram_of_embedded_vectors", table}};
  if (mini.minimizing) j["in_cone"] = vectors_in_cone(m, rep, emb, tol).to_json();
  if (!candidates.is_null()) j["candidates"] = candidates;
  return {j, 0, text};
}

Outcome_ cmd_homogeneity(const std::string& source, const std::string& a_text, const std::string& b_text,
                         const Tolerances& tol) {
  Model m = load_model(source, tol);
  LinearRep rep = build_linear_rep(m, tol);
  Vec a = as_vec(parse_vector(a_text), rep.dim, "a");
  Vec b = as_vec(parse_vector(b_text), rep.dim, "b");
  WorkingInnerProduct w = working_inner_product(m, rep, tol);
  if (!w.found) throw Error(ErrorCode::NotMinimizing, "no candidate inner product works", w.candidates);
  SharpFamily sharp = check_sharpness(m, rep, tol);
  HomogeneityResult h = homogeneity_map(m, rep, w.ip, sharp, a, b, tol);
  Json j = h.to_json(h.model.space);
  j["inner_product"] = w.ip.origin;
  std::string text = "certified order automorphism, |T(a) - b| = " + num(h.residual) + "\n";
  for (Eigen::Index i = 0; i < h.map.matrix.rows(); ++i) {
    text += " ";
    for (Eigen::Index k = 0; k < h.map.matrix.cols(); ++k) text += " " + num(h.map.matrix(i, k));
    text += "\n";
  }
  return {j, 0, text};
}

Outcome_ cmd_lambda(int n, double lambda) {
  if (n < 2) throw Error(ErrorCode::BadDimension, "n must be at least 2");
  zoo::LambdaIP ip = zoo::lambda_inner_product(n, lambda);
  std::string text = ip.positive ? "positive" : "not positive";
  text += ": <P_x,P_y> = " + num(ip.orthogonal_value) + " at orthogonal pair";
  text += std::string(", minimizing = ") + (ip.minimizing ? "true" : "false") + "\n";
  return {ip.to_json(), 0, text};
}

Outcome_ cmd_haar(int n, long samples, std::uint64_t seed) {
  if (n < 2) throw Error(ErrorCode::BadDimension, "n must be at least 2");
  if (samples < 2) throw Error(ErrorCode::InvalidArgument, "need at least two samples");
  zoo::HaarEstimate h = zoo::haar_canonical_ip(n, samples, seed);
  std::string text = "lambda_hat = " + num(h.lambda_hat) + " +- " + num(h.standard_error) + " (" +
                     std::to_string(samples) + " samples, seed " + std::to_string(seed) + ")\n";
  return {h.to_json(), 0, text};
}

int exit_code_for(const Error& e) {
  return e.code() == ErrorCode::ParseError || e.code() == ErrorCode::IoError ? 3 : 2;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Operational probabilistic model toolkit"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string format = "json";
  std::vector<std::string> tol_overrides;
  std::string profile;
  app.add_option("--format", format, "Report format")->check(CLI::IsMember({"json", "text"}));
  app.add_option("--tol", tol_overrides, "Tolerance override name=value (repeatable)");
  app.add_option("--profile", profile, "Tolerance profile (default, strict, loose)");

  std::string source;
  auto* validate = app.add_subcommand("validate", "Check a model file or zoo model");
  validate->add_option("model", source, "Model file or zoo name")->required();

  AxiomOptions axiom_opts;
  auto* verify = app.add_subcommand("verify-axioms", "Run the full axiom pipeline");
  verify->add_option("model", source, "Model file or zoo name")->required();
  verify->add_option("--seed", axiom_opts.seed, "Seed for sampled states and pairs");
  verify->add_option("--samples", axiom_opts.state_samples, "Number of sampled states");

  std::string state;
  auto* entropy = app.add_subcommand("entropy", "Measurement and mixing entropy of a state");
  entropy->add_option("model", source, "Model file or zoo name")->required();
  entropy->add_option("--state", state, "Outcome values, e.g. x0=1,y0=1/2")->required();

  std::string which_ip = "canonical";
  auto* embed = app.add_subcommand("embed", "Embed the outcomes as unit vectors");
  embed->add_option("model", source, "Model file or zoo name")->required();
  embed->add_option("--ip", which_ip, "Inner product")->check(CLI::IsMember({"canonical", "standard", "working"}));

  std::string a_text;
  std::string b_text;
  auto* homog = app.add_subcommand("homogeneity-map", "Order automorphism sending effect a to effect b");
  homog->add_option("model", source, "Model file or zoo name")->required();
  homog->add_option("--a", a_text, "Interior effect in V* coordinates")->required();
  homog->add_option("--b", b_text, "Interior effect in V* coordinates")->required();

  int n = 0;
  double lambda = 0;
  auto* lam = app.add_subcommand("lambda", "Positivity of the unitarily invariant form with parameter lambda");
  lam->add_option("n", n, "Hilbert space dimension")->required();
  lam->add_option("lambda", lambda, "Parameter")->required();

  long samples = 100000;
  std::uint64_t seed = 0;
  auto* haar = app.add_subcommand("haar-lambda", "Monte-Carlo estimate of lambda for the Haar-averaged form");
  haar->add_option("n", n, "Hilbert space dimension")->required();
  haar->add_option("--samples", samples, "Number of Haar samples");
  haar->add_option("--seed", seed, "Random seed")->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  }

  std::string command = app.get_subcommands().front()->get_name();
  Json envelope{{"schema_version", kSchemaVersion}, {"command", command}};
  Tolerances tol;
  Outcome_ result;
  try {
    if (profile.empty()) {
      if (const char* env = std::getenv("OPM_TOLERANCE_PROFILE")) profile = env;
    }
    if (!profile.empty() && profile != "default" && profile != "strict" && profile != "loose") {
      throw Error(ErrorCode::InvalidArgument, "unknown tolerance profile '" + profile + "'");
    }
    tol = Tolerances::profile(profile);
    for (const auto& o : tol_overrides) {
      auto eq = o.find('=');
      if (eq == std::string::npos) throw Error(ErrorCode::InvalidArgument, "expected name=value, got '" + o + "'");
      tol.set(o.substr(0, eq), parse_rational(o.substr(eq + 1)).get_d());
    }
    envelope["tolerances"] = tol.to_json();
    envelope["tolerance_profile"] = profile.empty() ? "default" : profile;
    if (!source.empty()) envelope["model"] = source;

    if (*validate) result = cmd_validate(source, tol);
    else if (*verify) {
      envelope["seed"] = axiom_opts.seed;
      result = cmd_verify(source, axiom_opts, tol);
    } else if (*entropy) result = cmd_entropy(source, state, tol);
    else if (*embed) result = cmd_embed(source, which_ip, tol);
    else if (*homog) result = cmd_homogeneity(source, a_text, b_text, tol);
    else if (*lam) result = cmd_lambda(n, lambda);
    else {
      envelope["seed"] = seed;
      result = cmd_haar(n, samples, seed);
    }
  } catch (const Error& e) {
    result.code = exit_code_for(e);
    if (command == "validate") result.result = Json{{"valid", false}, {"errors", Json::array({e.to_json()})}};
    else result.result = Json{{"error", e.to_json()}};
    result.text = std::string("error: ") + e.what() + "\n";
    err << e.what() << "\n";
  }
  envelope["result"] = result.result;
  envelope["exit_code"] = result.code;
  if (format == "json") out << envelope.dump(2) << "\n";
  else out << result.text;
  return result.code;
}

}  // namespace opm
